#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "prokit/types.hpp"

namespace prokit {

/// Deterministic random source. Uniform and normal variates are derived from
/// raw mt19937_64 words by fixed arithmetic (no std::*_distribution), so the
/// same seed yields the same stream on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        // 53 random bits into [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t integer(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u <= 0.0) u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    Matrix gaussian(Index rows, Index cols) {
        Matrix X(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) X(i, j) = normal();
        return X;
    }

    Vector gaussian_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    Complex complex_in_rect(double re_lo, double re_hi, double im_lo, double im_hi) {
        const double re = uniform(re_lo, re_hi);
        return {re, uniform(im_lo, im_hi)};
    }

    /// Haar-ish random orthogonal matrix via QR of a Gaussian sample.
    Matrix orthogonal(Index n);

    /// Random symmetric matrix with the given norm scale.
    Matrix symmetric(Index n, double scale = 1.0);

    /// Random skew-symmetric matrix.
    Matrix skew(Index n, double scale = 1.0);

    /// Random symmetric PSD matrix of the given rank.
    Matrix psd(Index n, Index rank, double scale = 1.0);

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace prokit
