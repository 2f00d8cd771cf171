#include "prokit/generate.hpp"

#include <algorithm>
#include <vector>

namespace prokit {

namespace {

Matrix rotation_block(double omega, Index q) {
    Matrix A = Matrix::Zero(2 * q, 2 * q);
    A.block(0, q, q, q) = omega * Matrix::Identity(q, q);
    A.block(q, 0, q, q) = -omega * Matrix::Identity(q, q);
    return A;
}

}  // namespace

FosterForm random_foster(const GeneratorOptions& opts) {
    Rng rng(opts.seed);
    const Index m = opts.m;

    FosterForm f;
    f.m = m;
    const Index qrank = opts.linear_rank >= 0 ? std::min<Index>(opts.linear_rank, m)
                                              : static_cast<Index>(rng.integer(m + 1));
    f.Q = rng.psd(m, qrank);
    f.R = rng.skew(m);

    // distinct frequencies with a healthy gap
    std::vector<double> omegas;
    while (static_cast<Index>(omegas.size()) < opts.terms) {
        const double w = rng.uniform(0.4, 8.0);
        bool ok = true;
        for (double o : omegas) ok = ok && std::abs(o - w) > 0.15;
        if (ok) omegas.push_back(w);
    }
    std::sort(omegas.begin(), omegas.end());
    if (opts.allow_zero_omega && !omegas.empty()) omegas.front() = 0.0;

    for (double w : omegas) {
        FosterTerm t;
        t.omega = w;
        if (w == 0.0) {
            const Index half = 1 + static_cast<Index>(rng.integer((m + 1) / 2));
            const Matrix B0 = rng.gaussian(2 * std::min<Index>(half, (m + 1) / 2), m);
            t.Q = B0.transpose() * B0;
            t.R = Matrix::Zero(m, m);
        } else {
            const Index q = 1 + static_cast<Index>(rng.integer(m));
            const Matrix Bj = rng.gaussian(2 * q, m);
            t.Q = Bj.transpose() * Bj;
            t.R = Bj.transpose() * rotation_block(w, q) * Bj;
            t.R = (t.R - t.R.transpose()) / 2.0;
        }
        t.Q = (t.Q + t.Q.transpose()) / 2.0;
        f.terms.push_back(std::move(t));
    }
    return merge_terms(std::move(f), {});
}

}  // namespace prokit
