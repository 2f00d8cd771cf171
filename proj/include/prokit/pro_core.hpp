#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prokit/matlin.hpp"
#include "prokit/types.hpp"

namespace prokit {

/// One partial-fraction term (z Qj + Rj) / (z^2 + omega^2).
struct FosterTerm {
    double omega = 0.0;
    Matrix Q;
    Matrix R;
};

/// Partial-fraction form F(z) = z Q + R + sum_j (z Qj + Rj)/(z^2 + omega_j^2)
/// with Q, Qj symmetric PSD, R, Rj skew-symmetric, and per-term domination
/// -omega_j Qj <= i Rj <= omega_j Qj.
struct FosterForm {
    Index m = 0;
    Matrix Q;
    Matrix R;
    std::vector<FosterTerm> terms;
};

/// F(z) = z M + D + B^T (z I_n - A)^{-1} B with M PSD, A and D skew-symmetric
/// and (A, B) controllable.
struct StateSpaceRealization {
    Matrix M;
    Matrix D;
    Matrix A;
    Matrix B;

    Index state_dim() const { return A.rows(); }
    Index ports() const { return M.rows(); }
};

/// F(z) = D + C^T (z E - A)^{-1} B with (E, A) a regular pencil.
struct DescriptorRealization {
    Matrix E;
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;

    Index pencil_dim() const { return E.rows(); }
    Index ports() const { return D.rows(); }
};

struct Violation {
    std::string condition;
    std::string location;
    double residual = 0.0;
};

struct ValidationReport {
    bool passed = true;
    std::vector<Violation> violations;

    void fail(std::string condition, std::string location, double residual) {
        passed = false;
        violations.push_back({std::move(condition), std::move(location), residual});
    }
};

/// Domain error that carries the validation report explaining the rejection.
class ValidationFailure : public DomainError {
  public:
    ValidationFailure(const std::string& what, ValidationReport report)
        : DomainError(what), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

  private:
    ValidationReport report_;
};

/// Merge terms whose omegas coincide within rank_rel * max(1, omega_max),
/// summing their (Q, R); terms sorted by ascending omega; an omega below the
/// merge threshold snaps to exactly zero.
FosterForm merge_terms(FosterForm f, const ToleranceConfig& tol = {});

ComplexMatrix eval_foster(const FosterForm& f, Complex z, const ToleranceConfig& tol = {});
ComplexMatrix eval_state_space(const StateSpaceRealization& r, Complex z,
                               const ToleranceConfig& tol = {});
ComplexMatrix eval_descriptor(const DescriptorRealization& d, Complex z,
                              const ToleranceConfig& tol = {});

ValidationReport validate_foster(const FosterForm& f, const ToleranceConfig& tol = {});
ValidationReport validate_realization(const StateSpaceRealization& r,
                                      const ToleranceConfig& tol = {});

using MatrixFunction = std::function<ComplexMatrix(Complex)>;

/// Necessary-condition sampler for membership: Re F(z) >= 0 at the given
/// right-half-plane samples, F(t) real and F(it) anti-Hermitian at the given
/// real t. Sampling cannot certify membership; the structural validators do.
ValidationReport check_pro_sampling(const MatrixFunction& f,
                                    const std::vector<Complex>& samples,
                                    const std::vector<double>& axis_samples,
                                    const ToleranceConfig& tol = {});

struct SampleSet {
    std::vector<Complex> half_plane;
    std::vector<double> axis;
    std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultSampleSeed = 20240901;

/// Default sampling set: 50 points in {Re z in (0, 10], |Im z| <= 10} plus 20
/// real axis values in [-10, 10], drawn from a seeded deterministic stream.
/// Points where `f` throws (pole proximity) are rejected and redrawn.
SampleSet default_pro_samples(const MatrixFunction& f, std::uint64_t seed = kDefaultSampleSeed);

}  // namespace prokit
