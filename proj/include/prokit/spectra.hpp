#pragma once

#include <limits>
#include <vector>

#include "prokit/invert.hpp"
#include "prokit/pro_core.hpp"
#include "prokit/types.hpp"

namespace prokit {

/// A pole or zero location omega >= 0, standing for the conjugate pair
/// +-i omega (omega = infinity for the pole/zero at infinity). For omega > 0
/// the multiplicity is the eigenspace dimension at +i omega; omega = 0
/// carries the full kernel dimension; infinity carries rank M.
struct SpectralPoint {
    double omega = 0.0;
    Index multiplicity = 0;

    bool at_infinity() const { return std::isinf(omega); }
};

struct PoleZeroReport {
    std::vector<SpectralPoint> poles;
    std::vector<SpectralPoint> zeros;
    Index m = 0;
};

std::vector<SpectralPoint> pole_report(const StateSpaceRealization& r,
                                       const ToleranceConfig& tol = {});

/// Zeros are the poles of the inverse; requires invertibility.
std::vector<SpectralPoint> zero_report(const StateSpaceRealization& r,
                                       const ToleranceConfig& tol = {});

PoleZeroReport pole_zero_report(const StateSpaceRealization& r, const ToleranceConfig& tol = {});

/// Pole multiplicity of a single Foster term without building the lift:
/// p = rank Q_j, compress R_j, count eigenvalues at the frequency. Equals the
/// q of lift_factorization for omega > 0; returns rank Q_j at omega = 0.
Index foster_pole_multiplicity(const FosterTerm& term, const ToleranceConfig& tol = {});

enum class InterlaceFamily : int {
    inv_below_pole = 0,   // lambda_{j - m2/2 - m3}(iA_inv) <= lambda_j(iA)
    pole_below_inv = 1,   // lambda_{j+1}(iA) <= lambda_{j + m2/2 + m1 + 1}(iA_inv)
    pole_below_zero = 2,  // lambda_{j - m2/2 - m1}(iA) <= lambda_j(iA_inv)
    zero_below_pole = 3,  // lambda_{j+1}(iA_inv) <= lambda_{j + m2/2 + m3 + 1}(iA)
};

struct InterlaceInequality {
    int j = 0;
    InterlaceFamily family = InterlaceFamily::inv_below_pole;
    bool holds = false;
    double slack = 0.0;  // rhs - lhs, negative means violated
};

struct InterlaceReport {
    std::vector<double> eigs_A;     // spectrum of iA, ascending
    std::vector<double> eigs_Ainv;  // spectrum of iA_inv, ascending
    Index m1 = 0, m2 = 0, m3 = 0;
    std::vector<InterlaceInequality> inequality_results;
    bool all_hold = true;
};

/// Checks the four eigenvalue-ordering families relating the spectra of iA
/// and iA_inv; indices outside the list follow the -inf/+inf convention, so
/// only inequalities with both sides finite are recorded.
InterlaceReport interlace_verify(const StateSpaceRealization& r, const ToleranceConfig& tol = {});

/// Between any two consecutive distinct pole locations on the signed
/// imaginary axis, zero multiplicities must sum to at most m, and poles
/// between consecutive zeros likewise. Co-located poles and zeros are not
/// "between" anything and do not count.
bool multiplicity_between_caps(const std::vector<SpectralPoint>& poles,
                               const std::vector<SpectralPoint>& zeros, Index m,
                               const ToleranceConfig& tol = {});

/// Weyl two-sided bounds lambda_{j+k-m}(M+N) <= lambda_j(M) + lambda_k(N)
/// <= lambda_{j+k-1}(M+N) over every applicable (j, k).
bool weyl_inequalities(const ComplexMatrix& M, const ComplexMatrix& N, double slack = 1e-10);

/// Signed-perturbation bounds with r+/r- the positive/negative eigenvalue
/// counts of N.
bool weyl_signed_bounds(const ComplexMatrix& M, const ComplexMatrix& N, double slack = 1e-10,
                        const ToleranceConfig& tol = {});

/// Cauchy interlacing of a leading principal block against the full matrix.
bool cauchy_interlacing(const ComplexMatrix& H, Index top_block, double slack = 1e-10);

/// Weyl + signed bounds for (M, N) and Cauchy interlacing of M inside
/// [[M, K], [K*, N]] with K = 0 padding omitted — the caller supplies the
/// partitioned H separately via cauchy_interlacing.
bool eig_perturbation_bounds(const ComplexMatrix& M, const ComplexMatrix& N, double slack = 1e-10,
                             const ToleranceConfig& tol = {});

}  // namespace prokit
