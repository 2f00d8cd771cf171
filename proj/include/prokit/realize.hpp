#pragma once

#include <array>
#include <string>

#include "prokit/pro_core.hpp"
#include "prokit/types.hpp"

namespace prokit {

/// Result of the lift factorization: Q = B^T B, R = B^T A B with
/// A = omega * [[0, I_q], [-I_q, 0]] and (A, B) controllable.
struct LiftResult {
    Index q = 0;
    Matrix B;  // 2q x m
    double omega = 0.0;

    Matrix state_matrix() const;
};

struct MinimalityCondition {
    std::string name;
    bool holds = false;
    Index required_rank = 0;
    Index measured_rank = 0;
};

/// The five descriptor-minimality rank conditions. (i)/(iii) are evaluated at
/// the finite generalized eigenvalues of the pencil plus random probe points
/// (the rank can only drop at pencil eigenvalues); `spectrum_points` records
/// how many points were checked.
struct MinimalityReport {
    bool minimal = false;
    std::array<MinimalityCondition, 5> conditions;
    int spectrum_points = 0;
};

/// Constructive factorization of a dominated residue pair (omega, Q, R):
/// rank-factor Q, compress R onto the row space, block-diagonalize the
/// compressed skew matrix, and rebuild B against the single-frequency state
/// matrix. Requires -omega Q <= iR <= omega Q; for omega = 0 this forces
/// R = 0 and (A, B) is controllable only when rank Q is even.
LiftResult lift_factorization(double omega, const Matrix& Q, const Matrix& R,
                              const ToleranceConfig& tol = {});

/// Per-term lift, A block-diagonal over the term frequencies, B stacked.
/// M = Q, D = R. An omega = 0 term gets a zero A-block of size rank(Q_j).
StateSpaceRealization foster_to_state_space(const FosterForm& f, const ToleranceConfig& tol = {});

/// Skew-canonical decomposition of A; one term per distinct frequency with
/// Q_j = B_j^T B_j and R_j = B_j^T A_j B_j; the kernel of A yields the
/// omega = 0 term; Q = M, D = R. Odd state dimension is zero-padded first.
FosterForm state_space_to_foster(const StateSpaceRealization& r, const ToleranceConfig& tol = {});

/// Weierstrass-form descriptor realization of z M + D + B^T (zI - A)^{-1} B
/// with pencil size n + 2 rank(M).
DescriptorRealization state_space_to_weierstrass(const StateSpaceRealization& r,
                                                 const ToleranceConfig& tol = {});

/// Hautus verdict: for every eigenvalue of A, the left eigenspace basis Y
/// must satisfy rank(Y^* B) = dim. Columns of Y^* B are equilibrated before
/// the rank test so channels of very different scale are weighed equally.
bool controllability_hautus(const Matrix& A, const Matrix& B, const ToleranceConfig& tol = {});

/// Finite-sum controllability Gramian sum_{j<n} A^j B B^T (A^T)^j. Kept as a
/// cross-check for small n; ill-conditioned beyond that.
Matrix controllability_gramian(const Matrix& A, const Matrix& B);

/// det(z E - A) not identically zero, decided by sampling at `points` random z.
bool pencil_regular_sampling(const Matrix& E, const Matrix& A, const ToleranceConfig& tol = {},
                             int points = 10, std::uint64_t seed = 811);

MinimalityReport descriptor_minimality(const DescriptorRealization& d,
                                       const ToleranceConfig& tol = {});

}  // namespace prokit
