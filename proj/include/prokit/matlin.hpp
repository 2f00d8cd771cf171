#pragma once

#include <vector>

#include "prokit/types.hpp"

namespace prokit {

/// One frequency block of the orthogonal canonical form of a real
/// skew-symmetric matrix: omega * [[0, I_k], [-I_k, 0]].
struct SkewBlock {
    double omega = 0.0;
    Index multiplicity = 0;
};

/// U^T A U = diag(block_1, ..., block_s, 0_{zero_dim}) with U orthogonal and
/// the omegas strictly decreasing.
struct SkewCanonicalForm {
    Matrix U;
    std::vector<SkewBlock> blocks;
    Index zero_dim = 0;

    Index size() const { return U.rows(); }
    /// The block-diagonal matrix the form represents.
    Matrix canonical() const;
    /// Signed spectrum of iA implied by the form, ascending.
    std::vector<double> signed_spectrum() const;
};

bool is_symmetric(const Matrix& X, double eq_rel);
bool is_skew_symmetric(const Matrix& X, double eq_rel);

/// (X + X^T)/2, rejecting inputs that are not symmetric within eq_rel.
Matrix require_symmetric(const Matrix& X, const ToleranceConfig& tol, const char* who);
/// (X - X^T)/2, rejecting inputs that are not skew-symmetric within eq_rel.
Matrix require_skew(const Matrix& X, const ToleranceConfig& tol, const char* who);

/// Symmetric eigendecomposition, eigenvalues ascending, V orthogonal with
/// S V = V diag(eigenvalues).
std::pair<Vector, Matrix> sym_eig(const Matrix& S, const ToleranceConfig& tol = {});

/// Orthogonal canonical form of a skew-symmetric matrix. Eigenvalue clusters
/// closer than rank_rel * ||A|| are merged into one block. `scale_hint`, when
/// positive, anchors the zero/nonzero split instead of ||A|| itself (used
/// when A is a compression of a larger matrix whose scale is authoritative).
SkewCanonicalForm skew_canonical(const Matrix& A, const ToleranceConfig& tol = {},
                                 double scale_hint = 0.0);

/// Number of singular values above rank_rel * sigma_max * max(rows, cols).
Index rank_svd(const Matrix& X, const ToleranceConfig& tol = {});
Index rank_svd(const ComplexMatrix& X, const ToleranceConfig& tol = {});

/// rank_svd after normalizing every nonzero column to unit norm. Scale
/// invariant per column; used where entries of one matrix span many orders
/// of magnitude (Hautus tests, descriptor minimality).
Index rank_equilibrated(const ComplexMatrix& X, const ToleranceConfig& tol = {});

/// Moore-Penrose pseudoinverse with the rank_svd threshold policy.
Matrix pinv(const Matrix& X, const ToleranceConfig& tol = {});

/// Decides S + iT >= 0 for symmetric S and skew-symmetric T via the real
/// embedding [[S, -T], [T, S]]: true iff its smallest eigenvalue is
/// >= -psd_abs * (1 + ||S||).
bool psd_pair_check(const Matrix& S, const Matrix& T, const ToleranceConfig& tol = {});

/// Factor a PSD matrix Q = B0^T B0 with B0 of full row rank p = rank(Q).
/// B0 is the eigendecomposition square root restricted to its row space.
Matrix gram_factor(const Matrix& Q, const ToleranceConfig& tol = {});

}  // namespace prokit
