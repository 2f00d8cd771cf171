#include "prokit/matlin.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace prokit {

namespace {

void require_square(const Matrix& X, const char* who) {
    if (X.rows() != X.cols()) {
        throw StructuralError(std::string(who) + ": matrix must be square, got " +
                              std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    }
}

void require_finite(const Matrix& X, const char* who) {
    if (!X.allFinite()) {
        throw StructuralError(std::string(who) + ": matrix has non-finite entries");
    }
}

}  // namespace

Matrix SkewCanonicalForm::canonical() const {
    const Index n = size();
    Matrix C = Matrix::Zero(n, n);
    Index off = 0;
    for (const auto& blk : blocks) {
        const Index k = blk.multiplicity;
        C.block(off, off + k, k, k) = blk.omega * Matrix::Identity(k, k);
        C.block(off + k, off, k, k) = -blk.omega * Matrix::Identity(k, k);
        off += 2 * k;
    }
    return C;
}

std::vector<double> SkewCanonicalForm::signed_spectrum() const {
    std::vector<double> eigs;
    eigs.reserve(static_cast<std::size_t>(size()));
    for (const auto& blk : blocks) {
        for (Index i = 0; i < blk.multiplicity; ++i) {
            eigs.push_back(blk.omega);
            eigs.push_back(-blk.omega);
        }
    }
    for (Index i = 0; i < zero_dim; ++i) eigs.push_back(0.0);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

bool is_symmetric(const Matrix& X, double eq_rel) {
    if (X.rows() != X.cols()) return false;
    return (X - X.transpose()).norm() <= eq_rel * (1.0 + X.norm());
}

bool is_skew_symmetric(const Matrix& X, double eq_rel) {
    if (X.rows() != X.cols()) return false;
    return (X + X.transpose()).norm() <= eq_rel * (1.0 + X.norm());
}

Matrix require_symmetric(const Matrix& X, const ToleranceConfig& tol, const char* who) {
    require_square(X, who);
    require_finite(X, who);
    if (!is_symmetric(X, tol.eq_rel)) {
        throw StructuralError(std::string(who) + ": matrix is not symmetric within eq_rel (residual " +
                              std::to_string((X - X.transpose()).norm()) + ")");
    }
    return (X + X.transpose()) / 2.0;
}

Matrix require_skew(const Matrix& X, const ToleranceConfig& tol, const char* who) {
    require_square(X, who);
    require_finite(X, who);
    if (!is_skew_symmetric(X, tol.eq_rel)) {
        throw StructuralError(std::string(who) + ": matrix is not skew-symmetric within eq_rel (residual " +
                              std::to_string((X + X.transpose()).norm()) + ")");
    }
    return (X - X.transpose()) / 2.0;
}

std::pair<Vector, Matrix> sym_eig(const Matrix& S, const ToleranceConfig& tol) {
    const Matrix Ssym = require_symmetric(S, tol, "sym_eig");
    Eigen::SelfAdjointEigenSolver<Matrix> es(Ssym);
    if (es.info() != Eigen::Success) {
        throw DomainError("sym_eig: eigendecomposition failed to converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

SkewCanonicalForm skew_canonical(const Matrix& A, const ToleranceConfig& tol, double scale_hint) {
    const Matrix As = require_skew(A, tol, "skew_canonical");
    const Index n = As.rows();

    SkewCanonicalForm out;
    out.U = Matrix::Identity(n, n);
    out.zero_dim = n;
    if (n == 0) return out;

    // A^T A = -A^2 is PSD with eigenvalues omega^2; its eigenspaces are
    // A-invariant, which lets all pairing happen in real arithmetic.
    const Matrix T = ((As.transpose() * As + As * As.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(T);
    if (es.info() != Eigen::Success) {
        throw DomainError("skew_canonical: eigendecomposition failed to converge");
    }

    Vector omega(n);
    for (Index i = 0; i < n; ++i) omega(i) = std::sqrt(std::max(es.eigenvalues()(n - 1 - i), 0.0));
    Matrix V(n, n);
    for (Index i = 0; i < n; ++i) V.col(i) = es.eigenvectors().col(n - 1 - i);  // descending

    const double smax = omega(0);
    const double anchor = scale_hint > 0.0 ? scale_hint : smax;
    const double zero_thr = tol.rank_rel * anchor * static_cast<double>(n);
    const double merge_tol = tol.rank_rel * smax;

    Index kept = 0;
    while (kept < n && omega(kept) > zero_thr) ++kept;
    if (kept % 2 == 1) --kept;  // nonzero spectrum pairs up; drop a straddler to the kernel

    out.U.setZero();
    Index ucol = 0;
    Index i = 0;
    while (i < kept) {
        Index j = i;
        while (j + 1 < kept && (omega(j) - omega(j + 1)) <= merge_tol) ++j;
        if ((j - i + 1) % 2 == 1) {
            j += (j + 1 < kept) ? 1 : -1;
        }
        const Index dim = j - i + 1;
        const Index k = dim / 2;
        const double wbar = omega.segment(i, dim).mean();

        const Matrix W = V.middleCols(i, dim);
        const Matrix S = W.transpose() * As * W;

        // Extract k orthonormal pairs (u, v) with S u = -wbar v, S v = wbar u.
        Matrix P(dim, 2 * k);
        Index extracted = 0;
        for (Index t = 0; t < k; ++t) {
            Matrix resid = Matrix::Identity(dim, dim);
            if (extracted > 0) {
                resid -= P.leftCols(extracted) * P.leftCols(extracted).transpose();
            }
            Index best = 0;
            resid.colwise().norm().maxCoeff(&best);
            Vector u = resid.col(best);
            u.normalize();
            Vector v = -S * u / wbar;
            if (extracted > 0) {
                v -= P.leftCols(extracted) * (P.leftCols(extracted).transpose() * v);
            }
            v -= u * u.dot(v);
            const double vn = v.norm();
            if (vn < 0.5) {
                throw DegeneracyError("skew_canonical: pair extraction degenerate at omega " +
                                      std::to_string(wbar));
            }
            v /= vn;
            P.col(extracted++) = u;
            P.col(extracted++) = v;
        }
        // frame columns ordered [u_1..u_k | v_1..v_k] so the block reads
        // wbar * [[0, I_k], [-I_k, 0]]
        for (Index t = 0; t < k; ++t) out.U.col(ucol + t) = W * P.col(2 * t);
        for (Index t = 0; t < k; ++t) out.U.col(ucol + k + t) = W * P.col(2 * t + 1);
        out.blocks.push_back({wbar, k});
        ucol += 2 * k;
        i = j + 1;
    }

    out.zero_dim = n - kept;
    out.U.rightCols(out.zero_dim) = V.rightCols(out.zero_dim);
    return out;
}

namespace {

template <typename Mat>
Index rank_svd_impl(const Mat& X, const ToleranceConfig& tol) {
    if (X.rows() == 0 || X.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(X);
    const auto& sv = svd.singularValues();
    const double thr = tol.rank_rel * sv(0) * static_cast<double>(std::max(X.rows(), X.cols()));
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > thr) ++r;
    }
    return r;
}

}  // namespace

Index rank_svd(const Matrix& X, const ToleranceConfig& tol) {
    require_finite(X, "rank_svd");
    return rank_svd_impl(X, tol);
}

Index rank_svd(const ComplexMatrix& X, const ToleranceConfig& tol) {
    if (!X.allFinite()) throw StructuralError("rank_svd: matrix has non-finite entries");
    return rank_svd_impl(X, tol);
}

Index rank_equilibrated(const ComplexMatrix& X, const ToleranceConfig& tol) {
    if (X.rows() == 0 || X.cols() == 0) return 0;
    ComplexMatrix Xn = X;
    for (Index j = 0; j < Xn.cols(); ++j) {
        const double nrm = Xn.col(j).norm();
        if (nrm > 0) Xn.col(j) /= nrm;
    }
    return rank_svd_impl(Xn, tol);
}

Matrix pinv(const Matrix& X, const ToleranceConfig& tol) {
    require_finite(X, "pinv");
    if (X.rows() == 0 || X.cols() == 0) return Matrix::Zero(X.cols(), X.rows());
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double thr = tol.rank_rel * sv(0) * static_cast<double>(std::max(X.rows(), X.cols()));
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > thr) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

bool psd_pair_check(const Matrix& S, const Matrix& T, const ToleranceConfig& tol) {
    const Matrix Ss = require_symmetric(S, tol, "psd_pair_check (S)");
    const Matrix Ts = require_skew(T, tol, "psd_pair_check (T)");
    if (Ss.rows() != Ts.rows()) {
        throw StructuralError("psd_pair_check: S and T must have the same size");
    }
    const Index m = Ss.rows();
    if (m == 0) return true;
    Matrix H(2 * m, 2 * m);
    H << Ss, -Ts, Ts, Ss;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -tol.psd_abs * (1.0 + Ss.norm());
}

Matrix gram_factor(const Matrix& Q, const ToleranceConfig& tol) {
    const Matrix Qs = require_symmetric(Q, tol, "gram_factor");
    const Index m = Qs.rows();
    if (m == 0) return Matrix::Zero(0, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Qs);
    const Vector lam = es.eigenvalues();
    if (lam(0) < -tol.psd_abs * (1.0 + Qs.norm())) {
        throw DomainError("gram_factor: matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(lam(0)) + ")");
    }
    const double lmax = std::max(lam(m - 1), 0.0);
    const double thr = tol.rank_rel * lmax * static_cast<double>(m);
    Index p = 0;
    for (Index i = 0; i < m; ++i) {
        if (lam(i) > thr) ++p;
    }
    Matrix B0(p, m);
    for (Index i = 0; i < p; ++i) {
        const Index src = m - 1 - i;  // descending eigenvalues
        B0.row(i) = std::sqrt(lam(src)) * es.eigenvectors().col(src).transpose();
    }
    return B0;
}

}  // namespace prokit
