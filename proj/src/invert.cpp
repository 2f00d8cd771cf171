#include "prokit/invert.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace prokit {

namespace {

// kept/discarded singular values must be separated by this factor
constexpr double kGapFactor = 10.0;

struct KernelSplit {
    Matrix range;   // orthonormal basis of the kept (range) directions
    Matrix kernel;  // orthonormal basis of the numerical kernel
};

KernelSplit split_psd_kernel(const Matrix& M, const ToleranceConfig& tol, const char* who) {
    const Index m = M.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    const Vector lam = es.eigenvalues();  // ascending
    const double lmax = m > 0 ? std::max(lam(m - 1), 0.0) : 0.0;
    const double thr = tol.rank_rel * lmax * static_cast<double>(m);
    Index first_kept = m;
    for (Index i = 0; i < m; ++i) {
        if (lam(i) > thr) {
            first_kept = i;
            break;
        }
    }
    const Index rank = m - first_kept;
    if (rank > 0 && first_kept > 0) {
        const double drop = std::max(lam(first_kept - 1), 0.0);
        if (drop > 0 && lam(first_kept) < kGapFactor * drop) {
            throw DegeneracyError(std::string(who) + ": eigenvalue split is ambiguous (kept " +
                                  std::to_string(lam(first_kept)) + " vs discarded " +
                                  std::to_string(drop) + ", gap < 10x)");
        }
    }
    KernelSplit out;
    out.range = Matrix(m, rank);
    for (Index i = 0; i < rank; ++i) out.range.col(i) = es.eigenvectors().col(m - 1 - i);
    out.kernel = es.eigenvectors().leftCols(first_kept);
    return out;
}

Matrix principal_inv_sqrt(const Matrix& S, const ToleranceConfig& tol, const char* who) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    const Vector lam = es.eigenvalues();
    if (lam.size() > 0 && lam(0) <= 0.0) {
        throw DegeneracyError(std::string(who) + ": matrix not positive definite");
    }
    return es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

InputSpaceDecomposition decompose_input_space(const Matrix& M, const Matrix& D, const Matrix& B,
                                              const ToleranceConfig& tol) {
    const Matrix Ms = require_symmetric(M, tol, "decompose_input_space (M)");
    const Matrix Ds = require_skew(D, tol, "decompose_input_space (D)");
    if (Ms.rows() != Ds.rows() || B.cols() != Ms.rows()) {
        throw StructuralError("decompose_input_space: M, D, B port dimensions disagree");
    }
    const Index m = Ms.rows();

    const KernelSplit msplit = split_psd_kernel(Ms, tol, "decompose_input_space (Ker M)");
    const Matrix& V1 = msplit.range;
    const Matrix& Vker = msplit.kernel;
    const Index m1 = V1.cols();

    // D compressed to Ker M; the zero split is anchored on ||D||, not on the
    // compressed block's own scale (an exactly-zero block must read as zero)
    Matrix G = Vker.transpose() * Ds * Vker;
    G = (G - G.transpose()) / 2.0;
    const double d_scale = Ds.norm();
    Index m2 = 0;
    if (G.rows() > 0) {
        Eigen::JacobiSVD<Matrix> svd(G);
        const auto& sv = svd.singularValues();
        const double thr = tol.rank_rel * std::max(d_scale, 1e-300) * static_cast<double>(m);
        while (m2 < sv.size() && sv(m2) > thr) ++m2;
        if (m2 % 2 == 1) {
            throw DegeneracyError(
                "decompose_input_space: numerical rank of the Ker M compression of D is odd (" +
                std::to_string(m2) + "); the skew split is ambiguous");
        }
        if (m2 > 0 && m2 < sv.size() && sv(m2) > 0 && sv(m2 - 1) < kGapFactor * sv(m2)) {
            throw DegeneracyError("decompose_input_space: singular-value split of the D "
                                  "compression is ambiguous (kept " +
                                  std::to_string(sv(m2 - 1)) + " vs discarded " +
                                  std::to_string(sv(m2)) + ", gap < 10x)");
        }
    }
    const SkewCanonicalForm gform =
        G.rows() > 0 ? skew_canonical(G, tol, std::max(d_scale, 1e-300))
                     : SkewCanonicalForm{Matrix::Zero(0, 0), {}, 0};
    Index two_k = 0;
    for (const auto& b : gform.blocks) two_k += 2 * b.multiplicity;
    if (two_k != m2) {
        throw DegeneracyError("decompose_input_space: inconsistent rank of the D compression (" +
                              std::to_string(two_k) + " vs " + std::to_string(m2) + ")");
    }
    const Index m3 = G.rows() - m2;

    InputSpaceDecomposition dec;
    dec.m1 = m1;
    dec.m2 = m2;
    dec.m3 = m3;
    dec.V = Matrix(m, m);
    dec.V.leftCols(m1) = V1;
    if (G.rows() > 0) {
        dec.V.middleCols(m1, m2) = Vker * gform.U.leftCols(m2);
        dec.V.rightCols(m3) = Vker * gform.U.rightCols(m3);
    }

    const Matrix V2 = dec.V.middleCols(m1, m2);
    const Matrix V3 = dec.V.rightCols(m3);
    dec.B1 = B * V1;
    dec.B2 = B * V2;
    dec.B3 = B * V3;
    dec.D11 = V1.transpose() * Ds * V1;
    dec.D11 = (dec.D11 - dec.D11.transpose()) / 2.0;
    dec.D12 = V1.transpose() * Ds * V2;
    dec.D13 = V1.transpose() * Ds * V3;
    dec.D22 = V2.transpose() * Ds * V2;
    dec.D22 = (dec.D22 - dec.D22.transpose()) / 2.0;
    dec.M1 = V1.transpose() * Ms * V1;
    dec.K1 = dec.M1.diagonal().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    dec.Xi = Matrix::Identity(m3, m3);

    const double zero_resid =
        std::max((V2.transpose() * Ds * V3).norm(), (V3.transpose() * Ds * V3).norm());
    if (zero_resid > tol.eq_rel * (1.0 + Ds.norm())) {
        throw DegeneracyError("decompose_input_space: D blocks (2,3)/(3,3) fail to vanish "
                              "(residual " + std::to_string(zero_resid) + ")");
    }
    return dec;
}

std::optional<Vector> invertibility_witness(const StateSpaceRealization& r,
                                            const ToleranceConfig& tol) {
    const Matrix Ms = require_symmetric(r.M, tol, "invertibility (M)");
    const Index m = r.ports();
    const KernelSplit msplit = split_psd_kernel(Ms, tol, "invertibility (Ker M)");
    const Index kdim = msplit.kernel.cols();
    if (kdim == 0) return std::nullopt;

    Matrix stacked(r.state_dim() + m, kdim);
    stacked.topRows(r.state_dim()) = r.B * msplit.kernel;
    stacked.bottomRows(m) = r.D * msplit.kernel;
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double thr = sv.size() > 0 ? tol.rank_rel * sv(0) * static_cast<double>(std::max(
                                           stacked.rows(), stacked.cols()))
                                     : 0.0;
    if (sv.size() == kdim && sv(kdim - 1) > thr) return std::nullopt;
    const Vector v = svd.matrixV().col(kdim - 1);
    return Vector(msplit.kernel * v);
}

bool invertibility(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    return !invertibility_witness(r, tol).has_value();
}

bool regular_pair_check(const Matrix& Ehat, const Matrix& Ahat, const ToleranceConfig& tol) {
    const Matrix Es = require_symmetric(Ehat, tol, "regular_pair_check (Ehat)");
    const Matrix As = require_skew(Ahat, tol, "regular_pair_check (Ahat)");
    if (Es.rows() != As.rows()) {
        throw StructuralError("regular_pair_check: size mismatch");
    }
    const KernelSplit split = split_psd_kernel(Es, tol, "regular_pair_check (Ker Ehat)");
    const Index kdim = split.kernel.cols();
    if (kdim == 0) return true;
    return rank_svd(Matrix(As * split.kernel), tol) == kdim;
}

DescriptorRealization inverse_descriptor_raw(const StateSpaceRealization& r,
                                             const ToleranceConfig& tol) {
    if (auto w = invertibility_witness(r, tol)) {
        throw NotInvertibleError("inverse_descriptor_raw: det F(z) vanishes identically", *w);
    }
    const Index n = r.state_dim();
    const Index m = r.ports();
    DescriptorRealization d;
    d.E = Matrix::Zero(n + m, n + m);
    d.E.topLeftCorner(n, n) = Matrix::Identity(n, n);
    d.E.bottomRightCorner(m, m) = r.M;
    d.A = Matrix::Zero(n + m, n + m);
    d.A.topLeftCorner(n, n) = r.A;
    d.A.topRightCorner(n, m) = r.B;
    d.A.bottomLeftCorner(m, n) = -r.B.transpose();
    d.A.bottomRightCorner(m, m) = -r.D;
    d.B = Matrix::Zero(n + m, m);
    d.B.bottomRows(m) = Matrix::Identity(m, m);
    d.C = d.B;
    d.D = Matrix::Zero(m, m);
    return d;
}

namespace {

// shared data of the compressed inverse constructions
struct InverseCore {
    Matrix At;  // (n+m1) x (n+m1)
    Matrix Bt;  // (n+m1) x m3
    Matrix D22i, M1i, K1iT;
    Index n = 0;
};

InverseCore build_core(const StateSpaceRealization& r, const InputSpaceDecomposition& dec,
                       const ToleranceConfig& tol) {
    const Index n = r.state_dim();
    const Index m1 = dec.m1, m3 = dec.m3;

    InverseCore core;
    core.n = n;
    core.D22i = dec.m2 > 0 ? dec.D22.inverse().eval() : Matrix::Zero(0, 0);
    Matrix K1i = Matrix::Zero(m1, m1);
    for (Index i = 0; i < m1; ++i) K1i(i, i) = 1.0 / dec.K1(i, i);
    core.K1iT = K1i.transpose();
    core.M1i = K1i * K1i.transpose();

    core.At = Matrix::Zero(n + m1, n + m1);
    core.At.topLeftCorner(n, n) = r.A - dec.B2 * core.D22i * dec.B2.transpose();
    core.At.topRightCorner(n, m1) = (dec.B1 + dec.B2 * core.D22i * dec.D12.transpose()) * K1i;
    core.At.bottomLeftCorner(m1, n) =
        core.K1iT * (-dec.B1.transpose() + dec.D12 * core.D22i * dec.B2.transpose());
    core.At.bottomRightCorner(m1, m1) =
        -core.K1iT * (dec.D11 + dec.D12 * core.D22i * dec.D12.transpose()) * K1i;
    core.At = ((core.At - core.At.transpose()) / 2.0).eval();

    core.Bt = Matrix::Zero(n + m1, m3);
    core.Bt.topRows(n) = dec.B3 * dec.Xi.transpose();
    core.Bt.bottomRows(m1) = -core.K1iT * dec.D13 * dec.Xi.transpose();

    if (rank_svd(core.Bt, tol) != m3) {
        Eigen::JacobiSVD<Matrix> svd(core.Bt, Eigen::ComputeThinV);
        Vector w = m3 > 0 ? Vector(svd.matrixV().col(m3 - 1)) : Vector::Zero(0);
        throw NotInvertibleError("inverse construction: Ker Btilde is nontrivial, F not invertible",
                                 Vector(dec.V.rightCols(m3) * w));
    }
    return core;
}

}  // namespace

IntermediateInverse inverse_descriptor_minimal(const StateSpaceRealization& r,
                                               const InputSpaceDecomposition& dec,
                                               const ToleranceConfig& tol) {
    const InverseCore core = build_core(r, dec, tol);
    const Index n = core.n;
    const Index m1 = dec.m1, m2 = dec.m2, m3 = dec.m3;
    const Index m = dec.ports();
    const Index N = n + m1 + m3;

    IntermediateInverse out;
    out.Atilde = core.At;
    out.Btilde = core.Bt;
    out.Ehat = Matrix::Zero(N, N);
    out.Ehat.topLeftCorner(n + m1, n + m1) = Matrix::Identity(n + m1, n + m1);
    out.Ahat = Matrix::Zero(N, N);
    out.Ahat.topLeftCorner(n + m1, n + m1) = core.At;
    out.Ahat.topRightCorner(n + m1, m3) = core.Bt;
    out.Ahat.bottomLeftCorner(m3, n + m1) = -core.Bt.transpose();

    Matrix Bh = Matrix::Zero(N, m);  // port blocks (m1 | m2 | m3) in split coordinates
    Bh.block(0, m1, n, m2) = dec.B2 * core.D22i;
    Bh.block(n, 0, m1, m1) = core.K1iT;
    Bh.block(n, m1, m1, m2) = -core.K1iT * dec.D12 * core.D22i;
    Bh.block(n + m1, m1 + m2, m3, m3) = dec.Xi;
    out.Bhat = Bh * dec.V.transpose();

    Matrix Dh = Matrix::Zero(m, m);
    Dh.block(m1, m1, m2, m2) = core.D22i;
    out.Dhat = dec.V * Dh * dec.V.transpose();
    return out;
}

namespace {

struct WeierstrassParts {
    Matrix Gamma;   // (n+m1) x k isometry, Im Gamma perpendicular to Im Btilde
    Matrix Ainv;    // k x k
    Matrix Binv;    // k x m, original port basis
    Matrix Kinv;    // m3 x m, original port basis
    Matrix Dcirc;   // m x m, original port basis
    Index k = 0;
};

WeierstrassParts build_weierstrass_parts(const StateSpaceRealization& r,
                                         const InputSpaceDecomposition& dec,
                                         const ToleranceConfig& tol) {
    const InverseCore core = build_core(r, dec, tol);
    const Index n = core.n;
    const Index m1 = dec.m1, m2 = dec.m2, m3 = dec.m3;
    const Index m = dec.ports();
    const Index k = n + m1 - m3;

    WeierstrassParts parts;
    parts.k = k;
    if (m3 == 0) {
        parts.Gamma = Matrix::Identity(n + m1, n + m1);
    } else {
        // left singular vectors of Btilde with zero singular value
        Eigen::JacobiSVD<Matrix> svd(core.Bt, Eigen::ComputeFullU);
        parts.Gamma = svd.matrixU().rightCols(k);
    }
    parts.Ainv = parts.Gamma.transpose() * core.At * parts.Gamma;
    parts.Ainv = ((parts.Ainv - parts.Ainv.transpose()) / 2.0).eval();

    const Matrix Phi33 =
        dec.B3.transpose() * dec.B3 + dec.D13.transpose() * core.M1i * dec.D13;
    const Matrix Phi23 =
        dec.B2.transpose() * dec.B3 + dec.D12.transpose() * core.M1i * dec.D13;
    const Matrix Phi33i = m3 > 0 ? Phi33.inverse().eval() : Matrix::Zero(0, 0);
    const Matrix Phi33_inv_sqrt =
        m3 > 0 ? principal_inv_sqrt(Phi33, tol, "inverse_weierstrass (Phi33)") : Matrix::Zero(0, 0);

    Matrix stacked = Matrix::Zero(n + m1, m);  // split coordinates
    stacked.block(0, m1, n, m2) = dec.B2 * core.D22i;
    stacked.block(0, m1 + m2, n, m3) =
        (r.A * dec.B3 - dec.B1 * core.M1i * dec.D13 - dec.B2 * core.D22i * Phi23) * Phi33i;
    stacked.block(n, 0, m1, m1) = core.K1iT;
    stacked.block(n, m1, m1, m2) = -core.K1iT * dec.D12 * core.D22i;
    stacked.block(n, m1 + m2, m1, m3) =
        -core.K1iT *
        (dec.B1.transpose() * dec.B3 - dec.D11 * core.M1i * dec.D13 - dec.D12 * core.D22i * Phi23) *
        Phi33i;
    parts.Binv = (parts.Gamma.transpose() * stacked) * dec.V.transpose();

    Matrix Kinv = Matrix::Zero(m3, m);
    Kinv.rightCols(m3) = -dec.Xi * Phi33_inv_sqrt;
    parts.Kinv = Kinv * dec.V.transpose();

    const Matrix correction = core.Bt.transpose() * core.At * core.Bt;  // = Xi' Bt' At Bt Xi
    Matrix Dc = Matrix::Zero(m, m);
    Dc.block(0, m1 + m2, m1, m3) = -core.M1i * dec.D13 * Phi33i;
    Dc.block(m1 + m2, 0, m3, m1) = Phi33i * dec.D13.transpose() * core.M1i;
    Dc.block(m1, m1, m2, m2) = core.D22i;
    Dc.block(m1, m1 + m2, m2, m3) = -core.D22i * Phi23 * Phi33i;
    Dc.block(m1 + m2, m1, m3, m2) = -Phi33i * Phi23.transpose() * core.D22i;
    Dc.block(m1 + m2, m1 + m2, m3, m3) = -Phi33i * correction * Phi33i;
    parts.Dcirc = dec.V * Dc * dec.V.transpose();
    parts.Dcirc = ((parts.Dcirc - parts.Dcirc.transpose()) / 2.0).eval();
    return parts;
}

}  // namespace

DescriptorRealization inverse_weierstrass(const StateSpaceRealization& r,
                                          const InputSpaceDecomposition& dec,
                                          const ToleranceConfig& tol) {
    const WeierstrassParts parts = build_weierstrass_parts(r, dec, tol);
    const Index k = parts.k;
    const Index m3 = dec.m3;
    const Index m = dec.ports();
    const Index N = k + 2 * m3;

    DescriptorRealization d;
    d.E = Matrix::Zero(N, N);
    d.E.topLeftCorner(k, k) = Matrix::Identity(k, k);
    d.E.block(k, k + m3, m3, m3) = Matrix::Identity(m3, m3);
    d.A = Matrix::Zero(N, N);
    d.A.topLeftCorner(k, k) = parts.Ainv;
    d.A.block(k, k, m3, m3) = Matrix::Identity(m3, m3);
    d.A.block(k + m3, k + m3, m3, m3) = Matrix::Identity(m3, m3);
    d.B = Matrix::Zero(N, m);
    d.B.topRows(k) = parts.Binv;
    d.B.bottomRows(m3) = -parts.Kinv;
    d.C = Matrix::Zero(N, m);
    d.C.topRows(k) = parts.Binv;
    d.C.middleRows(k, m3) = parts.Kinv;
    d.D = parts.Dcirc;
    return d;
}

StateSpaceRealization inverse_state_space(const StateSpaceRealization& r,
                                          const InputSpaceDecomposition& dec,
                                          const ToleranceConfig& tol) {
    const WeierstrassParts parts = build_weierstrass_parts(r, dec, tol);
    StateSpaceRealization out;
    out.M = parts.Kinv.transpose() * parts.Kinv;
    out.D = parts.Dcirc;
    out.A = parts.Ainv;
    out.B = parts.Binv;
    return out;
}

StateSpaceRealization inverse_state_space(const StateSpaceRealization& r,
                                          const ToleranceConfig& tol) {
    const InputSpaceDecomposition dec = decompose_input_space(r.M, r.D, r.B, tol);
    return inverse_state_space(r, dec, tol);
}

}  // namespace prokit
