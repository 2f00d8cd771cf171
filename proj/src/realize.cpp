#include "prokit/realize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "prokit/rng.hpp"

namespace prokit {

namespace {

Matrix rotation_block(double omega, Index q) {
    Matrix A = Matrix::Zero(2 * q, 2 * q);
    A.block(0, q, q, q) = omega * Matrix::Identity(q, q);
    A.block(q, 0, q, q) = -omega * Matrix::Identity(q, q);
    return A;
}

}  // namespace

Matrix LiftResult::state_matrix() const { return rotation_block(omega, q); }

LiftResult lift_factorization(double omega, const Matrix& Q, const Matrix& R,
                              const ToleranceConfig& tol) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw StructuralError("lift_factorization: omega must be finite and >= 0");
    }
    const Matrix Qs = require_symmetric(Q, tol, "lift_factorization (Q)");
    const Matrix Rs = require_skew(R, tol, "lift_factorization (R)");
    if (Qs.rows() != Rs.rows()) {
        throw StructuralError("lift_factorization: Q and R must have the same size");
    }
    const Index m = Qs.rows();

    if (omega == 0.0 && Rs.norm() > tol.eq_rel * (1.0 + Qs.norm())) {
        throw DomainError("lift_factorization: omega = 0 requires R = 0");
    }
    const Matrix S = omega * Qs;
    if (!psd_pair_check(S, Rs, tol) || !psd_pair_check(S, Matrix(-Rs), tol)) {
        throw DomainError("lift_factorization: residue pair not dominated "
                          "(-omega Q <= iR <= omega Q fails)");
    }

    const Matrix B0 = gram_factor(Qs, tol);
    const Index p = B0.rows();
    if (p == 0) {
        return {0, Matrix::Zero(0, m), omega};
    }

    // compress R onto the row space of B0
    const Matrix B0p = pinv(B0, tol);
    const Matrix S0 = [&] {
        Matrix s = B0p.transpose() * Rs * B0p;
        return Matrix((s - s.transpose()) / 2.0);
    }();
    const SkewCanonicalForm scf = skew_canonical(S0, tol);

    // eigenvalue pairs (alpha_j) descending, plus the kernel of S0 as alpha = 0
    // pairs and, for odd p, one leftover row
    std::vector<double> alphas;
    std::vector<std::pair<Index, Index>> pair_rows;  // (u-row, v-row) in canonical coords
    Index off = 0;
    for (const auto& blk : scf.blocks) {
        for (Index t = 0; t < blk.multiplicity; ++t) {
            alphas.push_back(std::min(blk.omega, omega));
            pair_rows.emplace_back(off + t, off + blk.multiplicity + t);
        }
        off += 2 * blk.multiplicity;
    }
    for (Index t = 0; t + 1 < scf.zero_dim; t += 2) {
        alphas.push_back(0.0);
        pair_rows.emplace_back(off + t, off + t + 1);
    }
    const bool leftover = (scf.zero_dim % 2) == 1;
    const Index leftover_row = leftover ? p - 1 : -1;

    const Index k = static_cast<Index>(alphas.size());
    const double eq_thr = tol.psd_abs * (1.0 + omega);
    Index l = 0;
    for (double a : alphas) {
        if (omega - a < eq_thr) ++l;
    }
    const Index q = l + 2 * (k - l) + (leftover ? 1 : 0);

    const Matrix B1 = scf.U.transpose() * B0;
    Matrix B = Matrix::Zero(2 * q, m);
    Index t = 0;
    for (Index idx = 0; idx < k; ++idx) {
        const double a = alphas[static_cast<std::size_t>(idx)];
        const auto [r1, r2] = pair_rows[static_cast<std::size_t>(idx)];
        if (omega - a < eq_thr) {
            B.row(t) = B1.row(r1);
            B.row(q + t) = B1.row(r2);
            t += 1;
        } else {
            const double eta = std::sqrt(omega * omega - a * a);
            B.row(t) = (a / omega) * B1.row(r1);
            B.row(t + 1) = (eta / omega) * B1.row(r1);
            B.row(q + t) = B1.row(r2);
            t += 2;
        }
    }
    if (leftover) {
        B.row(t) = B1.row(leftover_row);
        t += 1;
    }
    return {q, B, omega};
}

StateSpaceRealization foster_to_state_space(const FosterForm& f_in, const ToleranceConfig& tol) {
    ValidationReport rep = validate_foster(f_in, tol);
    if (!rep.passed) {
        throw ValidationFailure("foster_to_state_space: input fails Foster validation", rep);
    }
    const FosterForm f = merge_terms(f_in, tol);
    const Index m = f.m;

    std::vector<Matrix> Ablocks;
    std::vector<Matrix> Bblocks;
    Index n = 0;
    for (const auto& t : f.terms) {
        if (t.omega == 0.0) {
            // zero-frequency block: A_j = 0 of size rank(Q_j), B_j of full row
            // rank, so the Hautus condition at 0 survives
            const Matrix Bj = gram_factor(t.Q, tol);
            if (Bj.rows() == 0) continue;
            Ablocks.push_back(Matrix::Zero(Bj.rows(), Bj.rows()));
            Bblocks.push_back(Bj);
            n += Bj.rows();
        } else {
            const LiftResult lift = lift_factorization(t.omega, t.Q, t.R, tol);
            if (lift.q == 0) continue;
            Ablocks.push_back(lift.state_matrix());
            Bblocks.push_back(lift.B);
            n += 2 * lift.q;
        }
    }

    StateSpaceRealization out;
    out.M = (f.Q + f.Q.transpose()) / 2.0;
    out.D = (f.R - f.R.transpose()) / 2.0;
    out.A = Matrix::Zero(n, n);
    out.B = Matrix::Zero(n, m);
    Index off = 0;
    for (std::size_t j = 0; j < Ablocks.size(); ++j) {
        const Index nj = Ablocks[j].rows();
        out.A.block(off, off, nj, nj) = Ablocks[j];
        out.B.middleRows(off, nj) = Bblocks[j];
        off += nj;
    }
    return out;
}

FosterForm state_space_to_foster(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    const Index m = r.ports();
    Matrix M = require_symmetric(r.M, tol, "state_space_to_foster (M)");
    Matrix D = require_skew(r.D, tol, "state_space_to_foster (D)");
    Matrix A = require_skew(r.A, tol, "state_space_to_foster (A)");
    Matrix B = r.B;
    if (B.rows() != A.rows() || B.cols() != m) {
        throw StructuralError("state_space_to_foster: B shape inconsistent");
    }

    // pad to even state dimension; costs controllability, not correctness
    if (A.rows() % 2 == 1) {
        const Index n = A.rows();
        Matrix Ap = Matrix::Zero(n + 1, n + 1);
        Ap.topLeftCorner(n, n) = A;
        Matrix Bp = Matrix::Zero(n + 1, m);
        Bp.topRows(n) = B;
        A = Ap;
        B = Bp;
    }

    const SkewCanonicalForm scf = skew_canonical(A, tol);
    const Matrix UB = scf.U.transpose() * B;

    FosterForm out;
    out.m = m;
    out.Q = M;
    out.R = D;
    Index off = 0;
    for (const auto& blk : scf.blocks) {
        const Index rows = 2 * blk.multiplicity;
        const Matrix Bj = UB.middleRows(off, rows);
        FosterTerm term;
        term.omega = blk.omega;
        term.Q = Bj.transpose() * Bj;
        term.R = Bj.transpose() * rotation_block(blk.omega, blk.multiplicity) * Bj;
        term.R = (term.R - term.R.transpose()) / 2.0;
        if (term.Q.norm() + term.R.norm() > 0.0) out.terms.push_back(std::move(term));
        off += rows;
    }
    if (scf.zero_dim > 0) {
        const Matrix B0 = UB.bottomRows(scf.zero_dim);
        if (B0.norm() > tol.rank_rel * (1.0 + B.norm())) {
            FosterTerm term;
            term.omega = 0.0;
            term.Q = B0.transpose() * B0;
            term.R = Matrix::Zero(m, m);
            out.terms.push_back(std::move(term));
        }
    }
    return merge_terms(std::move(out), tol);
}

DescriptorRealization state_space_to_weierstrass(const StateSpaceRealization& r,
                                                 const ToleranceConfig& tol) {
    const Index n = r.state_dim();
    const Index m = r.ports();
    const Matrix M = require_symmetric(r.M, tol, "state_space_to_weierstrass (M)");
    const Matrix K = gram_factor(M, tol);
    const Index q = K.rows();
    const Index N = n + 2 * q;

    DescriptorRealization d;
    d.E = Matrix::Zero(N, N);
    d.E.topLeftCorner(n, n) = Matrix::Identity(n, n);
    d.E.block(n, n + q, q, q) = Matrix::Identity(q, q);
    d.A = Matrix::Zero(N, N);
    d.A.topLeftCorner(n, n) = r.A;
    d.A.block(n, n, q, q) = Matrix::Identity(q, q);
    d.A.block(n + q, n + q, q, q) = Matrix::Identity(q, q);
    d.B = Matrix::Zero(N, m);
    d.B.topRows(n) = r.B;
    d.B.bottomRows(q) = -K;
    d.C = Matrix::Zero(N, m);
    d.C.topRows(n) = r.B;
    d.C.middleRows(n, q) = K;
    d.D = r.D;
    return d;
}

namespace {

// rank(Y^* B) where Y spans the left eigenspace; full rank at every
// eigenvalue is the Hautus condition
bool eigenspace_hautus_ok(const ComplexMatrix& Y, const Matrix& B, const ToleranceConfig& tol) {
    const Index g = Y.cols();
    if (g == 0) return true;
    if (g > B.cols()) return false;
    const ComplexMatrix P = Y.adjoint() * B.cast<Complex>();
    return rank_equilibrated(P, tol) == g;
}

}  // namespace

bool controllability_hautus(const Matrix& A, const Matrix& B, const ToleranceConfig& tol) {
    if (A.rows() != A.cols() || B.rows() != A.rows()) {
        throw StructuralError("controllability_hautus: A must be square and B conformable");
    }
    const Index n = A.rows();
    if (n == 0) return true;

    if (is_skew_symmetric(A, tol.eq_rel)) {
        const SkewCanonicalForm scf = skew_canonical(A, tol);
        Index off = 0;
        for (const auto& blk : scf.blocks) {
            const Index k = blk.multiplicity;
            // eigenvectors of A for +i omega: (u_j + i v_j)/sqrt(2)
            ComplexMatrix Y(n, k);
            for (Index t = 0; t < k; ++t) {
                Y.col(t) = (scf.U.col(off + t).cast<Complex>() +
                            Complex(0, 1) * scf.U.col(off + k + t).cast<Complex>()) /
                           std::sqrt(2.0);
            }
            if (!eigenspace_hautus_ok(Y, B, tol)) return false;
            off += 2 * k;
        }
        if (scf.zero_dim > 0) {
            const ComplexMatrix Y = scf.U.rightCols(scf.zero_dim).cast<Complex>();
            if (!eigenspace_hautus_ok(Y, B, tol)) return false;
        }
        return true;
    }

    // general fallback: cluster the spectrum and take left null spaces by SVD
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A.cast<Complex>());
    if (es.info() != Eigen::Success) {
        throw DomainError("controllability_hautus: eigensolver failed");
    }
    std::vector<Complex> eigs(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::vector<Complex> distinct;
    const double cluster_tol = tol.rank_rel * (1.0 + A.norm()) * 100.0;
    for (const Complex& lam : eigs) {
        bool seen = false;
        for (const Complex& mu : distinct) {
            if (std::abs(lam - mu) <= cluster_tol) {
                seen = true;
                break;
            }
        }
        if (!seen) distinct.push_back(lam);
    }
    for (const Complex& lam : distinct) {
        const ComplexMatrix P = A.cast<Complex>() - lam * ComplexMatrix::Identity(n, n);
        Eigen::JacobiSVD<ComplexMatrix> svd(P, Eigen::ComputeFullU);
        const auto& sv = svd.singularValues();
        const double thr = tol.rank_rel * sv(0) * static_cast<double>(n);
        Index r = 0;
        while (r < n && sv(r) > thr) ++r;
        const Index g = n - r;
        if (!eigenspace_hautus_ok(svd.matrixU().rightCols(g), B, tol)) return false;
    }
    return true;
}

Matrix controllability_gramian(const Matrix& A, const Matrix& B) {
    const Index n = A.rows();
    Matrix G = Matrix::Zero(n, n);
    Matrix P = B;
    for (Index j = 0; j < n; ++j) {
        G += P * P.transpose();
        P = A * P;
    }
    return G;
}

bool pencil_regular_sampling(const Matrix& E, const Matrix& A, const ToleranceConfig& tol,
                             int points, std::uint64_t seed) {
    const Index N = E.rows();
    if (N == 0) return true;
    Rng rng(seed);
    for (int i = 0; i < points; ++i) {
        const Complex z = rng.complex_in_rect(-5.0, 5.0, -5.0, 5.0);
        const ComplexMatrix pencil = z * E.cast<Complex>() - A.cast<Complex>();
        Eigen::JacobiSVD<ComplexMatrix> svd(pencil);
        if (svd.singularValues()(N - 1) > tol.eq_rel * (1.0 + pencil.norm())) return true;
    }
    return false;
}

namespace {

std::vector<Complex> finite_pencil_spectrum(const Matrix& E, const Matrix& A,
                                            const ToleranceConfig& tol) {
    // det(zE - A) = 0  <=>  A v = z E v
    Eigen::GeneralizedEigenSolver<Matrix> ges;
    ges.compute(A, E, false);
    std::vector<Complex> out;
    const double scale = std::max(1.0, std::max(E.norm(), A.norm()));
    for (Index i = 0; i < ges.alphas().size(); ++i) {
        const double beta = ges.betas()(i);
        if (std::abs(beta) > 1e-12 * scale) {
            out.push_back(ges.alphas()(i) / beta);
        }
    }
    return out;
}

MinimalityCondition rank_condition(const std::string& name, const ComplexMatrix& X, Index required,
                                   const ToleranceConfig& tol) {
    const Index r = rank_equilibrated(X, tol);
    return {name, r == required, required, r};
}

}  // namespace

MinimalityReport descriptor_minimality(const DescriptorRealization& d, const ToleranceConfig& tol) {
    const Index N = d.pencil_dim();
    if (d.A.rows() != N || d.A.cols() != N || d.E.cols() != N) {
        throw StructuralError("descriptor_minimality: E and A must be square of equal size");
    }
    if (!pencil_regular_sampling(d.E, d.A, tol)) {
        throw DomainError("descriptor_minimality: pencil (E, A) is not regular");
    }

    MinimalityReport rep;
    std::vector<Complex> zs = finite_pencil_spectrum(d.E, d.A, tol);
    Rng rng(3461);
    for (int i = 0; i < 10; ++i) zs.push_back(rng.complex_in_rect(-6.0, 6.0, -6.0, 6.0));
    rep.spectrum_points = static_cast<int>(zs.size());

    const ComplexMatrix Ec = d.E.cast<Complex>();
    const ComplexMatrix Ac = d.A.cast<Complex>();
    const ComplexMatrix Bc = d.B.cast<Complex>();
    const ComplexMatrix Cc = d.C.cast<Complex>();

    Index min_rank_i = N, min_rank_iii = N;
    for (const Complex& z : zs) {
        ComplexMatrix Xi(N, N + d.B.cols());
        Xi << z * Ec - Ac, Bc;
        min_rank_i = std::min(min_rank_i, rank_equilibrated(Xi, tol));
        ComplexMatrix Xiii(N, N + d.C.cols());
        Xiii << z * Ec.transpose() - Ac.transpose(), Cc;
        min_rank_iii = std::min(min_rank_iii, rank_equilibrated(Xiii, tol));
    }
    rep.conditions[0] = {"(i) rank [zE - A, B] = n on the pencil spectrum", min_rank_i == N, N,
                         min_rank_i};
    {
        ComplexMatrix X(N, N + d.B.cols());
        X << Ec, Bc;
        rep.conditions[1] = rank_condition("(ii) rank [E, B] = n", X, N, tol);
    }
    rep.conditions[2] = {"(iii) rank [zE' - A', C] = n on the pencil spectrum", min_rank_iii == N,
                         N, min_rank_iii};
    {
        ComplexMatrix X(N, N + d.C.cols());
        X << Ec.transpose(), Cc;
        rep.conditions[3] = rank_condition("(iv) rank [E', C] = n", X, N, tol);
    }
    {
        // (v) A Ker(E) inside Im(E)
        Eigen::JacobiSVD<Matrix> svd(d.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double thr =
            (N > 0 && sv.size() > 0) ? tol.rank_rel * sv(0) * static_cast<double>(N) : 0.0;
        Index r = 0;
        while (r < sv.size() && sv(r) > thr) ++r;
        const Index kdim = N - r;
        bool holds = true;
        Index resid_rank = 0;
        if (kdim > 0) {
            const Matrix Z = svd.matrixV().rightCols(kdim);
            const Matrix W = d.A * Z;
            const Matrix Uim = svd.matrixU().leftCols(r);
            const Matrix resid = W - Uim * (Uim.transpose() * W);
            holds = resid.norm() <= tol.eq_rel * (1.0 + d.A.norm());
            resid_rank = holds ? 0 : rank_svd(resid, tol);
        }
        rep.conditions[4] = {"(v) A Ker(E) in Im(E)", holds, 0, resid_rank};
    }
    rep.minimal = true;
    for (const auto& c : rep.conditions) rep.minimal = rep.minimal && c.holds;
    return rep;
}

}  // namespace prokit
