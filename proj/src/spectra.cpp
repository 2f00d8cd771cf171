#include "prokit/spectra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "prokit/realize.hpp"

namespace prokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<SpectralPoint> spectral_points_of(const Matrix& A, const Matrix& M,
                                              const ToleranceConfig& tol) {
    const SkewCanonicalForm scf = skew_canonical(A, tol);
    std::vector<SpectralPoint> pts;
    if (scf.zero_dim > 0) pts.push_back({0.0, scf.zero_dim});
    for (auto it = scf.blocks.rbegin(); it != scf.blocks.rend(); ++it) {
        pts.push_back({it->omega, it->multiplicity});  // ascending omega
    }
    const Index rM = rank_svd(M, tol);
    if (rM > 0) pts.push_back({kInf, rM});
    return pts;
}

double lam_at(const std::vector<double>& eigs, long j) {
    if (j < 1) return -kInf;
    if (j > static_cast<long>(eigs.size())) return kInf;
    return eigs[static_cast<std::size_t>(j - 1)];
}

std::vector<double> hermitian_spectrum(const ComplexMatrix& H) {
    ComplexMatrix Hs = (H + H.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Hs, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + H.rows());
    return out;
}

}  // namespace

std::vector<SpectralPoint> pole_report(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    ValidationReport rep = validate_realization(r, tol);
    if (!rep.passed) {
        throw ValidationFailure("pole_report: realization fails validation (poles of a "
                                "non-minimal realization are meaningless)",
                                rep);
    }
    return spectral_points_of(r.A, r.M, tol);
}

std::vector<SpectralPoint> zero_report(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    const StateSpaceRealization inv = inverse_state_space(r, tol);
    return spectral_points_of(inv.A, inv.M, tol);
}

PoleZeroReport pole_zero_report(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    PoleZeroReport out;
    out.m = r.ports();
    out.poles = pole_report(r, tol);
    out.zeros = zero_report(r, tol);
    return out;
}

Index foster_pole_multiplicity(const FosterTerm& term, const ToleranceConfig& tol) {
    const Matrix Q = require_symmetric(term.Q, tol, "foster_pole_multiplicity (Q)");
    const Matrix R = require_skew(term.R, tol, "foster_pole_multiplicity (R)");
    const Matrix B0 = gram_factor(Q, tol);
    const Index p = B0.rows();
    if (p == 0) return 0;
    if (term.omega == 0.0) return p;  // kernel dimension of the zero block

    const Matrix B0p = pinv(B0, tol);
    Matrix S = B0p.transpose() * R * B0p;
    S = (S - S.transpose()) / 2.0;
    const SkewCanonicalForm scf = skew_canonical(S, tol);

    // same equality rule as lift_factorization so the two agree exactly
    const double eq_thr = tol.psd_abs * (1.0 + term.omega);
    Index l = 0;
    Index pairs = 0;
    for (const auto& blk : scf.blocks) {
        pairs += blk.multiplicity;
        if (term.omega - std::min(blk.omega, term.omega) < eq_thr) l += blk.multiplicity;
    }
    pairs += scf.zero_dim / 2;
    if (term.omega < eq_thr) l += scf.zero_dim / 2;
    const bool leftover = (scf.zero_dim % 2) == 1;
    return l + 2 * (pairs - l) + (leftover ? 1 : 0);
}

InterlaceReport interlace_verify(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    const InputSpaceDecomposition dec = decompose_input_space(r.M, r.D, r.B, tol);
    const StateSpaceRealization inv = inverse_state_space(r, dec, tol);

    InterlaceReport rep;
    rep.m1 = dec.m1;
    rep.m2 = dec.m2;
    rep.m3 = dec.m3;
    rep.eigs_A = skew_canonical(r.A, tol).signed_spectrum();
    rep.eigs_Ainv = skew_canonical(inv.A, tol).signed_spectrum();

    double scale = 1.0;
    if (!rep.eigs_A.empty()) scale = std::max(scale, std::abs(rep.eigs_A.back()));
    if (!rep.eigs_Ainv.empty()) scale = std::max(scale, std::abs(rep.eigs_Ainv.back()));
    const double slack_tol = tol.eq_rel * scale;

    const long nA = static_cast<long>(rep.eigs_A.size());
    const long nI = static_cast<long>(rep.eigs_Ainv.size());
    const long s2 = static_cast<long>(dec.m2) / 2;

    auto record = [&](long j, InterlaceFamily fam, double lhs, double rhs) {
        if (std::isinf(lhs) || std::isinf(rhs)) return;  // trivial by convention
        const double slack = rhs - lhs;
        const bool holds = slack >= -slack_tol;
        rep.inequality_results.push_back({static_cast<int>(j), fam, holds, slack});
        rep.all_hold = rep.all_hold && holds;
    };

    const long jmax = std::max(nA, nI) + s2 + static_cast<long>(dec.m1 + dec.m3) + 2;
    for (long j = 0; j <= jmax; ++j) {
        record(j, InterlaceFamily::inv_below_pole,
               lam_at(rep.eigs_Ainv, j - s2 - static_cast<long>(dec.m3)), lam_at(rep.eigs_A, j));
        record(j, InterlaceFamily::pole_below_inv, lam_at(rep.eigs_A, j + 1),
               lam_at(rep.eigs_Ainv, j + s2 + static_cast<long>(dec.m1) + 1));
        record(j, InterlaceFamily::pole_below_zero,
               lam_at(rep.eigs_A, j - s2 - static_cast<long>(dec.m1)), lam_at(rep.eigs_Ainv, j));
        record(j, InterlaceFamily::zero_below_pole, lam_at(rep.eigs_Ainv, j + 1),
               lam_at(rep.eigs_A, j + s2 + static_cast<long>(dec.m3) + 1));
    }
    return rep;
}

bool multiplicity_between_caps(const std::vector<SpectralPoint>& poles,
                               const std::vector<SpectralPoint>& zeros, Index m,
                               const ToleranceConfig& tol) {
    // expand to signed locations, excluding infinity
    auto signed_points = [](const std::vector<SpectralPoint>& pts) {
        std::vector<std::pair<double, Index>> out;
        for (const auto& p : pts) {
            if (p.at_infinity()) continue;
            if (p.omega == 0.0) {
                out.emplace_back(0.0, p.multiplicity);
            } else {
                out.emplace_back(p.omega, p.multiplicity);
                out.emplace_back(-p.omega, p.multiplicity);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto sp = signed_points(poles);
    const auto sz = signed_points(zeros);

    double omega_max = 1.0;
    for (const auto& [w, k] : sp) omega_max = std::max(omega_max, std::abs(w));
    for (const auto& [w, k] : sz) omega_max = std::max(omega_max, std::abs(w));
    const double ctol = tol.eq_rel * (1.0 + omega_max);

    auto caps_ok = [&](const std::vector<std::pair<double, Index>>& fences,
                       const std::vector<std::pair<double, Index>>& counted) {
        for (std::size_t i = 0; i + 1 < fences.size(); ++i) {
            const double lo = fences[i].first;
            const double hi = fences[i + 1].first;
            if (hi - lo <= ctol) continue;
            Index total = 0;
            for (const auto& [w, k] : counted) {
                if (w > lo + ctol && w < hi - ctol) total += k;
            }
            if (total > m) return false;
        }
        return true;
    };
    return caps_ok(sp, sz) && caps_ok(sz, sp);
}

bool weyl_inequalities(const ComplexMatrix& M, const ComplexMatrix& N, double slack) {
    if (M.rows() != N.rows()) throw StructuralError("weyl_inequalities: size mismatch");
    const long m = M.rows();
    const auto eM = hermitian_spectrum(M);
    const auto eN = hermitian_spectrum(N);
    const auto eS = hermitian_spectrum(M + N);
    for (long j = 1; j <= m; ++j) {
        for (long k = 1; k <= m; ++k) {
            const double mid = lam_at(eM, j) + lam_at(eN, k);
            if (j + k - m >= 1 && lam_at(eS, j + k - m) > mid + slack) return false;
            if (j + k - 1 <= m && mid > lam_at(eS, j + k - 1) + slack) return false;
        }
    }
    return true;
}

bool weyl_signed_bounds(const ComplexMatrix& M, const ComplexMatrix& N, double slack,
                        const ToleranceConfig& tol) {
    if (M.rows() != N.rows()) throw StructuralError("weyl_signed_bounds: size mismatch");
    const long m = M.rows();
    const auto eM = hermitian_spectrum(M);
    const auto eN = hermitian_spectrum(N);
    const auto eS = hermitian_spectrum(M + N);
    const double zero_cls = tol.psd_abs * (1.0 + N.norm());
    long rp = 0, rm = 0;
    for (double x : eN) {
        if (x > zero_cls) ++rp;
        if (x < -zero_cls) ++rm;
    }
    for (long j = 0; j <= m + 1; ++j) {
        if (lam_at(eS, j - rp) > lam_at(eM, j) + slack) return false;
        if (lam_at(eM, j) > lam_at(eS, j + rm) + slack) return false;
        if (lam_at(eM, j - rm) > lam_at(eS, j) + slack) return false;
        if (lam_at(eS, j) > lam_at(eM, j + rp) + slack) return false;
    }
    return true;
}

bool cauchy_interlacing(const ComplexMatrix& H, Index top_block, double slack) {
    if (H.rows() != H.cols() || top_block > H.rows()) {
        throw StructuralError("cauchy_interlacing: bad partition");
    }
    const long m = top_block;
    const long k = H.rows() - top_block;
    const auto eH = hermitian_spectrum(H);
    const auto eM = hermitian_spectrum(H.topLeftCorner(top_block, top_block));
    for (long j = 1; j <= m; ++j) {
        if (lam_at(eH, j) > lam_at(eM, j) + slack) return false;
        if (lam_at(eM, j) > lam_at(eH, j + k) + slack) return false;
    }
    return true;
}

bool eig_perturbation_bounds(const ComplexMatrix& M, const ComplexMatrix& N, double slack,
                             const ToleranceConfig& tol) {
    return weyl_inequalities(M, N, slack) && weyl_signed_bounds(M, N, slack, tol);
}

}  // namespace prokit
