#include "prokit/pro_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "prokit/realize.hpp"
#include "prokit/rng.hpp"

namespace prokit {

FosterForm merge_terms(FosterForm f, const ToleranceConfig& tol) {
    if (f.terms.empty()) return f;
    double omega_max = 0.0;
    for (const auto& t : f.terms) omega_max = std::max(omega_max, t.omega);
    const double merge_tol = tol.rank_rel * std::max(1.0, omega_max);

    std::sort(f.terms.begin(), f.terms.end(),
              [](const FosterTerm& a, const FosterTerm& b) { return a.omega < b.omega; });

    std::vector<FosterTerm> merged;
    for (auto& t : f.terms) {
        if (!merged.empty() && (t.omega - merged.back().omega) <= merge_tol) {
            merged.back().Q += t.Q;
            merged.back().R += t.R;
        } else {
            merged.push_back(std::move(t));
        }
    }
    for (auto& t : merged) {
        if (t.omega <= merge_tol) t.omega = 0.0;
    }
    f.terms = std::move(merged);
    return f;
}

ComplexMatrix eval_foster(const FosterForm& f, Complex z, const ToleranceConfig& tol) {
    if (f.Q.rows() != f.m || f.R.rows() != f.m) {
        throw StructuralError("eval_foster: Q/R size does not match port count");
    }
    ComplexMatrix F = z * f.Q.cast<Complex>() + f.R.cast<Complex>();
    const double zsq = std::norm(z);
    for (std::size_t j = 0; j < f.terms.size(); ++j) {
        const auto& t = f.terms[j];
        const Complex den = z * z + t.omega * t.omega;
        if (std::abs(den) <= 1e-8 * (1.0 + zsq)) {
            throw PoleProximityError("eval_foster: z too close to the pole pair at omega = " +
                                         std::to_string(t.omega) + " (term " + std::to_string(j) + ")",
                                     t.omega);
        }
        F += (z * t.Q.cast<Complex>() + t.R.cast<Complex>()) / den;
    }
    return F;
}

ComplexMatrix eval_state_space(const StateSpaceRealization& r, Complex z,
                               const ToleranceConfig& tol) {
    const Index n = r.state_dim();
    const Index m = r.ports();
    if (r.A.cols() != n || r.B.rows() != n || r.B.cols() != m || r.D.rows() != m) {
        throw StructuralError("eval_state_space: inconsistent matrix shapes");
    }
    ComplexMatrix F = z * r.M.cast<Complex>() + r.D.cast<Complex>();
    if (n == 0) return F;
    ComplexMatrix res = z * ComplexMatrix::Identity(n, n) - r.A.cast<Complex>();
    Eigen::JacobiSVD<ComplexMatrix> svd(res, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(n - 1);
    if (smin <= tol.eq_rel * (1.0 + res.norm())) {
        throw PoleProximityError("eval_state_space: z I - A is singular at z within tolerance");
    }
    F += r.B.transpose().cast<Complex>() * svd.solve(r.B.cast<Complex>());
    return F;
}

ComplexMatrix eval_descriptor(const DescriptorRealization& d, Complex z,
                              const ToleranceConfig& tol) {
    const Index N = d.pencil_dim();
    const Index m = d.ports();
    if (d.A.rows() != N || d.B.rows() != N || d.C.rows() != N || d.B.cols() != m ||
        d.C.cols() != m) {
        throw StructuralError("eval_descriptor: inconsistent matrix shapes");
    }
    ComplexMatrix F = d.D.cast<Complex>();
    if (N == 0) return F;
    ComplexMatrix pencil = z * d.E.cast<Complex>() - d.A.cast<Complex>();
    Eigen::JacobiSVD<ComplexMatrix> svd(pencil, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(N - 1);
    if (smin <= tol.eq_rel * (1.0 + pencil.norm())) {
        throw PoleProximityError("eval_descriptor: pencil z E - A is singular at z within tolerance");
    }
    F += d.C.transpose().cast<Complex>() * svd.solve(d.B.cast<Complex>());
    return F;
}

namespace {

void check_sym_psd(ValidationReport& rep, const Matrix& X, const std::string& loc,
                   const ToleranceConfig& tol) {
    const double sym_resid = (X - X.transpose()).norm();
    if (sym_resid > tol.eq_rel * (1.0 + X.norm())) {
        rep.fail("symmetric", loc, sym_resid);
        return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((X + X.transpose()) / 2.0, Eigen::EigenvaluesOnly);
    if (X.rows() > 0) {
        const double lmin = es.eigenvalues()(0);
        if (lmin < -tol.psd_abs * (1.0 + X.norm())) {
            rep.fail("positive semidefinite", loc, -lmin);
        }
    }
}

void check_skew(ValidationReport& rep, const Matrix& X, const std::string& loc,
                const ToleranceConfig& tol) {
    const double resid = (X + X.transpose()).norm();
    if (resid > tol.eq_rel * (1.0 + X.norm())) {
        rep.fail("skew-symmetric", loc, resid);
    }
}

}  // namespace

ValidationReport validate_foster(const FosterForm& f, const ToleranceConfig& tol) {
    ValidationReport rep;
    if (f.Q.rows() != f.m || f.Q.cols() != f.m || f.R.rows() != f.m || f.R.cols() != f.m) {
        rep.fail("shape", "Q/R", 0.0);
        return rep;
    }
    check_sym_psd(rep, f.Q, "Q", tol);
    check_skew(rep, f.R, "R", tol);

    double omega_max = 0.0;
    for (const auto& t : f.terms) omega_max = std::max(omega_max, t.omega);
    const double merge_tol = tol.rank_rel * std::max(1.0, omega_max);

    for (std::size_t j = 0; j < f.terms.size(); ++j) {
        const auto& t = f.terms[j];
        const std::string loc = "term " + std::to_string(j);
        if (t.Q.rows() != f.m || t.Q.cols() != f.m || t.R.rows() != f.m || t.R.cols() != f.m) {
            rep.fail("shape", loc, 0.0);
            continue;
        }
        if (!(t.omega >= 0.0)) {
            rep.fail("omega >= 0", loc, t.omega);
            continue;
        }
        check_sym_psd(rep, t.Q, loc + " Q_j", tol);
        check_skew(rep, t.R, loc + " R_j", tol);
        for (std::size_t k = j + 1; k < f.terms.size(); ++k) {
            if (std::abs(t.omega - f.terms[k].omega) <= merge_tol) {
                rep.fail("distinct omegas (merge first)", loc + " vs term " + std::to_string(k),
                         std::abs(t.omega - f.terms[k].omega));
            }
        }
        if (!is_symmetric(t.Q, tol.eq_rel) || !is_skew_symmetric(t.R, tol.eq_rel)) continue;
        if (t.omega == 0.0) {
            if (t.R.norm() > tol.eq_rel * (1.0 + t.Q.norm())) {
                rep.fail("R_j must vanish at omega = 0", loc, t.R.norm());
            }
            continue;
        }
        const Matrix S = t.omega * ((t.Q + t.Q.transpose()) / 2.0);
        const Matrix T = (t.R - t.R.transpose()) / 2.0;
        if (!psd_pair_check(S, T, tol) || !psd_pair_check(S, Matrix(-T), tol)) {
            Matrix H(2 * f.m, 2 * f.m);
            H << S, -T, T, S;
            Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
            rep.fail("residue domination -omega Q_j <= i R_j <= omega Q_j", loc,
                     std::abs(es.eigenvalues()(0)));
        }
    }
    return rep;
}

ValidationReport validate_realization(const StateSpaceRealization& r, const ToleranceConfig& tol) {
    ValidationReport rep;
    const Index n = r.state_dim();
    const Index m = r.ports();
    if (r.A.cols() != n || r.B.rows() != n || r.B.cols() != m || r.M.cols() != m ||
        r.D.rows() != m || r.D.cols() != m) {
        rep.fail("shape", "M/D/A/B", 0.0);
        return rep;
    }
    check_sym_psd(rep, r.M, "M", tol);
    check_skew(rep, r.D, "D", tol);
    check_skew(rep, r.A, "A", tol);
    if (rep.passed) {
        if (!controllability_hautus(r.A, r.B, tol)) {
            rep.fail("(A, B) controllable", "A/B", 0.0);
        }
    }
    return rep;
}

ValidationReport check_pro_sampling(const MatrixFunction& f, const std::vector<Complex>& samples,
                                    const std::vector<double>& axis_samples,
                                    const ToleranceConfig& tol) {
    ValidationReport rep;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Complex z = samples[i];
        ComplexMatrix F;
        try {
            F = f(z);
        } catch (const PoleProximityError&) {
            rep.fail("sample at a pole", "sample " + std::to_string(i), 0.0);
            continue;
        }
        const ComplexMatrix H = (F + F.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
        if (F.rows() > 0) {
            const double lmin = es.eigenvalues()(0);
            if (lmin < -tol.psd_abs * (1.0 + F.norm())) {
                rep.fail("Re F(z) >= 0 on the right half-plane", "sample " + std::to_string(i),
                         -lmin);
            }
        }
    }
    for (std::size_t i = 0; i < axis_samples.size(); ++i) {
        const double t = axis_samples[i];
        try {
            const ComplexMatrix Ft = f(Complex(t, 0.0));
            const double imag_resid = Ft.imag().norm();
            if (imag_resid > tol.eq_rel * (1.0 + Ft.norm())) {
                rep.fail("F(t) real for real t", "t = " + std::to_string(t), imag_resid);
            }
        } catch (const PoleProximityError&) {
            // real-axis poles only occur at t = 0; skip rather than fail
        }
        try {
            const ComplexMatrix Fit = f(Complex(0.0, t));
            const double odd_resid = (Fit + Fit.adjoint()).norm();
            if (odd_resid > tol.eq_rel * (1.0 + Fit.norm())) {
                rep.fail("F(it) + F(it)* = 0 on the imaginary axis", "t = " + std::to_string(t),
                         odd_resid);
            }
        } catch (const PoleProximityError&) {
        }
    }
    return rep;
}

SampleSet default_pro_samples(const MatrixFunction& f, std::uint64_t seed) {
    SampleSet out;
    out.seed = seed;
    Rng rng(seed);
    auto evaluable = [&f](Complex z) {
        try {
            f(z);
            return true;
        } catch (const PoleProximityError&) {
            return false;
        }
    };
    while (out.half_plane.size() < 50) {
        Complex z = rng.complex_in_rect(1e-3, 10.0, -10.0, 10.0);
        if (evaluable(z)) out.half_plane.push_back(z);
    }
    while (out.axis.size() < 20) {
        const double t = rng.uniform(-10.0, 10.0);
        if (evaluable(Complex(0.0, t)) && evaluable(Complex(t, 0.0))) out.axis.push_back(t);
    }
    return out;
}

}  // namespace prokit
