#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace prokit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Numeric policy shared by every operation. All thresholds are relative
/// unless stated otherwise: ranks use rank_rel * sigma_max * max(rows, cols),
/// PSD tests floor the smallest eigenvalue at -psd_abs * (1 + ||S||), and
/// eq_rel bounds structural residuals (symmetry, skewness, shape identities).
struct ToleranceConfig {
    double rank_rel = 1e-10;
    double psd_abs = 1e-9;
    double eq_rel = 1e-9;

    bool valid() const { return rank_rel > 0 && psd_abs > 0 && eq_rel > 0; }
};

/// Input violates a shape or symmetry-class requirement.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but outside the operation's mathematical domain.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A kernel/range split fell inside the tolerance band (no 10x singular
/// value gap between kept and discarded values).
class DegeneracyError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Evaluation was requested at or too close to a pole.
class PoleProximityError : public DomainError {
  public:
    PoleProximityError(const std::string& what, double omega)
        : DomainError(what), omega_(omega) {}
    explicit PoleProximityError(const std::string& what)
        : DomainError(what), omega_(std::numeric_limits<double>::quiet_NaN()) {}

    /// Pole frequency that triggered the error; NaN when unknown.
    double omega() const { return omega_; }

  private:
    double omega_;
};

}  // namespace prokit
