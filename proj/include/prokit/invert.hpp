#pragma once

#include <optional>

#include "prokit/pro_core.hpp"
#include "prokit/types.hpp"

namespace prokit {

/// Orthogonal split of the port space adapted to (M, D): X1 spans the range
/// of M, X2 the invertible part of D compressed to Ker M, X3 its kernel.
/// Columns of V are [X1 | X2 | X3]; all block matrices live in those
/// coordinates. K1^T K1 = M1 with M1 positive definite; D22 is skew and
/// invertible, so m2 is even; Xi is the orthogonal map chosen on X3.
struct InputSpaceDecomposition {
    Index m1 = 0, m2 = 0, m3 = 0;
    Matrix V;
    Matrix B1, B2, B3;
    Matrix D11, D12, D13, D22;
    Matrix M1;
    Matrix K1;
    Matrix Xi;

    Index ports() const { return m1 + m2 + m3; }
};

/// Minimal descriptor realization of the inverse that is not yet in
/// Weierstrass form. Atilde/Btilde are the compressed state data; the
/// realization (Ehat, Ahat, Bhat, Bhat, Dhat) is expressed in the original
/// port basis.
struct IntermediateInverse {
    Matrix Atilde;  // (n+m1) x (n+m1), skew
    Matrix Btilde;  // (n+m1) x m3, injective iff F invertible
    Matrix Ehat, Ahat, Bhat, Dhat;

    DescriptorRealization descriptor() const { return {Ehat, Ahat, Bhat, Bhat, Dhat}; }
};

/// Thrown when det F(z) = 0 identically; carries a witness direction in
/// Ker([B; D]|_{Ker M}).
class NotInvertibleError : public DomainError {
  public:
    NotInvertibleError(const std::string& what, Vector witness)
        : DomainError(what), witness_(std::move(witness)) {}
    const Vector& witness() const { return witness_; }

  private:
    Vector witness_;
};

InputSpaceDecomposition decompose_input_space(const Matrix& M, const Matrix& D, const Matrix& B,
                                              const ToleranceConfig& tol = {});

/// det F(z) not identically 0 iff [B; D] restricted to Ker M is injective.
bool invertibility(const StateSpaceRealization& r, const ToleranceConfig& tol = {});

/// A kernel direction witnessing non-invertibility, or nullopt when invertible.
std::optional<Vector> invertibility_witness(const StateSpaceRealization& r,
                                            const ToleranceConfig& tol = {});

/// For Ehat PSD and Ahat skew, the pencil (Ehat, Ahat) is regular iff Ahat
/// restricted to Ker Ehat is injective.
bool regular_pair_check(const Matrix& Ehat, const Matrix& Ahat, const ToleranceConfig& tol = {});

/// F(z)^{-1} = [0 I] (z diag(I, M) - [[A, B], [-B^T, -D]])^{-1} [0; I].
/// Size n + m; not minimal in general, but needs no decomposition — it is the
/// oracle the minimal forms are tested against.
DescriptorRealization inverse_descriptor_raw(const StateSpaceRealization& r,
                                             const ToleranceConfig& tol = {});

IntermediateInverse inverse_descriptor_minimal(const StateSpaceRealization& r,
                                               const InputSpaceDecomposition& dec,
                                               const ToleranceConfig& tol = {});

/// Minimal Weierstrass descriptor realization of the inverse, pencil size
/// n + m1 + m3.
DescriptorRealization inverse_weierstrass(const StateSpaceRealization& r,
                                          const InputSpaceDecomposition& dec,
                                          const ToleranceConfig& tol = {});

/// Minimal state-space realization of the inverse, state dimension
/// n + m1 - m3. The output satisfies the same structural conditions as the
/// input (M_inv PSD, A_inv/D_inv skew, controllable pair), certifying that
/// the inverse stays in the class.
StateSpaceRealization inverse_state_space(const StateSpaceRealization& r,
                                          const ToleranceConfig& tol = {});
StateSpaceRealization inverse_state_space(const StateSpaceRealization& r,
                                          const InputSpaceDecomposition& dec,
                                          const ToleranceConfig& tol = {});

}  // namespace prokit
