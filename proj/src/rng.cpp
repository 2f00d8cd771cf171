#include "prokit/rng.hpp"

#include <Eigen/QR>

namespace prokit {

Matrix Rng::orthogonal(Index n) {
    if (n == 0) return Matrix::Zero(0, 0);
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    Matrix Q = qr.householderQ();
    // fix signs so the factor is unique given the sample
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    }
    return Q;
}

Matrix Rng::symmetric(Index n, double scale) {
    const Matrix X = gaussian(n, n);
    return scale * (X + X.transpose()) / 2.0;
}

Matrix Rng::skew(Index n, double scale) {
    const Matrix X = gaussian(n, n);
    return scale * (X - X.transpose()) / 2.0;
}

Matrix Rng::psd(Index n, Index rank, double scale) {
    if (rank == 0) return Matrix::Zero(n, n);
    const Matrix G = gaussian(rank, n);
    return scale * (G.transpose() * G);
}

}  // namespace prokit
