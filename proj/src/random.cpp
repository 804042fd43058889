#include "plq/random.hpp"

namespace plq {

Mat Rng::ginibre(long rows, long cols) {
    Mat m(rows, cols);
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) m(i, j) = cplx(gauss(), gauss()) / std::sqrt(2.0);
    return m;
}

Mat Rng::hermitian(long dim) {
    Mat g = ginibre(dim, dim);
    return (g + g.adjoint()) / 2.0;
}

Mat Rng::haar_unitary(long dim) {
    Mat g = ginibre(dim, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (long k = 0; k < dim; ++k) {
        cplx d = r(k, k);
        q.col(k) *= (d == 0.0) ? 1.0 : d / std::abs(d);
    }
    return q;
}

Mat Rng::psd_with_kernel(long dim, long kernel_dim, double floor) {
    Mat u = haar_unitary(dim);
    Eigen::VectorXd ev(dim);
    for (long k = 0; k < dim; ++k)
        ev(k) = k < kernel_dim ? 0.0 : std::abs(gauss()) + floor;
    return u * ev.asDiagonal() * u.adjoint();
}

}  // namespace plq
