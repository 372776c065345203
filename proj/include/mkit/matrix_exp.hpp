#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace mkit {

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// The argument is scaled by 2^-s so that its 1-norm is at most 1/2; the
/// Taylor series is then summed until the next term falls below machine
/// precision relative to the partial sum, and the result is squared s times.
/// For ||X|| <= 5 this gives relative accuracy around 1e-14.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
matrix_exp(const Eigen::MatrixBase<Derived>& X)
{
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using std::abs;

    eigen_assert(X.rows() == X.cols());
    const Eigen::Index n = X.rows();

    const double norm = X.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix A = X / std::ldexp(1.0, squarings);

    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k < 40; ++k) {
        term = (term * A) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-17 * result.cwiseAbs().maxCoeff())
            break;
    }
    for (int s = 0; s < squarings; ++s)
        result = (result * result).eval();
    return result;
}

} // namespace mkit
