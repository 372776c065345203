#pragma once

#include <complex>
#include <stdexcept>
#include <type_traits>

#include <Eigen/Dense>

namespace mkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using IndexMatrix = Eigen::MatrixXi;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Thrown when a matrix fails the SU(1,d) membership test.
class InvalidGroupElement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shifted factorial (x)_k = x (x+1) ... (x+k-1).
///
/// The product is formed left to right, so for a nonpositive integer x with
/// -x < k one factor is exactly zero and the result is exactly zero.
template <class T>
T pochhammer(const T& x, int k)
{
    if (k < 0)
        throw std::invalid_argument("pochhammer: negative length");
    T result(1);
    for (int j = 0; j < k; ++j)
        result *= x + T(j);
    return result;
}

inline double factorial(int k)
{
    return pochhammer(1.0, k);
}

/// x^k by repeated multiplication; 0^0 = 1.
template <class T>
T int_power(const T& x, int k)
{
    if (k < 0)
        return T(1) / int_power(x, -k);
    T result(1);
    for (int j = 0; j < k; ++j)
        result *= x;
    return result;
}

/// Principal branch power exp(s Log z).
inline Complex principal_power(Complex z, Complex s)
{
    return std::exp(s * std::log(z));
}

/// Neumaier-compensated accumulator; complex values are compensated per component.
template <class Scalar>
class CompensatedSum {
public:
    void add(const Scalar& x)
    {
        if constexpr (is_complex_v<Scalar>) {
            accumulate(re_, re_c_, x.real());
            accumulate(im_, im_c_, x.imag());
        } else {
            accumulate(re_, re_c_, x);
        }
    }

    CompensatedSum& operator+=(const Scalar& x)
    {
        add(x);
        return *this;
    }

    Scalar value() const
    {
        if constexpr (is_complex_v<Scalar>)
            return Scalar(re_ + re_c_, im_ + im_c_);
        else
            return re_ + re_c_;
    }

private:
    static void accumulate(double& sum, double& comp, double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double re_ = 0.0, re_c_ = 0.0;
    double im_ = 0.0, im_c_ = 0.0;
};

/// Max-entry magnitude of a dense expression.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& x)
{
    return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

} // namespace mkit
