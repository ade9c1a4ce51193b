#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "hspace/errors.hpp"

namespace hspace {

using Complex = std::complex<double>;

/// Order-two jet: a value together with its gradient and Hessian with
/// respect to `dim` real base directions. Values are complex; a complex
/// coordinate is represented by two real directions seeded by the caller.
///
/// Dimension-zero jets act as plain scalars and promote silently in binary
/// operations; any other dimension mismatch throws DimensionError.
class Jet2 {
public:
    Jet2() : dim_(0), value_(0.0) {}
    /* implicit */ Jet2(double v) : dim_(0), value_(v) {}
    /* implicit */ Jet2(Complex v) : dim_(0), value_(v) {}

    static Jet2 constant(int dim, Complex value);
    /// Coordinate seed: value with gradient e_index and zero Hessian.
    static Jet2 variable(int dim, int index, Complex value);
    /// Assembles a jet from explicit derivative data; missing entries are zero.
    static Jet2 from_parts(int dim, Complex value, std::span<const Complex> grad,
                           std::span<const Complex> hess = {});

    int dim() const noexcept { return dim_; }
    Complex value() const noexcept { return value_; }
    Complex grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    Complex hess(int i, int j) const { return hess_[static_cast<std::size_t>(i * dim_ + j)]; }

    std::span<const Complex> grad() const noexcept { return grad_; }
    std::span<const Complex> hess() const noexcept { return hess_; }

    Jet2 operator-() const;
    friend Jet2 operator+(const Jet2& a, const Jet2& b);
    friend Jet2 operator-(const Jet2& a, const Jet2& b);
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);

    Jet2& operator+=(const Jet2& o) { *this = *this + o; return *this; }
    Jet2& operator-=(const Jet2& o) { *this = *this - o; return *this; }
    Jet2& operator*=(const Jet2& o) { *this = *this * o; return *this; }
    Jet2& operator/=(const Jet2& o) { *this = *this / o; return *this; }

    /// Composition with a univariate function given its value and first two
    /// derivatives at value(): the second-order chain rule.
    Jet2 compose(Complex f0, Complex f1, Complex f2) const;

private:
    friend std::pair<Jet2, Jet2> promote(const Jet2& a, const Jet2& b);
    friend Jet2 map_components(const Jet2& u, Complex (*f)(Complex));
    int dim_;
    Complex value_;
    std::vector<Complex> grad_;   // dim
    std::vector<Complex> hess_;   // dim*dim, symmetric
};

Jet2 sqrt(const Jet2& u);
Jet2 exp(const Jet2& u);
Jet2 log(const Jet2& u);
Jet2 sin(const Jet2& u);
Jet2 cos(const Jet2& u);
/// Complex conjugation; commutes with real-direction derivatives.
Jet2 conj(const Jet2& u);
Jet2 real_part(const Jet2& u);
Jet2 imag_part(const Jet2& u);
Jet2 abs_value(const Jet2& u);
Jet2 pow(const Jet2& u, long k);

/// Seeds one jet per coordinate of a real point.
std::vector<Jet2> lift_point(std::span<const double> p);

struct FdDerivatives {
    std::vector<Complex> grad;   // n
    std::vector<Complex> hess;   // n*n
};

/// Independent central-difference oracle, O(h^2) accurate. Steps are scaled
/// per coordinate as h*max(1,|p_i|).
FdDerivatives fd_derivatives(const std::function<Complex(std::span<const double>)>& f,
                             std::span<const double> p, double h = 1e-5);

}  // namespace hspace
