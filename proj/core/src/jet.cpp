#include "hspace/jet.hpp"

#include <cmath>
#include <utility>

namespace hspace {

namespace {
constexpr double kSingularModulus = 1e-14;
}

Jet2 Jet2::constant(int dim, Complex value) {
    Jet2 j;
    j.dim_ = dim;
    j.value_ = value;
    j.grad_.assign(static_cast<std::size_t>(dim), Complex(0.0));
    j.hess_.assign(static_cast<std::size_t>(dim) * dim, Complex(0.0));
    return j;
}

Jet2 Jet2::variable(int dim, int index, Complex value) {
    if (index < 0 || index >= dim) throw DimensionError("jet variable index out of range");
    Jet2 j = constant(dim, value);
    j.grad_[static_cast<std::size_t>(index)] = 1.0;
    return j;
}

Jet2 Jet2::from_parts(int dim, Complex value, std::span<const Complex> grad,
                      std::span<const Complex> hess) {
    if (!grad.empty() && static_cast<int>(grad.size()) != dim)
        throw DimensionError("gradient size does not match jet dimension");
    if (!hess.empty() && static_cast<int>(hess.size()) != dim * dim)
        throw DimensionError("Hessian size does not match jet dimension");
    Jet2 j = constant(dim, value);
    for (std::size_t i = 0; i < grad.size(); ++i) j.grad_[i] = grad[i];
    for (std::size_t i = 0; i < hess.size(); ++i) j.hess_[i] = hess[i];
    return j;
}

std::pair<Jet2, Jet2> promote(const Jet2& a, const Jet2& b) {
    if (a.dim_ == b.dim_) return {a, b};
    if (a.dim_ == 0) return {Jet2::constant(b.dim_, a.value_), b};
    if (b.dim_ == 0) return {a, Jet2::constant(a.dim_, b.value_)};
    throw DimensionError("jet dimension mismatch: " + std::to_string(a.dim_) + " vs " +
                         std::to_string(b.dim_));
}

Jet2 Jet2::operator-() const {
    Jet2 r = *this;
    r.value_ = -r.value_;
    for (auto& g : r.grad_) g = -g;
    for (auto& h : r.hess_) h = -h;
    return r;
}

Jet2 operator+(const Jet2& a0, const Jet2& b0) {
    auto [a, b] = promote(a0, b0);
    Jet2 r = a;
    r.value_ += b.value_;
    for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] += b.grad_[i];
    for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] += b.hess_[i];
    return r;
}

Jet2 operator-(const Jet2& a0, const Jet2& b0) {
    auto [a, b] = promote(a0, b0);
    Jet2 r = a;
    r.value_ -= b.value_;
    for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] -= b.grad_[i];
    for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] -= b.hess_[i];
    return r;
}

Jet2 operator*(const Jet2& a0, const Jet2& b0) {
    auto [a, b] = promote(a0, b0);
    const int n = a.dim_;
    Jet2 r = Jet2::constant(n, a.value_ * b.value_);
    for (int i = 0; i < n; ++i)
        r.grad_[static_cast<std::size_t>(i)] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r.hess_[static_cast<std::size_t>(i * n + j)] =
                a.hess_[static_cast<std::size_t>(i * n + j)] * b.value_ +
                a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i] +
                a.value_ * b.hess_[static_cast<std::size_t>(i * n + j)];
        }
    return r;
}

Jet2 Jet2::compose(Complex f0, Complex f1, Complex f2) const {
    const int n = dim_;
    Jet2 r = Jet2::constant(n, f0);
    for (int i = 0; i < n; ++i) r.grad_[static_cast<std::size_t>(i)] = f1 * grad_[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r.hess_[static_cast<std::size_t>(i * n + j)] =
                f1 * hess_[static_cast<std::size_t>(i * n + j)] + f2 * grad_[i] * grad_[j];
    return r;
}

Jet2 operator/(const Jet2& a0, const Jet2& b0) {
    auto [a, b] = promote(a0, b0);
    const Complex v = b.value_;
    if (std::abs(v) < kSingularModulus) throw DomainError("division by near-zero value");
    const Jet2 inv = b.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    return a * inv;
}

Jet2 sqrt(const Jet2& u) {
    const Complex v = u.value();
    if (std::abs(v) < kSingularModulus) throw DomainError("sqrt at branch point");
    const Complex s = std::sqrt(v);
    return u.compose(s, 0.5 / s, -0.25 / (s * v));
}

Jet2 exp(const Jet2& u) {
    const Complex e = std::exp(u.value());
    return u.compose(e, e, e);
}

Jet2 log(const Jet2& u) {
    const Complex v = u.value();
    if (std::abs(v) < kSingularModulus) throw DomainError("log at branch point");
    return u.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sin(const Jet2& u) {
    const Complex s = std::sin(u.value());
    const Complex c = std::cos(u.value());
    return u.compose(s, c, -s);
}

Jet2 cos(const Jet2& u) {
    const Complex s = std::sin(u.value());
    const Complex c = std::cos(u.value());
    return u.compose(c, -s, -c);
}

// Applies f to the value, gradient and Hessian entries alike. Valid for the
// R-linear maps conj, Re, Im, which commute with real-direction derivatives.
Jet2 map_components(const Jet2& u, Complex (*f)(Complex)) {
    Jet2 r = u;
    r.value_ = f(r.value_);
    for (auto& g : r.grad_) g = f(g);
    for (auto& h : r.hess_) h = f(h);
    return r;
}

Jet2 conj(const Jet2& u) {
    return map_components(u, +[](Complex z) { return std::conj(z); });
}

Jet2 real_part(const Jet2& u) {
    return map_components(u, +[](Complex z) { return Complex(z.real(), 0.0); });
}

Jet2 imag_part(const Jet2& u) {
    return map_components(u, +[](Complex z) { return Complex(z.imag(), 0.0); });
}

Jet2 abs_value(const Jet2& u) {
    // |u| = sqrt(re(u)^2 + im(u)^2), smooth away from zero.
    const Jet2 re = real_part(u);
    const Jet2 im = imag_part(u);
    return sqrt(re * re + im * im);
}

Jet2 pow(const Jet2& u, long k) {
    if (k == 0) return Jet2::constant(u.dim(), 1.0);
    if (k < 0) {
        if (std::abs(u.value()) < kSingularModulus)
            throw DomainError("negative power of near-zero value");
        return Jet2::constant(u.dim(), 1.0) / pow(u, -k);
    }
    // binary powering keeps derivative propagation exact
    Jet2 base = u;
    Jet2 acc = Jet2::constant(u.dim(), 1.0);
    long e = k;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

std::vector<Jet2> lift_point(std::span<const double> p) {
    const int n = static_cast<int>(p.size());
    std::vector<Jet2> out;
    out.reserve(p.size());
    for (int i = 0; i < n; ++i) out.push_back(Jet2::variable(n, i, p[static_cast<std::size_t>(i)]));
    return out;
}

FdDerivatives fd_derivatives(const std::function<Complex(std::span<const double>)>& f,
                             std::span<const double> p, double h) {
    const int n = static_cast<int>(p.size());
    std::vector<double> q(p.begin(), p.end());
    std::vector<double> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        step[static_cast<std::size_t>(i)] = h * std::max(1.0, std::abs(p[static_cast<std::size_t>(i)]));

    auto eval = [&](std::span<const double> x) -> Complex {
        try {
            return f(x);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw EvaluationError(e.what());
        }
    };

    FdDerivatives out;
    out.grad.assign(static_cast<std::size_t>(n), Complex(0.0));
    out.hess.assign(static_cast<std::size_t>(n) * n, Complex(0.0));

    const Complex f0 = eval(q);
    for (int i = 0; i < n; ++i) {
        const double hi = step[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + hi;
        const Complex fp = eval(q);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] - hi;
        const Complex fm = eval(q);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
        out.grad[static_cast<std::size_t>(i)] = (fp - fm) / (2.0 * hi);
        out.hess[static_cast<std::size_t>(i * n + i)] = (fp - 2.0 * f0 + fm) / (hi * hi);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double hi = step[static_cast<std::size_t>(i)];
            const double hj = step[static_cast<std::size_t>(j)];
            auto probe = [&](double si, double sj) {
                q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + si * hi;
                q[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] + sj * hj;
                const Complex v = eval(q);
                q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
                q[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)];
                return v;
            };
            const Complex mixed =
                (probe(1, 1) - probe(1, -1) - probe(-1, 1) + probe(-1, -1)) / (4.0 * hi * hj);
            out.hess[static_cast<std::size_t>(i * n + j)] = mixed;
            out.hess[static_cast<std::size_t>(j * n + i)] = mixed;
        }
    return out;
}

}  // namespace hspace
