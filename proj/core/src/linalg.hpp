#pragma once

// Small dense linear algebra on row-major buffers. Everything here operates
// on dimensions <= 6, so plain Gaussian elimination with partial pivoting is
// entirely adequate. The generic solver is templated over the scalar so the
// same code runs on doubles, complex values and jets (pivoting uses a
// magnitude functional of the scalar's value).

#include <cmath>
#include <complex>
#include <vector>

#include "hspace/errors.hpp"
#include "hspace/jet.hpp"

namespace hspace::linalg {

inline double pivot_mag(double x) { return std::abs(x); }
inline double pivot_mag(const std::complex<double>& x) { return std::abs(x); }
inline double pivot_mag(const Jet2& x) { return std::abs(x.value()); }

/// Solves A X = B in place over scalars T; A is n*n, B is n*m, both row-major.
/// Throws SingularMetric on pivot breakdown (callers wanting a different
/// error translate it).
template <class T>
void solve_in_place(std::vector<T>& A, std::vector<T>& B, int n, int m) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = pivot_mag(A[static_cast<std::size_t>(col * n + col)]);
        for (int r = col + 1; r < n; ++r) {
            const double mag = pivot_mag(A[static_cast<std::size_t>(r * n + col)]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best < 1e-300) throw SingularMetric("singular matrix in linear solve");
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<std::size_t>(col * n + c)], A[static_cast<std::size_t>(piv * n + c)]);
            for (int c = 0; c < m; ++c)
                std::swap(B[static_cast<std::size_t>(col * m + c)], B[static_cast<std::size_t>(piv * m + c)]);
        }
        const T diag = A[static_cast<std::size_t>(col * n + col)];
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T factor = A[static_cast<std::size_t>(r * n + col)] / diag;
            for (int c = col; c < n; ++c)
                A[static_cast<std::size_t>(r * n + c)] =
                    A[static_cast<std::size_t>(r * n + c)] - factor * A[static_cast<std::size_t>(col * n + c)];
            for (int c = 0; c < m; ++c)
                B[static_cast<std::size_t>(r * m + c)] =
                    B[static_cast<std::size_t>(r * m + c)] - factor * B[static_cast<std::size_t>(col * m + c)];
        }
    }
    for (int r = 0; r < n; ++r) {
        const T diag = A[static_cast<std::size_t>(r * n + r)];
        for (int c = 0; c < m; ++c)
            B[static_cast<std::size_t>(r * m + c)] = B[static_cast<std::size_t>(r * m + c)] / diag;
    }
}

template <class T>
std::vector<T> inverse(std::vector<T> A, int n, const T& one) {
    std::vector<T> I(static_cast<std::size_t>(n) * n, one * T(0.0));
    for (int i = 0; i < n; ++i) I[static_cast<std::size_t>(i * n + i)] = one;
    solve_in_place(A, I, n, n);
    return I;
}

inline std::vector<double> inverse(std::vector<double> A, int n) {
    return inverse(std::move(A), n, 1.0);
}

inline double det(std::vector<double> A, int n) {
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A[static_cast<std::size_t>(col * n + col)]);
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(A[static_cast<std::size_t>(r * n + col)]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<std::size_t>(col * n + c)], A[static_cast<std::size_t>(piv * n + c)]);
            d = -d;
        }
        const double diag = A[static_cast<std::size_t>(col * n + col)];
        d *= diag;
        for (int r = col + 1; r < n; ++r) {
            const double factor = A[static_cast<std::size_t>(r * n + col)] / diag;
            for (int c = col; c < n; ++c)
                A[static_cast<std::size_t>(r * n + c)] -= factor * A[static_cast<std::size_t>(col * n + c)];
        }
    }
    return d;
}

/// Cholesky feasibility test for symmetric positive definiteness.
inline bool is_positive_definite(const std::vector<double>& A, int n) {
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A[static_cast<std::size_t>(i * n + j)];
            for (int k = 0; k < j; ++k)
                s -= L[static_cast<std::size_t>(i * n + k)] * L[static_cast<std::size_t>(j * n + k)];
            if (i == j) {
                if (s <= 0.0) return false;
                L[static_cast<std::size_t>(i * n + j)] = std::sqrt(s);
            } else {
                L[static_cast<std::size_t>(i * n + j)] = s / L[static_cast<std::size_t>(j * n + j)];
            }
        }
    }
    return true;
}

}  // namespace hspace::linalg
