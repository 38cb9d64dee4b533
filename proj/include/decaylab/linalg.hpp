// linalg.hpp: small dense complex matrices, Kronecker products and a Hermitian Jacobi eigensolver

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decaylab {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Square complex matrix with row-major storage.
///
/// Every matrix-valued object of the library (density matrices, Kraus and
/// Lindblad operators, the metric, Choi matrices) is one of these.  Sizes stay
/// small (2, 3, 4, 9), so everything is plain loops.
class CMatrix {
public:
    CMatrix() = default;

    explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
        data_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_) {
                throw std::invalid_argument("CMatrix: rows must form a square matrix");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static CMatrix zero(std::size_t dim) { return CMatrix(dim); }

    static CMatrix identity(std::size_t dim) {
        CMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diag(const CVector& d) {
        CMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// |i><j|
    static CMatrix unit(std::size_t dim, std::size_t i, std::size_t j) {
        if (i >= dim || j >= dim) throw std::out_of_range("CMatrix::unit: index out of range");
        CMatrix m(dim);
        m(i, j) = 1.0;
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }
    const CVector& entries() const noexcept { return data_; }
    CVector& entries() noexcept { return data_; }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * dim_ + c]; }

    CMatrix adjoint() const {
        CMatrix m(dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CMatrix transpose() const {
        CMatrix m(dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }

    Complex trace() const {
        Complex t{};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    CMatrix& operator-=(const CMatrix& o) {
        check_same(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    CMatrix& operator*=(Complex s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(CMatrix a, double s) { return a *= Complex(s); }
    friend CMatrix operator*(double s, CMatrix a) { return a *= Complex(s); }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        a.check_same(b, "operator*");
        const std::size_t n = a.dim_;
        CMatrix m(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex ark = a(r, k);
                if (ark == Complex{}) continue;
                for (std::size_t c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }

    friend bool operator==(const CMatrix& a, const CMatrix& b) {
        return a.dim_ == b.dim_ && a.data_ == b.data_;
    }

private:
    void check_same(const CMatrix& o, const char* what) const {
        if (o.dim_ != dim_) {
            throw std::invalid_argument(std::string("CMatrix::") + what + ": dimension mismatch (" +
                                        std::to_string(dim_) + " vs " + std::to_string(o.dim_) + ")");
        }
    }

    std::size_t dim_{0};
    CVector data_;
};

// --------------------------- products and norms -----------------------------

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }
inline CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

/// (A ⊗ B)[(i·dB + k), (j·dB + l)] = A[i,j]·B[k,l]
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    CMatrix m(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) m(i * db + k, j * db + l) = aij * b(k, l);
        }
    return m;
}

inline double frobenius_norm(const CMatrix& m) {
    double s = 0.0;
    for (const auto& x : m.entries()) s += std::norm(x);
    return std::sqrt(s);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
    return d;
}

inline double hermiticity_defect(const CMatrix& m) { return frobenius_norm(m - m.adjoint()); }

inline bool is_hermitian(const CMatrix& m) {
    return hermiticity_defect(m) <= 1e-10 * frobenius_norm(m);
}

inline CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

// --------------------------- vectors -----------------------------------------

inline CVector apply(const CMatrix& m, const CVector& v) {
    if (v.size() != m.dim()) throw std::invalid_argument("apply: dimension mismatch");
    CVector out(v.size());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) out[r] += m(r, c) * v[c];
    return out;
}

/// <a|b>, antilinear in the first argument
inline Complex inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
    Complex s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

/// |a><b|
inline CMatrix outer(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("outer: dimension mismatch");
    CMatrix m(a.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < b.size(); ++c) m(r, c) = a[r] * std::conj(b[c]);
    return m;
}

/// <v|M|v>
inline Complex expectation(const CMatrix& m, const CVector& v) { return inner(v, apply(m, v)); }

inline CVector kron(const CVector& a, const CVector& b) {
    CVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

// --------------------------- inverse -----------------------------------------

/// Gauss-Jordan elimination with partial pivoting.
inline CMatrix inverse(const CMatrix& m) {
    const std::size_t n = m.dim();
    CMatrix a = m;
    CMatrix inv = CMatrix::identity(n);
    const double tiny = 1e-14 * frobenius_norm(m);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (!(std::abs(a(piv, col)) > tiny)) throw std::domain_error("inverse: singular matrix");
        if (piv != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(piv, c), a(col, c));
                std::swap(inv(piv, c), inv(col, c));
            }
        const Complex p = 1.0 / a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) *= p;
            inv(col, c) *= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = a(r, col);
            if (f == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

// --------------------------- Hermitian eigenproblem -------------------------

struct HermitianEigen {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns, same order as values
};

namespace detail {

inline void require_hermitian(const CMatrix& m, const char* who) {
    const double tol = 1e-10 * frobenius_norm(m);
    if (hermiticity_defect(m) > tol) {
        throw std::domain_error(std::string(who) + ": not Hermitian");
    }
}

}  // namespace detail

/// Cyclic complex Jacobi rotations.  Each rotation first removes the phase of
/// the pivot a_pq and then applies the real symmetric Jacobi rotation, so the
/// accumulated transform stays unitary.  Stops once the off-diagonal norm
/// drops below 1e-14·‖M‖_F or after 100 sweeps.
inline HermitianEigen hermitian_eigen(const CMatrix& m) {
    detail::require_hermitian(m, "hermitian_eigen");
    const std::size_t n = m.dim();
    CMatrix a = hermitian_part(m);
    CMatrix q = CMatrix::identity(n);
    const double threshold = 1e-14 * frobenius_norm(m);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c) s += std::norm(a(r, c));
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const Complex apq = a(p, r);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;
                const double app = a(p, p).real(), aqq = a(r, r).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // U acts on (p, r): U_pp = c, U_pr = s, U_rp = -s·conj(phase), U_rr = c·conj(phase)
                const Complex upp = c, upr = s, urp = -s * std::conj(phase), urr = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akr = a(k, r);
                    a(k, p) = akp * upp + akr * urp;
                    a(k, r) = akp * upr + akr * urr;
                    const Complex qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = qkp * upp + qkr * urp;
                    q(k, r) = qkp * upr + qkr * urr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), ark = a(r, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(urp) * ark;
                    a(r, k) = std::conj(upr) * apk + std::conj(urr) * ark;
                }
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(r, r) = a(r, r).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out{std::vector<double>(n), CMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = q(r, order[k]);
    }
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const CMatrix& m) { return hermitian_eigen(m).values; }

inline double min_eigenvalue(const CMatrix& m) {
    const auto ev = hermitian_eigenvalues(m);
    return ev.empty() ? 0.0 : ev.front();
}

inline bool is_psd(const CMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

}  // namespace decaylab
