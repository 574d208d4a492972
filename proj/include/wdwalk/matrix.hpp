#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/fieldpoly.hpp"
#include "wdwalk/numberfield.hpp"

/*
 * Exact dense matrices over a number field, with the linear and spectral
 * algebra the Lie-theoretic layers need: reduced row echelon form, kernels,
 * solves, minimal polynomials, primary (spectral) projectors, nilpotent
 * exp/log, Jordan-Chevalley decompositions, and finite-order detection.
 */

namespace wdwalk {

using Vec = std::vector<FieldElement>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement(Rational(1));
        return m;
    }
    static Matrix scalar(std::size_t n, const FieldElement& c) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    FieldElement& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const FieldElement& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const FieldElement& operator()(std::size_t i, std::size_t j) const { return at(i, j); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw Error("matrix shape mismatch in +");
        Matrix r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw Error("matrix shape mismatch in -");
        Matrix r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw Error("matrix shape mismatch in *");
        Matrix r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    r.at(i, j) += x.at(i, k) * y.at(k, j);
            }
        return r;
    }
    friend Matrix operator*(const FieldElement& c, const Matrix& x) {
        Matrix r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = c * x.a_[i];
        return r;
    }
    friend Vec operator*(const Matrix& x, const Vec& v) {
        if (x.cols_ != v.size()) throw Error("matrix/vector shape mismatch");
        Vec r(x.rows_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t j = 0; j < x.cols_; ++j) r[i] += x.at(i, j) * v[j];
        return r;
    }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
        for (std::size_t i = 0; i < x.a_.size(); ++i)
            if (!(x.a_[i] == y.a_[i])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    FieldElement trace() const {
        if (!is_square()) throw Error("trace of a non-square matrix");
        FieldElement t;
        for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    template <typename F>
    Matrix map(F&& fn) const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = fn(a_[i]);
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) os << "; ";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) os << ", ";
                os << at(i, j).to_string();
            }
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_, cols_;
    std::vector<FieldElement> a_;
};

inline Vec flatten(const Matrix& m) {
    Vec v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

inline Matrix unflatten(const Vec& v, std::size_t r, std::size_t c) {
    if (v.size() != r * c) throw Error("unflatten size mismatch");
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = v[i * c + j];
    return m;
}

/** Columns of b appended to the right of a. */
inline Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw Error("hcat row mismatch");
    Matrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

/** Rows of b appended below a. */
inline Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw Error("vcat column mismatch");
    Matrix r(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r.at(a.rows() + i, j) = b.at(i, j);
    return r;
}

inline Matrix matrix_from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return Matrix(0, 0);
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows()) throw Error("column length mismatch");
        for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

struct RrefResult {
    Matrix r;
    std::vector<std::size_t> pivot_cols;
};

/** Reduced row echelon form with deterministic (first-nonzero) pivoting. */
inline RrefResult rref(Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m.at(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(row, j));
        const FieldElement inv = m.at(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            const FieldElement f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivot_cols.size(); }

/** Canonical kernel basis: one vector per free column, that column set to 1. */
inline std::vector<Vec> kernel_basis(const Matrix& m) {
    const auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        Vec v(m.cols());
        v[free_col] = FieldElement(Rational(1));
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r.at(k, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

/** One exact solution of A x = b (free variables set to 0), if consistent. */
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
    if (a.rows() != b.size()) throw Error("solve shape mismatch");
    Matrix aug = hcat(a, matrix_from_columns({b}));
    const auto [r, pivots] = rref(std::move(aug));
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // pivot in b column
    Vec x(a.cols());
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = r.at(k, a.cols());
    return x;
}

inline Matrix inverse(const Matrix& m) {
    if (!m.is_square()) throw Error("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    const auto [r, pivots] = rref(hcat(m, Matrix::identity(n)));
    if (pivots.size() < n || pivots.back() >= n) throw SingularMatrix("matrix is not invertible");
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = r.at(i, n + j);
    return inv;
}

inline FieldElement det(Matrix m) {
    if (!m.is_square()) throw Error("determinant of a non-square matrix");
    FieldElement d(Rational(1));
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && m.at(p, col).is_zero()) ++p;
        if (p == n) return FieldElement(Rational(0));
        if (p != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        const FieldElement inv = m.at(col, col).inverse();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m.at(i, col).is_zero()) continue;
            const FieldElement f = m.at(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
        }
    }
    return d;
}

inline Matrix mat_pow(const Matrix& m, const Integer& e) {
    if (!m.is_square()) throw Error("power of a non-square matrix");
    if (e < 0) return mat_pow(inverse(m), -e);
    Matrix acc = Matrix::identity(m.rows()), base = m;
    Integer k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}
inline Matrix mat_pow(const Matrix& m, long e) { return mat_pow(m, Integer(e)); }

inline Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/** First field pointer appearing among the entries (null for all-rational). */
inline FieldPtr field_of(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j).field()) return m.at(i, j).field();
    return nullptr;
}

inline FieldElement eval_poly_at(const kp::FPoly& f, const FieldElement& x) {
    return kp::eval(f, x);
}

inline Matrix eval_poly_at(const kp::FPoly& f, const Matrix& a) {
    if (!a.is_square()) throw Error("polynomial of a non-square matrix");
    Matrix acc(a.rows(), a.cols());
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * a + Matrix::scalar(a.rows(), *it);
    return acc;
}

/** Monic minimal polynomial, via the first linear dependence among powers. */
inline kp::FPoly minimal_polynomial(const Matrix& a) {
    if (!a.is_square()) throw Error("minimal polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    std::vector<Vec> power_cols{flatten(Matrix::identity(n))};
    Matrix pw = Matrix::identity(n);
    for (std::size_t k = 1; k <= n * n + 1; ++k) {
        pw = pw * a;
        const Vec target = flatten(pw);
        if (auto c = solve(matrix_from_columns(power_cols), target)) {
            kp::FPoly mu(k + 1);
            for (std::size_t i = 0; i < k; ++i) mu[i] = -(*c)[i];
            mu[k] = FieldElement(Rational(1));
            return mu;
        }
        power_cols.push_back(target);
    }
    throw Error("minimal polynomial search did not terminate");
}

inline bool is_nilpotent(const Matrix& a) {
    if (!a.is_square()) return false;
    return mat_pow(a, static_cast<long>(a.rows())).is_zero();
}

/** Smallest e with a^e = 0. */
inline std::size_t nilpotency_index(const Matrix& a) {
    if (!is_nilpotent(a)) throw NotNilpotent("matrix is not nilpotent");
    Matrix pw = Matrix::identity(a.rows());
    for (std::size_t e = 0; e <= a.rows(); ++e) {
        if (pw.is_zero()) return e;
        pw = pw * a;
    }
    return a.rows();
}

inline bool is_unipotent(const Matrix& a) {
    if (!a.is_square()) return false;
    return is_nilpotent(a - Matrix::identity(a.rows()));
}

inline Matrix exp_nilpotent(const Matrix& x) {
    if (!is_nilpotent(x)) throw NotNilpotent("exp requires a nilpotent argument");
    Matrix acc = Matrix::identity(x.rows());
    Matrix term = Matrix::identity(x.rows());
    for (std::size_t k = 1; k <= x.rows(); ++k) {
        term = FieldElement(Rational(1, static_cast<long>(k))) * (term * x);
        if (term.is_zero()) break;
        acc = acc + term;
    }
    return acc;
}

inline Matrix log_unipotent(const Matrix& u) {
    if (!is_unipotent(u)) throw NotUnipotent("log requires a unipotent argument");
    const Matrix y = u - Matrix::identity(u.rows());
    Matrix acc(u.rows(), u.rows());
    Matrix ypow = Matrix::identity(u.rows());
    for (std::size_t k = 1; k <= u.rows(); ++k) {
        ypow = ypow * y;
        if (ypow.is_zero()) break;
        const Rational sign = (k % 2 == 1) ? Rational(1, static_cast<long>(k))
                                           : Rational(-1, static_cast<long>(k));
        acc = acc + FieldElement(sign) * ypow;
    }
    return acc;
}

inline bool is_semisimple(const Matrix& a) {
    const kp::FPoly mu = minimal_polynomial(a);
    return kp::degree(kp::gcd_monic(mu, kp::derivative(mu))) == 0;
}

/**
 * Spectral projector onto the mu-eigenspace of a semisimple matrix: the
 * unique polynomial in the matrix that is 1 on the mu-eigenspace and 0 on
 * every other primary component.
 */
inline Matrix primary_projector(const Matrix& a, const FieldElement& mu) {
    const kp::FPoly m = minimal_polynomial(a);
    if (kp::degree(kp::gcd_monic(m, kp::derivative(m))) != 0)
        throw NotSemisimple("primary projector requires a squarefree minimal polynomial");
    if (!kp::eval(m, mu).is_zero())
        throw NotAnEigenvalue("value is not a root of the minimal polynomial");
    const kp::FPoly r = kp::divmod(m, kp::FPoly{-mu, FieldElement(Rational(1))}).first;
    const FieldElement r_at_mu = kp::eval(r, mu);
    return r_at_mu.inverse() * eval_poly_at(r, a);
}

/** primary_projector, but the zero map when mu is not an eigenvalue. */
inline Matrix projector_or_zero(const Matrix& a, const FieldElement& mu) {
    const kp::FPoly m = minimal_polynomial(a);
    if (!kp::eval(m, mu).is_zero()) return Matrix(a.rows(), a.cols());
    return primary_projector(a, mu);
}

/**
 * Smallest M >= 1 with a^M = identity, or 0 when no such M exists.  Works
 * factor-by-factor on the minimal polynomial: a root of an irreducible g of
 * degree e over K is a root of unity of order M only if phi(M) <= e*[K:Q],
 * so each factor admits a finite search; the overall order is the lcm.
 */
inline long finite_multiplicative_order(const Matrix& a) {
    const kp::FPoly mu = minimal_polynomial(a);
    if (kp::degree(kp::gcd_monic(mu, kp::derivative(mu))) != 0) return 0;  // not semisimple
    const FieldPtr K = field_of(a) ? field_of(a) : NumberField::rationals();
    const long d = K->degree();
    long overall = 1;
    for (const auto& [g, mult] : kp::factor_over_field(mu, K)) {
        (void)mult;
        const long e = kp::degree(g);
        const long phi_bound = e * d;
        const long n_bound = 2 * phi_bound * phi_bound + 2;  // phi(n) >= sqrt(n/2)
        const kp::FPoly x_poly{FieldElement(), FieldElement(Rational(1))};
        kp::FPoly acc = kp::divmod(x_poly, g).second;
        long order = 0;
        for (long n = 1; n <= n_bound; ++n) {
            if (acc.size() == 1 && acc[0].is_one()) {
                order = n;
                break;
            }
            acc = kp::divmod(kp::mul(acc, x_poly), g).second;
        }
        if (order == 0) return 0;
        overall = std::lcm(overall, order);
    }
    // Invariant re-check: mu must divide x^overall - 1.
    kp::FPoly check = kp::powmod(kp::FPoly{FieldElement(), FieldElement(Rational(1))},
                                 Integer(overall), mu);
    check = kp::sub(check, kp::FPoly{FieldElement(Rational(1))});
    if (!kp::is_zero(check))
        throw InvariantViolation("per-factor orders do not assemble to a global order");
    return overall;
}

/** Additive Jordan decomposition a = s + n, s semisimple, n nilpotent, [s,n]=0. */
inline std::pair<Matrix, Matrix> jordan_chevalley_additive(const Matrix& a) {
    const kp::FPoly mu = minimal_polynomial(a);
    const kp::FPoly f = kp::squarefree_part(mu);
    Matrix s = a;
    for (std::size_t it = 0; it <= 2 * a.rows() + 2; ++it) {
        const Matrix fs = eval_poly_at(f, s);
        if (fs.is_zero()) {
            const Matrix n = a - s;
            if (!is_nilpotent(n) || !(s * n == n * s))
                throw Error("Jordan decomposition verification failed");
            return {s, n};
        }
        s = s - eval_poly_at(f, s) * inverse(eval_poly_at(kp::derivative(f), s));
    }
    throw Error("Jordan decomposition Newton iteration did not converge");
}

/** Multiplicative Jordan decomposition a = s * u, u unipotent, s u = u s. */
inline std::pair<Matrix, Matrix> jordan_chevalley(const Matrix& a) {
    const auto [s, n] = jordan_chevalley_additive(a);
    (void)n;
    const Matrix u = inverse(s) * a;
    if (!is_unipotent(u) || !(s * u == u * s))
        throw Error("multiplicative Jordan decomposition verification failed");
    return {s, u};
}

}  // namespace wdwalk
