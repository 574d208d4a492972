#pragma once

#include <cstddef>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/matrix.hpp"

/*
 * Truncated matrix jets: polynomials in a formal parameter eps with matrix
 * coefficients, computed modulo eps^order.  Used to state first- and
 * second-order lifting conditions as literal identities over K[eps]/(eps^k).
 */

namespace wdwalk {

struct MatrixJet {
    std::vector<Matrix> c;  // c[k] is the coefficient of eps^k

    std::size_t order() const { return c.size(); }
    std::size_t n() const { return c.empty() ? 0 : c.front().rows(); }

    bool operator==(const MatrixJet& o) const { return c == o.c; }
    bool operator!=(const MatrixJet& o) const { return !(*this == o); }
};

inline MatrixJet jet_constant(const Matrix& m, std::size_t order) {
    MatrixJet j;
    j.c.assign(order, Matrix(m.rows(), m.cols()));
    j.c[0] = m;
    return j;
}

inline MatrixJet jet_identity(std::size_t n, std::size_t order) {
    return jet_constant(Matrix::identity(n), order);
}

/** eps^k * m, truncated. */
inline MatrixJet jet_eps(const Matrix& m, std::size_t k, std::size_t order) {
    MatrixJet j;
    j.c.assign(order, Matrix(m.rows(), m.cols()));
    if (k < order) j.c[k] = m;
    return j;
}

inline MatrixJet jet_add(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r = a;
    for (std::size_t k = 0; k < r.order(); ++k) r.c[k] = r.c[k] + b.c[k];
    return r;
}

inline MatrixJet jet_sub(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r = a;
    for (std::size_t k = 0; k < r.order(); ++k) r.c[k] = r.c[k] - b.c[k];
    return r;
}

inline MatrixJet jet_scale(const FieldElement& s, const MatrixJet& a) {
    MatrixJet r = a;
    for (auto& m : r.c) m = s * m;
    return r;
}

inline MatrixJet jet_mul(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r;
    const std::size_t ord = a.order();
    r.c.assign(ord, Matrix(a.c.front().rows(), b.c.front().cols()));
    for (std::size_t i = 0; i < ord; ++i)
        for (std::size_t j = 0; i + j < ord; ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    return r;
}

inline bool jet_is_zero(const MatrixJet& a) {
    for (const auto& m : a.c)
        if (!m.is_zero()) return false;
    return true;
}

/** Inverse via the Neumann series around the invertible constant term. */
inline MatrixJet jet_inverse(const MatrixJet& a) {
    const std::size_t ord = a.order();
    const Matrix i0 = inverse(a.c.front());  // SingularMatrix if not invertible
    MatrixJet m = a;                         // the eps-positive part, scaled by i0
    m.c[0] = Matrix(a.n(), a.n());
    for (auto& cm : m.c) cm = i0 * cm;
    MatrixJet acc = jet_identity(a.n(), ord);
    MatrixJet pw = jet_identity(a.n(), ord);
    for (std::size_t k = 1; k < ord; ++k) {
        pw = jet_mul(pw, m);
        if (k % 2 == 1) acc = jet_sub(acc, pw);
        else acc = jet_add(acc, pw);
    }
    MatrixJet r = acc;
    for (auto& cm : r.c) cm = cm * i0;
    return r;
}

/** exp of a jet with zero constant term (exact: the series truncates). */
inline MatrixJet jet_exp(const MatrixJet& a) {
    if (!a.c.front().is_zero()) throw Error("jet exponential needs a zero constant term");
    const std::size_t ord = a.order();
    MatrixJet acc = jet_identity(a.n(), ord);
    MatrixJet pw = jet_identity(a.n(), ord);
    Rational fact(1);
    for (std::size_t k = 1; k < ord; ++k) {
        pw = jet_mul(pw, a);
        fact /= Rational(static_cast<long>(k));
        acc = jet_add(acc, jet_scale(FieldElement(fact), pw));
    }
    return acc;
}

}  // namespace wdwalk
