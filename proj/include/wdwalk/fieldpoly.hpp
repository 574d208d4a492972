#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/numberfield.hpp"
#include "wdwalk/ratpoly.hpp"

/*
 * Dense univariate polynomials with number-field coefficients, and the
 * field-level algorithms built on them: norms via interpolated Sylvester
 * resultants, Trager's norm-based factorization, root extraction, and
 * primitive-element field extensions.
 */

namespace wdwalk::kp {

using FPoly = std::vector<FieldElement>;

inline void normalize(FPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int degree(const FPoly& p) { return static_cast<int>(p.size()) - 1; }

inline bool is_zero(const FPoly& p) { return p.empty(); }

inline FieldElement coeff(const FPoly& p, std::size_t i) {
    return i < p.size() ? p[i] : FieldElement();
}

inline FPoly from_q(const qp::QPoly& q) {
    FPoly r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = FieldElement(q[i]);
    return r;
}

/** Coerce to rational coefficients; throws if any coefficient is irrational. */
inline qp::QPoly to_q(const FPoly& p) {
    qp::QPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i].as_rational();
    qp::normalize(r);
    return r;
}

inline FPoly add(const FPoly& a, const FPoly& b) {
    FPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(a, i) + coeff(b, i);
    normalize(r);
    return r;
}

inline FPoly sub(const FPoly& a, const FPoly& b) {
    FPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(a, i) - coeff(b, i);
    normalize(r);
    return r;
}

inline FPoly mul(const FPoly& a, const FPoly& b) {
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    normalize(r);
    return r;
}

inline FPoly scale(const FPoly& a, const FieldElement& c) {
    if (c.is_zero()) return {};
    FPoly r(a);
    for (auto& x : r) x *= c;
    return r;
}

inline std::pair<FPoly, FPoly> divmod(const FPoly& a, const FPoly& b) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    FPoly rem(a), quo;
    if (a.size() < b.size()) return {quo, rem};
    quo.assign(a.size() - b.size() + 1, FieldElement());
    const FieldElement inv_lead = b.back().inverse();
    for (int k = static_cast<int>(rem.size()) - static_cast<int>(b.size()); k >= 0; --k) {
        FieldElement c = rem[k + b.size() - 1] * inv_lead;
        quo[k] = c;
        if (!c.is_zero())
            for (std::size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
    }
    rem.resize(b.size() - 1);
    normalize(rem);
    normalize(quo);
    return {quo, rem};
}

inline FPoly monic(const FPoly& p) {
    if (p.empty()) return p;
    return scale(p, p.back().inverse());
}

inline FPoly derivative(const FPoly& p) {
    if (p.size() < 2) return {};
    FPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i)
        r[i - 1] = p[i] * FieldElement(Rational(static_cast<long>(i)));
    normalize(r);
    return r;
}

inline FieldElement eval(const FPoly& p, const FieldElement& x) {
    FieldElement acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline FPoly gcd_monic(FPoly a, FPoly b) {
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline FPoly squarefree_part(const FPoly& p) {
    if (degree(p) < 1) return monic(p);
    auto g = gcd_monic(p, derivative(p));
    return monic(divmod(p, g).first);
}

/** Yun decomposition over the coefficient field. */
inline std::vector<std::pair<FPoly, int>> squarefree_decomposition(const FPoly& p) {
    std::vector<std::pair<FPoly, int>> out;
    if (degree(p) < 1) return out;
    FPoly f = monic(p);
    FPoly fp = derivative(f);
    FPoly a = gcd_monic(f, fp);
    FPoly b = divmod(f, a).first;
    FPoly c = sub(divmod(fp, a).first, derivative(b));
    int i = 1;
    while (degree(b) > 0) {
        FPoly d = gcd_monic(b, c);
        if (degree(d) > 0) out.emplace_back(d, i);
        b = divmod(b, d).first;
        c = sub(divmod(c, d).first, derivative(b));
        ++i;
    }
    return out;
}

/** Deterministic ordering on field elements (padded coordinate lex order). */
inline bool lex_less(const FieldElement& a, const FieldElement& b) {
    const auto ca = a.coords(), cb = b.coords();
    if (ca.size() != cb.size()) return ca.size() < cb.size();
    for (std::size_t i = ca.size(); i-- > 0;) {
        const int c = mpq_cmp(ca[i].get_mpq_t(), cb[i].get_mpq_t());
        if (c != 0) return c < 0;
    }
    return false;
}

inline bool lex_less_poly(const FPoly& a, const FPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = a.size(); i-- > 0;) {
        if (lex_less(a[i], b[i])) return true;
        if (lex_less(b[i], a[i])) return false;
    }
    return false;
}

/** f(x + a): substitution of a degree-one polynomial, by Horner. */
inline FPoly shift(const FPoly& f, const FieldElement& a) {
    FPoly acc;
    const FPoly xpa{a, FieldElement(Rational(1))};
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = add(mul(acc, xpa), FPoly{*it});
    normalize(acc);
    return acc;
}

/**
 * Norm from K[x] down to Q[x]: the product of all conjugates of f, computed
 * by evaluating Sylvester resultants at interpolation nodes.  Exact for any
 * f; the result has degree at most [K:Q] * deg f (with equality iff the norm
 * of the leading coefficient is nonzero, e.g. f monic).
 */
inline qp::QPoly compute_norm(const FPoly& f, const FieldPtr& K) {
    if (!K) throw Error("compute_norm requires an explicit field");
    if (is_zero(f)) return {};
    const int d = K->degree();
    const int target_deg = d * degree(f);
    std::vector<Rational> xs, ys;
    long node = 0;
    while (static_cast<int>(xs.size()) < target_deg + 1) {
        const Rational x0(node);
        // f(x0) as a polynomial in the field generator.
        qp::QPoly g(static_cast<std::size_t>(d), Rational(0));
        {
            FieldElement v = eval(f, FieldElement(x0).promoted(K));
            const auto cs = v.promoted(K).coords();
            for (std::size_t j = 0; j < cs.size() && j < g.size(); ++j) g[j] = cs[j];
        }
        xs.push_back(x0);
        ys.push_back(qp::sylvester_resultant(K->min_poly(), d, g, d - 1));
        node = node <= 0 ? -node + 1 : -node;  // 0, 1, -1, 2, -2, ...
    }
    qp::QPoly out = qp::lagrange_interpolate(xs, ys);
    qp::normalize(out);
    return out;
}

/** Trager: monic irreducible factors of a monic squarefree f over K. */
inline std::vector<FPoly> factor_squarefree_over_field(const FPoly& f, const FieldPtr& K) {
    if (degree(f) < 1) return {};
    if (degree(f) == 1) return {monic(f)};
    const FieldElement theta = K ? FieldElement::generator(K) : FieldElement(Rational(0));
    for (long s = 0; s < 200; ++s) {
        const FieldElement shift_amt = FieldElement(Rational(-s)) * theta;
        FPoly F = shift(f, shift_amt);  // F(x) = f(x - s*theta)
        qp::QPoly norm = compute_norm(F, K ? K : NumberField::rationals());
        if (!qp::is_squarefree(norm)) continue;
        std::vector<FPoly> out;
        for (const auto& [H, mult] : qp::factor(norm)) {
            (void)mult;
            FPoly g = gcd_monic(F, from_q(H));
            if (degree(g) < 1) continue;
            out.push_back(monic(shift(g, -shift_amt)));  // undo x -> x - s*theta
        }
        int total = 0;
        for (const auto& g : out) total += degree(g);
        if (total != degree(f)) throw Error("norm factorization did not cover the polynomial");
        std::sort(out.begin(), out.end(), lex_less_poly);
        return out;
    }
    throw PrimitiveElementSearchFailed("no squarefree norm shift found");
}

/** Full factorization over K: monic irreducible factors with multiplicity. */
inline std::vector<std::pair<FPoly, int>> factor_over_field(const FPoly& p, const FieldPtr& K) {
    if (is_zero(p)) throw Error("cannot factor the zero polynomial");
    std::vector<std::pair<FPoly, int>> out;
    for (const auto& [sf, mult] : squarefree_decomposition(p))
        for (const auto& g : factor_squarefree_over_field(sf, K)) out.emplace_back(g, mult);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        if (lex_less_poly(a.first, b.first)) return true;
        if (lex_less_poly(b.first, a.first)) return false;
        return a.second < b.second;
    });
    return out;
}

/** Distinct roots of p lying in K, in deterministic order. */
inline std::vector<FieldElement> roots_in_field(const FPoly& p, const FieldPtr& K) {
    std::vector<FieldElement> roots;
    if (degree(p) < 1) return roots;
    for (const auto& [g, mult] : factor_over_field(p, K)) {
        (void)mult;
        if (degree(g) == 1) roots.push_back(-g[0]);
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](const FieldElement& a, const FieldElement& b) { return a == b; }),
                roots.end());
    return roots;
}

/** An embedding of one number field into another. */
struct FieldEmbedding {
    FieldPtr source;
    FieldPtr target;
    FieldElement theta_image;  // image in target of source's generator
    FieldElement root;         // a root in target of the polynomial that was adjoined

    FieldElement map(const FieldElement& a) const {
        if (!a.field()) return a.promoted(target);
        if (!a.field()->same_as(*source)) throw FieldMismatch("element not in the source field");
        FieldElement acc;
        const auto& cs = a.poly();
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            acc = acc * theta_image + FieldElement(*it).promoted(target);
        return acc.promoted(target);
    }

    bool is_identity() const { return source->same_as(*target); }
};

/**
 * Extend K by a root of an irreducible monic f.  Finds a primitive element
 * gamma = beta + k*theta with squarefree norm, builds the target field from
 * that norm, and recovers theta inside it by a linear gcd.
 */
inline FieldEmbedding extend_field(const FieldPtr& K, const FPoly& f_in) {
    const FPoly f = monic(f_in);
    if (degree(f) < 1) throw Error("cannot extend by a constant polynomial");
    const FieldPtr Kf = K ? K : NumberField::rationals();
    if (degree(f) == 1)
        return {Kf, Kf, FieldElement::generator(Kf), (-f[0]).promoted(Kf)};
    const FieldElement theta = FieldElement::generator(Kf);
    const int d = Kf->degree();
    for (long k = 0; k < 200; ++k) {
        const FieldElement kt = FieldElement(Rational(-k)) * theta;
        qp::QPoly norm = compute_norm(shift(f, kt), Kf);  // Norm(f(x - k*theta))
        if (!qp::is_squarefree(norm)) continue;
        const FieldPtr L = NumberField::make(norm);
        const FieldElement gamma = FieldElement::generator(L);
        // g(w) = fhat(gamma - k*w, w) in L[w], fhat the bivariate lift of f.
        FPoly g;
        const FPoly lin{gamma, FieldElement(Rational(-k)).promoted(L)};
        for (std::size_t i = f.size(); i-- > 0;) {
            FPoly ci(static_cast<std::size_t>(d));
            const auto cs = f[i].promoted(Kf).coords();
            for (std::size_t j = 0; j < cs.size(); ++j) ci[j] = FieldElement(cs[j]).promoted(L);
            normalize(ci);
            g = add(mul(g, lin), ci);
        }
        FPoly mw(static_cast<std::size_t>(d) + 1);
        for (int j = 0; j <= d; ++j)
            mw[static_cast<std::size_t>(j)] =
                FieldElement(qp::coeff(Kf->min_poly(), static_cast<std::size_t>(j))).promoted(L);
        FPoly h = gcd_monic(mw, g);
        if (degree(h) != 1) continue;
        const FieldElement theta_L = -h[0];
        if (!eval(mw, theta_L).is_zero())
            throw Error("recovered generator fails its minimal polynomial");
        // beta = gamma - k*theta_L must be a root of the mapped polynomial.
        const FieldElement beta = gamma - FieldElement(Rational(k)).promoted(L) * theta_L;
        FieldEmbedding emb{Kf, L, theta_L, beta};
        FPoly f_mapped(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) f_mapped[i] = emb.map(f[i].promoted(Kf));
        if (!eval(f_mapped, emb.root).is_zero())
            throw Error("adjoined root fails the defining polynomial");
        return emb;
    }
    throw PrimitiveElementSearchFailed("no primitive element found while extending the field");
}

/**
 * Root of f in K if one exists (identity embedding); otherwise extend by the
 * canonically first irreducible factor.  f need not be squarefree.
 */
inline FieldEmbedding adjoin_root(const FieldPtr& K, const FPoly& f) {
    const FieldPtr Kf = K ? K : NumberField::rationals();
    auto factors = factor_over_field(monic(f), Kf);
    if (factors.empty()) throw Error("adjoin_root needs a nonconstant polynomial");
    for (const auto& [g, mult] : factors) {
        (void)mult;
        if (degree(g) == 1)
            return {Kf, Kf, FieldElement::generator(Kf), (-g[0]).promoted(Kf)};
    }
    return extend_field(Kf, factors.front().first);
}

/** base^e mod m over the coefficient field (binary exponentiation). */
inline FPoly powmod(FPoly base, const Integer& e, const FPoly& m) {
    FPoly r{FieldElement(Rational(1))};
    if (e < 0) throw Error("powmod exponent must be nonnegative");
    if (e == 0) return r;
    base = divmod(base, m).second;
    const mp_bitcnt_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (mp_bitcnt_t i = bits; i-- > 0;) {
        r = divmod(mul(r, r), m).second;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = divmod(mul(r, base), m).second;
    }
    return r;
}

/** Multiplicative order of u when u is a root of unity; 0 otherwise. */
inline long root_of_unity_order(const FieldElement& u) {
    if (u.is_zero()) return 0;
    const long d = u.field() ? u.field()->degree() : 1;
    const long bound = 2 * d * d + 2;
    FieldElement acc(Rational(1));
    for (long n = 1; n <= bound; ++n) {
        acc *= u;
        if (acc.is_one()) return n;
    }
    return 0;
}

}  // namespace wdwalk::kp
