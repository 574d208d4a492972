#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/rational.hpp"

/*
 * Dense univariate polynomials over Q, coefficients lowest-degree first.
 * The zero polynomial is the empty vector.  Includes complete rational
 * factorization: Yun squarefree decomposition, then per squarefree part a
 * small-prime modular factorization (distinct-degree + Cantor-Zassenhaus
 * splitting), quadratic Hensel lifting up to a Landau-Mignotte style bound,
 * and subset recombination.  Everything is exact.
 */

namespace wdwalk::qp {

using QPoly = std::vector<Rational>;
using ZPoly = std::vector<Integer>;

inline void normalize(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline bool is_zero(const QPoly& p) { return p.empty(); }

inline Rational leading(const QPoly& p) {
    if (p.empty()) throw Error("leading coefficient of zero polynomial");
    return p.back();
}

inline Rational coeff(const QPoly& p, std::size_t i) {
    return i < p.size() ? p[i] : Rational(0);
}

inline QPoly add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(a, i) + coeff(b, i);
    normalize(r);
    return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(a, i) - coeff(b, i);
    normalize(r);
    return r;
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    normalize(r);
    return r;
}

inline QPoly scale(const QPoly& a, const Rational& c) {
    if (c == 0) return {};
    QPoly r(a);
    for (auto& x : r) x *= c;
    return r;
}

inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    QPoly rem(a), quo;
    if (a.size() < b.size()) return {quo, rem};
    quo.assign(a.size() - b.size() + 1, Rational(0));
    const Rational inv_lead = 1 / b.back();
    for (int k = static_cast<int>(rem.size()) - static_cast<int>(b.size()); k >= 0; --k) {
        Rational c = rem[k + b.size() - 1] * inv_lead;
        c.canonicalize();
        quo[k] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
    }
    rem.resize(b.size() - 1);
    normalize(rem);
    normalize(quo);
    return {quo, rem};
}

inline QPoly monic(const QPoly& p) {
    if (p.empty()) return p;
    return scale(p, 1 / p.back());
}

inline QPoly derivative(const QPoly& p) {
    if (p.size() < 2) return {};
    QPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rational(static_cast<long>(i));
    normalize(r);
    return r;
}

inline Rational eval(const QPoly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    acc.canonicalize();
    return acc;
}

inline QPoly gcd_monic(QPoly a, QPoly b) {
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/** Extended gcd: returns (g, u, v), g monic, with u*a + v*b = g. */
inline std::array<QPoly, 3> xgcd(const QPoly& a, const QPoly& b) {
    QPoly r0 = a, r1 = b;
    QPoly u0{Rational(1)}, u1, v0, v1{Rational(1)};
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1);
        QPoly u2 = sub(u0, mul(q, u1)), v2 = sub(v0, mul(q, v1));
        r0 = std::move(r1);
        r1 = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r0.empty()) return {r0, u0, v0};
    const Rational c = 1 / r0.back();
    return {scale(r0, c), scale(u0, c), scale(v0, c)};
}

inline QPoly squarefree_part(const QPoly& p) {
    if (degree(p) < 1) return monic(p);
    auto g = gcd_monic(p, derivative(p));
    return monic(divmod(p, g).first);
}

inline bool is_squarefree(const QPoly& p) {
    if (degree(p) < 1) return true;
    return degree(gcd_monic(p, derivative(p))) == 0;
}

/** Yun's algorithm: returns (monic squarefree factor, multiplicity) pairs. */
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& p) {
    std::vector<std::pair<QPoly, int>> out;
    if (degree(p) < 1) return out;
    QPoly f = monic(p);
    QPoly fp = derivative(f);
    QPoly a = gcd_monic(f, fp);
    QPoly b = divmod(f, a).first;
    QPoly c = sub(divmod(fp, a).first, derivative(b));
    int i = 1;
    while (degree(b) > 0) {
        QPoly d = gcd_monic(b, c);
        if (degree(d) > 0) out.emplace_back(d, i);
        b = divmod(b, d).first;
        c = sub(divmod(c, d).first, derivative(b));
        ++i;
    }
    return out;
}

/* ---- integer-polynomial helpers ----------------------------------------- */

inline void z_normalize(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

/** Clear denominators and content; leading coefficient made positive. */
inline ZPoly to_primitive_z(const QPoly& p) {
    if (p.empty()) return {};
    Integer den_lcm(1);
    for (const auto& c : p)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    ZPoly z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rational s = p[i] * Rational(den_lcm);
        s.canonicalize();
        z[i] = s.get_num();
    }
    Integer content(0);
    for (const auto& c : z) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content != 0)
        for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
    if (!z.empty() && z.back() < 0)
        for (auto& c : z) c = -c;
    return z;
}

inline QPoly z_to_q(const ZPoly& z) {
    QPoly q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = Rational(z[i]);
    return q;
}

inline ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    z_normalize(r);
    return r;
}

/* ---- arithmetic mod a small odd prime ------------------------------------ */

namespace fp {

using Poly = std::vector<std::uint64_t>;

inline void normalize(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_scalar(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    return powmod_scalar(a % p, p - 2, p);  // p prime
}

inline Poly from_z(const ZPoly& z, std::uint64_t p) {
    Poly r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        Integer m = z[i] % Integer(static_cast<unsigned long>(p));
        if (m < 0) m += Integer(static_cast<unsigned long>(p));
        r[i] = m.get_ui();
    }
    normalize(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = (i < a.size() ? a[i] : 0) + p - (i < b.size() ? b[i] : 0);
        r[i] = x >= p ? x - p : x;
    }
    normalize(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint64_t>(
                (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p);
    }
    normalize(r);
    return r;
}

inline Poly make_monic(const Poly& a, std::uint64_t p) {
    if (a.empty() || a.back() == 1) return a;
    Poly r(a);
    const std::uint64_t inv = invmod(a.back(), p);
    for (auto& c : r) c = mulmod(c, inv, p);
    return r;
}

inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p) {
    if (b.empty()) throw DivisionByZero("mod-p division by zero");
    Poly rem(a), quo;
    if (a.size() < b.size()) return {quo, rem};
    quo.assign(a.size() - b.size() + 1, 0);
    const std::uint64_t inv = invmod(b.back(), p);
    for (int k = static_cast<int>(rem.size()) - static_cast<int>(b.size()); k >= 0; --k) {
        std::uint64_t c = mulmod(rem[k + b.size() - 1], inv, p);
        quo[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            rem[k + j] = (rem[k + j] + p - mulmod(c, b[j], p)) % p;
    }
    rem.resize(b.size() - 1);
    normalize(rem);
    normalize(quo);
    return {quo, rem};
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    while (!b.empty()) {
        auto r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

inline Poly derivative(const Poly& a, std::uint64_t p) {
    if (a.size() < 2) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
    normalize(r);
    return r;
}

inline Poly powmod(Poly base, const Integer& e, const Poly& mod, std::uint64_t p) {
    Poly r{1};
    base = divmod(base, mod, p).second;
    const mp_bitcnt_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (mp_bitcnt_t i = bits; i-- > 0;) {
        r = divmod(mul(r, r, p), mod, p).second;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = divmod(mul(r, base, p), mod, p).second;
    }
    return r;
}

/** Distinct-degree decomposition of a monic squarefree polynomial. */
inline std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f, std::uint64_t p) {
    std::vector<std::pair<Poly, int>> out;
    Poly f0 = f;
    Poly w = divmod(Poly{0, 1}, f0, p).second;  // x mod f
    int d = 0;
    while (deg(f0) > 0 && 2 * (d + 1) <= deg(f0)) {
        ++d;
        w = powmod(w, Integer(static_cast<unsigned long>(p)), f0, p);
        Poly g = gcd(sub(w, Poly{0, 1}, p), f0, p);
        if (deg(g) > 0) {
            out.emplace_back(g, d);
            f0 = divmod(f0, g, p).first;
            w = divmod(w, f0, p).second;
        }
    }
    if (deg(f0) > 0) out.emplace_back(f0, deg(f0));
    return out;
}

/** Cantor-Zassenhaus equal-degree splitting (p odd). */
inline void equal_degree(const Poly& g, int d, std::uint64_t p, std::mt19937_64& rng,
                         std::vector<Poly>& out) {
    if (deg(g) == d) {
        out.push_back(make_monic(g, p));
        return;
    }
    Integer pd(1);
    for (int i = 0; i < d; ++i) pd *= Integer(static_cast<unsigned long>(p));
    const Integer half = (pd - 1) / 2;
    for (;;) {
        Poly a(static_cast<std::size_t>(deg(g)), 0);
        for (auto& c : a) c = rng() % p;
        normalize(a);
        if (deg(a) < 1) continue;
        Poly c0 = gcd(a, g, p);
        if (deg(c0) > 0 && deg(c0) < deg(g)) {
            equal_degree(c0, d, p, rng, out);
            equal_degree(divmod(g, c0, p).first, d, p, rng, out);
            return;
        }
        Poly b = powmod(a, half, g, p);
        Poly c = gcd(sub(b, Poly{1}, p), g, p);
        if (deg(c) > 0 && deg(c) < deg(g)) {
            equal_degree(c, d, p, rng, out);
            equal_degree(divmod(g, c, p).first, d, p, rng, out);
            return;
        }
    }
}

/** Monic irreducible factors of a monic squarefree polynomial, sorted. */
inline std::vector<Poly> factor_squarefree(const Poly& f, std::uint64_t p) {
    std::vector<Poly> out;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (p * 1315423911ULL) ^ f.size());
    for (const auto& [prod, d] : distinct_degree(f, p)) equal_degree(prod, d, p, rng, out);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

}  // namespace fp

/* ---- Hensel lifting ------------------------------------------------------ */

namespace hensel {

inline ZPoly reduce(const ZPoly& a, const Integer& m) {
    ZPoly r(a);
    for (auto& c : r) {
        c %= m;
        if (c < 0) c += m;
    }
    z_normalize(r);
    return r;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = (i < a.size() ? a[i] : Integer(0)) + (i < b.size() ? b[i] : Integer(0));
    return reduce(r, m);
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = (i < a.size() ? a[i] : Integer(0)) - (i < b.size() ? b[i] : Integer(0));
    return reduce(r, m);
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const Integer& m) {
    return reduce(z_mul(a, b), m);
}

/** Division with remainder by a *monic* divisor, coefficients mod m. */
inline std::pair<ZPoly, ZPoly> divmod_monic(const ZPoly& a, const ZPoly& b, const Integer& m) {
    if (b.empty() || b.back() != 1) throw Error("hensel division requires a monic divisor");
    ZPoly rem = reduce(a, m), quo;
    if (rem.size() < b.size()) return {quo, rem};
    quo.assign(rem.size() - b.size() + 1, Integer(0));
    for (int k = static_cast<int>(rem.size()) - static_cast<int>(b.size()); k >= 0; --k) {
        Integer c = rem[k + b.size() - 1] % m;
        if (c < 0) c += m;
        quo[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            rem[k + j] = (rem[k + j] - c * b[j]) % m;
            if (rem[k + j] < 0) rem[k + j] += m;
        }
    }
    rem.resize(b.size() - 1);
    z_normalize(rem);
    z_normalize(quo);
    return {quo, rem};
}

struct BezoutPair {
    ZPoly g, h, s, t;  // f = g*h (mod m), s*g + t*h = 1 (mod m), h monic
};

/**
 * One quadratic step: a factorization and Bezout identity valid mod m are
 * lifted to mod m^2 (von zur Gathen & Gerhard style).
 */
inline BezoutPair step(const ZPoly& f, const BezoutPair& in, const Integer& m) {
    const Integer m2 = m * m;
    const ZPoly& g = in.g;
    const ZPoly& h = in.h;
    const ZPoly& s = in.s;
    const ZPoly& t = in.t;
    ZPoly e = sub(reduce(f, m2), mul(g, h, m2), m2);
    auto [q, r] = divmod_monic(mul(s, e, m2), h, m2);
    ZPoly g1 = add(g, add(mul(t, e, m2), mul(q, g, m2), m2), m2);
    ZPoly h1 = add(h, r, m2);
    ZPoly b = sub(add(mul(s, g1, m2), mul(t, h1, m2), m2), ZPoly{Integer(1)}, m2);
    auto [c, d] = divmod_monic(mul(s, b, m2), h1, m2);
    ZPoly s1 = sub(s, d, m2);
    ZPoly t1 = sub(sub(t, mul(t, b, m2), m2), mul(c, g1, m2), m2);
    if (h1.empty() || h1.back() != 1 || h1.size() != h.size())
        throw Error("hensel step lost monic structure");
    return {g1, h1, s1, t1};
}

}  // namespace hensel

/* ---- Zassenhaus factorization over Z ------------------------------------- */

namespace detail {

inline std::uint64_t next_odd_prime(std::uint64_t p) {
    Integer z(static_cast<unsigned long>(p));
    mpz_nextprime(z.get_mpz_t(), z.get_mpz_t());
    return z.get_ui();
}

inline Integer balance(const Integer& c, const Integer& m) {
    Integer r = c % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

inline ZPoly balance_poly(const ZPoly& a, const Integer& m) {
    ZPoly r(a);
    for (auto& c : r) c = balance(c, m);
    z_normalize(r);
    return r;
}

inline ZPoly primitive_part(ZPoly a) {
    Integer content(0);
    for (const auto& c : a) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content != 0)
        for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
    if (!a.empty() && a.back() < 0)
        for (auto& c : a) c = -c;
    return a;
}

/** Lift the mod-p factorization lc(f)*prod(h_i) of f to mod `target`. */
inline void lift_tree(const ZPoly& f, const std::vector<fp::Poly>& leaves, std::size_t lo,
                      std::size_t hi, std::uint64_t p, const Integer& target,
                      std::vector<ZPoly>& out, bool leftmost) {
    if (hi - lo == 1) {
        out.push_back(hensel::reduce(f, target));
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    // Mod-p products for the two halves; the leftmost branch carries lc(f).
    fp::Poly left{1};
    if (leftmost) {
        Integer lc = f.back() % Integer(static_cast<unsigned long>(p));
        if (lc < 0) lc += Integer(static_cast<unsigned long>(p));
        left = fp::Poly{lc.get_ui()};
    }
    for (std::size_t i = lo; i < mid; ++i) left = fp::mul(left, leaves[i], p);
    fp::Poly right{1};
    for (std::size_t i = mid; i < hi; ++i) right = fp::mul(right, leaves[i], p);

    // Bezout identity mod p via extended Euclid.
    fp::Poly r0 = left, r1 = right;
    fp::Poly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        auto [q, r] = fp::divmod(r0, r1, p);
        fp::Poly s2 = fp::sub(s0, fp::mul(q, s1, p), p);
        fp::Poly t2 = fp::sub(t0, fp::mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (fp::deg(r0) != 0) throw Error("modular factors are not coprime");
    const std::uint64_t inv = fp::invmod(r0[0], p);
    for (auto& c : s0) c = fp::mulmod(c, inv, p);
    for (auto& c : t0) c = fp::mulmod(c, inv, p);

    auto to_z = [](const fp::Poly& a) {
        ZPoly r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = Integer(static_cast<unsigned long>(a[i]));
        return r;
    };
    hensel::BezoutPair pair{to_z(left), to_z(right), to_z(s0), to_z(t0)};
    Integer m(static_cast<unsigned long>(p));
    while (m < target) {
        pair = hensel::step(f, pair, m);
        m *= m;
    }
    lift_tree(hensel::reduce(pair.g, target), leaves, lo, mid, p, target, out, leftmost);
    lift_tree(hensel::reduce(pair.h, target), leaves, mid, hi, p, target, out, false);
}

/** Exact division test over Q; returns the quotient when it divides. */
inline bool try_divide(const ZPoly& f, const ZPoly& g, ZPoly& quotient) {
    auto [q, r] = divmod(z_to_q(f), z_to_q(g));
    if (!r.empty()) return false;
    quotient = to_primitive_z(q);
    // f and g primitive => quotient primitive with matching sign handled above.
    return true;
}

/** Irreducible primitive factors of a primitive squarefree f, deg f >= 1. */
inline std::vector<ZPoly> zassenhaus(ZPoly f) {
    std::vector<ZPoly> out;
    if (degree(z_to_q(f)) == 1) {
        out.push_back(f);
        return out;
    }
    // Prime selection: p odd, lc(f) nonzero mod p, f squarefree mod p.
    std::uint64_t p = 3;
    fp::Poly fbar;
    for (;; p = next_odd_prime(p)) {
        if (f.back() % Integer(static_cast<unsigned long>(p)) == 0) continue;
        fbar = fp::from_z(f, p);
        if (fp::deg(fbar) != static_cast<int>(f.size()) - 1) continue;
        fp::Poly fm = fp::make_monic(fbar, p);
        if (fp::deg(fp::gcd(fm, fp::derivative(fm, p), p)) == 0) {
            fbar = fm;
            break;
        }
    }
    std::vector<fp::Poly> leaves = fp::factor_squarefree(fbar, p);
    if (leaves.size() == 1) {
        out.push_back(f);
        return out;
    }

    // Lift bound: coefficients of lc(f) * (any monic rational factor) are
    // bounded by 2^deg * |f|_2 * |lc(f)|; lift beyond twice that.
    Integer norm2(0);
    for (const auto& c : f) norm2 += c * c;
    Integer sq;
    mpz_sqrt(sq.get_mpz_t(), norm2.get_mpz_t());
    sq += 1;
    Integer bound = sq * abs(f.back());
    bound <<= (f.size());  // 2^(deg+1) margin
    Integer target(static_cast<unsigned long>(p));
    while (target <= 2 * bound) target *= Integer(static_cast<unsigned long>(p));

    std::vector<ZPoly> lifted;
    lift_tree(hensel::reduce(f, target), leaves, 0, leaves.size(), p, target, lifted, true);
    // Make every lifted factor monic mod target (the leftmost carries lc).
    for (auto& h : lifted) {
        if (h.empty()) throw Error("hensel lifting produced a zero factor");
        Integer lc = h.back(), inv;
        if (lc != 1) {
            if (mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t()) == 0)
                throw Error("hensel factor with non-invertible leading coefficient");
            for (auto& c : h) c = ((c * inv) % target + target) % target;
        }
    }

    // Subset recombination, ascending subset size, deterministic order.
    std::vector<std::size_t> live(lifted.size());
    for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
    ZPoly rem_f = f;
    std::size_t cs = 1;
    while (2 * cs <= live.size()) {
        bool found = false;
        std::vector<std::size_t> comb(cs);
        for (std::size_t i = 0; i < cs; ++i) comb[i] = i;
        for (;;) {
            ZPoly cand{rem_f.back()};
            for (std::size_t i : comb) cand = hensel::mul(cand, lifted[live[i]], target);
            cand = primitive_part(balance_poly(cand, target));
            ZPoly quotient;
            if (try_divide(rem_f, cand, quotient)) {
                out.push_back(cand);
                rem_f = quotient;
                std::vector<std::size_t> next_live;
                for (std::size_t i = 0; i < live.size(); ++i)
                    if (std::find(comb.begin(), comb.end(), i) == comb.end())
                        next_live.push_back(live[i]);
                live = std::move(next_live);
                found = true;
                break;
            }
            // next lexicographic combination
            std::size_t k = cs;
            while (k > 0 && comb[k - 1] == live.size() - cs + k - 1) --k;
            if (k == 0) break;
            ++comb[k - 1];
            for (std::size_t j = k; j < cs; ++j) comb[j] = comb[j - 1] + 1;
        }
        if (!found) ++cs;
    }
    if (!live.empty() || static_cast<int>(rem_f.size()) > 1) {
        if (static_cast<int>(rem_f.size()) - 1 >= 1) out.push_back(primitive_part(rem_f));
    }
    return out;
}

}  // namespace detail

/**
 * Full factorization over Q: monic irreducible factors with multiplicity,
 * sorted by degree then coefficients.  The leading coefficient of p is not
 * part of the result (factors are monic).
 */
inline std::vector<std::pair<QPoly, int>> factor(const QPoly& p_in) {
    if (is_zero(p_in)) throw Error("cannot factor the zero polynomial");
    std::vector<std::pair<QPoly, int>> out;
    QPoly p = p_in;
    // Powers of x first.
    int xmult = 0;
    while (!p.empty() && p.front() == 0) {
        p.erase(p.begin());
        ++xmult;
    }
    if (xmult > 0) out.emplace_back(QPoly{Rational(0), Rational(1)}, xmult);
    if (degree(p) >= 1) {
        for (const auto& [sf, mult] : squarefree_decomposition(p)) {
            ZPoly z = to_primitive_z(sf);
            for (const auto& factor_z : detail::zassenhaus(z))
                out.emplace_back(monic(z_to_q(factor_z)), mult);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        for (std::size_t i = a.first.size(); i-- > 0;)
            if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
        return a.second < b.second;
    });
    return out;
}

inline bool is_irreducible(const QPoly& p) {
    if (degree(p) < 1) return false;
    if (degree(p) == 1) return true;
    auto fs = factor(p);
    return fs.size() == 1 && fs.front().second == 1;
}

/** Distinct integer roots of p (no multiplicities), ascending. */
inline std::vector<long> integer_roots(const QPoly& p) {
    std::vector<long> roots;
    if (degree(p) < 1) return roots;
    for (const auto& [f, mult] : factor(p)) {
        (void)mult;
        if (degree(f) != 1) continue;
        Rational r = -f[0];  // monic linear factor x + f0
        r.canonicalize();
        if (rational_is_integer(r)) roots.push_back(rational_to_long(r));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/** The k-th cyclotomic polynomial (memoized). */
inline QPoly cyclotomic(long k) {
    static std::map<long, QPoly> cache;
    if (k < 1) throw Error("cyclotomic index must be positive");
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    QPoly xk_minus_1(static_cast<std::size_t>(k) + 1, Rational(0));
    xk_minus_1[0] = -1;
    xk_minus_1.back() = 1;
    QPoly result = xk_minus_1;
    for (long d = 1; d < k; ++d)
        if (k % d == 0) result = divmod(result, cyclotomic(d)).first;
    cache[k] = result;
    return result;
}

/* ---- resultants and interpolation ---------------------------------------- */

/**
 * Resultant via the Sylvester matrix with *declared* degrees (coefficients
 * beyond the actual degree read as zero).  When a is monic of its declared
 * degree this equals the true resultant even if b's declared degree overshoots.
 */
inline Rational sylvester_resultant(const QPoly& a, int deg_a, const QPoly& b, int deg_b) {
    if (deg_a < degree(a) || deg_b < degree(b)) throw Error("declared degree below actual");
    if (deg_a < 0 || deg_b < 0) throw Error("resultant of zero polynomial");
    const int n = deg_a + deg_b;
    if (n == 0) return Rational(1);
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (int row = 0; row < deg_b; ++row)
        for (int j = 0; j <= deg_a; ++j) m[row][row + deg_a - j] = coeff(a, j);
    for (int row = 0; row < deg_a; ++row)
        for (int j = 0; j <= deg_b; ++j) m[deg_b + row][row + deg_b - j] = coeff(b, j);
    // Gaussian elimination determinant.
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (m[row][col] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        const Rational inv = 1 / m[col][col];
        for (int row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            const Rational factor = m[row][col] * inv;
            for (int j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
        }
    }
    det.canonicalize();
    return det;
}

/** Unique polynomial of degree < xs.size() through the given points. */
inline QPoly lagrange_interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    if (xs.size() != ys.size()) throw Error("interpolation point count mismatch");
    QPoly acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        QPoly basis{Rational(1)};
        Rational denom(1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            basis = mul(basis, QPoly{-xs[j], Rational(1)});
            denom *= xs[i] - xs[j];
        }
        if (denom == 0) throw Error("interpolation nodes must be distinct");
        acc = add(acc, scale(basis, ys[i] / denom));
    }
    return acc;
}

}  // namespace wdwalk::qp
