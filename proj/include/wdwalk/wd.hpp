#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/group.hpp"
#include "wdwalk/jet.hpp"
#include "wdwalk/matrix.hpp"

/*
 * The central object: a triple (Phi, N, tau) over a number field K with an
 * integer q >= 2 and a designated square root of q in K, subject to
 *   (inertial invariance)      Ad(tau(g)) N = N for every g,
 *   (twisted commutation)      Ad(Phi) N = q^{-1} N,
 *   (Frobenius compatibility)  Ad(Phi) tau(g) = tau(sigma g) for every g,
 * together with its deformation complex and the order-one/order-two lifting
 * theory over dual numbers.
 */

namespace wdwalk {

struct WDTriple {
    GroupSpec group;
    InertialData inertial;
    Matrix phi;
    Matrix n_op;  // the nilpotent operator of the triple
    Rational q;
    FieldElement sqrt_q;

    FieldPtr field() const { return group.field; }
    std::size_t n() const { return group.n; }
};

inline FieldElement q_inverse(const WDTriple& d) {
    return FieldElement(Rational(1) / d.q);
}

/** The tau-invariants of the ambient Lie algebra; the complex lives here. */
inline LieSubspace invariant_subalgebra(const WDTriple& d) {
    return invariant_subalgebra(d.inertial, lie_algebra_basis(d.group));
}

/**
 * Full validation; returns a human-readable message per violated requirement
 * (empty means valid).  Structural requirements are checked before the three
 * relations, and every relation failure names the witnessing inertial element
 * or carries the offending residual.
 */
inline std::vector<std::string> validate_triple(const WDTriple& d) {
    std::vector<std::string> bad;
    const std::size_t n = d.n();
    if (d.phi.rows() != n || d.phi.cols() != n) {
        bad.push_back("Phi has the wrong shape");
        return bad;
    }
    if (d.n_op.rows() != n || d.n_op.cols() != n) {
        bad.push_back("N has the wrong shape");
        return bad;
    }
    if (!rational_is_integer(d.q) || d.q < Rational(2))
        bad.push_back("q must be an integer >= 2, got " + rational_to_string(d.q));
    if (!(FieldElement(d.sqrt_q) * d.sqrt_q == FieldElement(d.q)))
        bad.push_back("sqrt_q squared differs from q");
    if (auto why = group_membership_violation(d.group, d.phi))
        bad.push_back("Phi is not a group element: " + *why);
    for (std::size_t i = 0; i < d.inertial.size(); ++i)
        if (auto why = group_membership_violation(d.group, d.inertial.mats[i]))
            bad.push_back("tau(" + d.inertial.labels[i] + ") is not a group element: " + *why);
    if (!in_lie_algebra(d.group, d.n_op)) bad.push_back("N is not in the Lie algebra");
    if (!is_nilpotent(d.n_op)) bad.push_back("N is not nilpotent");
    if (!bad.empty()) return bad;  // relation checks assume the structure above

    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const Matrix& t = d.inertial.mats[i];
        if (!(t * d.n_op == d.n_op * t))
            bad.push_back("inertial invariance of N fails at " + d.inertial.labels[i]);
    }
    if (!(d.phi * d.n_op == q_inverse(d) * (d.n_op * d.phi)))
        bad.push_back("twisted commutation Ad(Phi)N = q^{-1}N fails");
    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const Matrix& t = d.inertial.mats[i];
        const Matrix& ts = d.inertial.mats[d.inertial.sigma[i]];
        if (!(d.phi * t == ts * d.phi))
            bad.push_back("Frobenius compatibility Ad(Phi)tau = tau(sigma .) fails at " +
                          d.inertial.labels[i]);
    }
    return bad;
}

inline bool is_valid(const WDTriple& d) { return validate_triple(d).empty(); }

inline void require_valid(const WDTriple& d) {
    const auto bad = validate_triple(d);
    if (bad.empty()) return;
    std::string msg = "invalid triple:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw InvalidTriple(msg);
}

/**
 * The two-step complex attached to a valid triple on gamma = dim of the
 * invariant subalgebra:
 *   d0(x)    = ((1 - Ad Phi) x, -[N, x])
 *   d1(a, b) = [N, a] - (q Ad Phi - 1) b
 * with h0 = ker d0, h1 = ker d1 / im d0, h2 = coker d1 (dimensions).
 */
struct CohomologyReport {
    std::size_t gamma = 0;
    std::size_t h0 = 0, h1 = 0, h2 = 0;
    Matrix d0, d1;          // 2gamma x gamma and gamma x 2gamma
    LieSubspace invariants;  // the coordinate domain of both maps
};

inline CohomologyReport deformation_complex(const WDTriple& d) {
    require_valid(d);
    CohomologyReport rep;
    rep.invariants = invariant_subalgebra(d);
    const std::size_t g = rep.invariants.dim();
    rep.gamma = g;
    const Matrix ad_phi = ad_operator_group(d.phi, rep.invariants);
    const Matrix ad_n = ad_operator_lie(d.n_op, rep.invariants);
    const Matrix id = Matrix::identity(g);
    rep.d0 = vcat(id - ad_phi, -ad_n);
    rep.d1 = hcat(ad_n, -(FieldElement(d.q) * ad_phi - id));
    if (!(rep.d1 * rep.d0).is_zero())
        throw InvariantViolation("d1 after d0 is nonzero on a valid triple");
    const std::size_t r0 = rank(rep.d0);
    const std::size_t r1 = rank(rep.d1);
    rep.h0 = g - r0;
    rep.h1 = 2 * g - r1 - r0;
    rep.h2 = g - r1;
    return rep;
}

inline bool is_unobstructed(const WDTriple& d) { return deformation_complex(d).h2 == 0; }

/** Order of sigma, checked against Phi: Ad(Phi^n) must fix every tau(g). */
inline long frobenius_exponent(const WDTriple& d) {
    const long n = d.inertial.sigma_order();
    const Matrix pn = mat_pow(d.phi, n);
    for (std::size_t i = 0; i < d.inertial.size(); ++i)
        if (!(pn * d.inertial.mats[i] == d.inertial.mats[i] * pn))
            throw VerificationFailed("Phi^" + std::to_string(n) +
                                     " does not centralize the inertial image");
    return n;
}

/** Basis of ker d1: the pairs (a, b) giving first-order lifts
 *  Phi(1 + eps a'), N + eps b  -- concretely exp(eps a) Phi and N + eps b. */
struct FirstOrderLifts {
    std::size_t dimension = 0;
    std::vector<std::pair<Matrix, Matrix>> basis;  // (a, b) pairs
    CohomologyReport report;
};

inline FirstOrderLifts first_order_lifts(const WDTriple& d) {
    FirstOrderLifts out;
    out.report = deformation_complex(d);
    const auto& v = out.report.invariants;
    const std::size_t g = out.report.gamma;
    for (const auto& k : kernel_basis(out.report.d1)) {
        Vec a(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(g));
        Vec b(k.begin() + static_cast<std::ptrdiff_t>(g), k.end());
        out.basis.emplace_back(from_coordinates(v, a), from_coordinates(v, b));
    }
    out.dimension = out.basis.size();
    return out;
}

/**
 * Literal dual-number check of the first-order conditions for the deformed
 * pair (exp(eps a) Phi, N + eps b) over K[eps]/(eps^2); a and b need not be
 * invariant or cocyclic -- that is exactly what this decides.
 */
inline bool first_order_holds(const WDTriple& d, const Matrix& a, const Matrix& b) {
    const std::size_t n = d.n();
    const MatrixJet phi_j =
        jet_mul(jet_exp(jet_eps(a, 1, 2)), jet_constant(d.phi, 2));
    const MatrixJet n_j = jet_add(jet_constant(d.n_op, 2), jet_eps(b, 1, 2));
    const MatrixJet phi_inv = jet_inverse(phi_j);
    if (!jet_is_zero(jet_sub(jet_mul(jet_mul(phi_j, n_j), phi_inv),
                             jet_scale(q_inverse(d), n_j))))
        return false;
    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const MatrixJet t = jet_constant(d.inertial.mats[i], 2);
        const MatrixJet ts = jet_constant(d.inertial.mats[d.inertial.sigma[i]], 2);
        if (!jet_is_zero(jet_sub(jet_mul(jet_mul(phi_j, t), phi_inv), ts))) return false;
        if (!jet_is_zero(jet_sub(jet_mul(jet_mul(t, n_j), jet_inverse(t)), n_j)))
            return false;
    }
    (void)n;
    return true;
}

/** Same over K[eps]/(eps^3) for (exp(eps a + eps^2 a2) Phi, N + eps b + eps^2 b2). */
inline bool second_order_holds(const WDTriple& d, const Matrix& a, const Matrix& b,
                               const Matrix& a2, const Matrix& b2) {
    const MatrixJet arg = jet_add(jet_eps(a, 1, 3), jet_eps(a2, 2, 3));
    const MatrixJet phi_j = jet_mul(jet_exp(arg), jet_constant(d.phi, 3));
    const MatrixJet n_j = jet_add(jet_add(jet_constant(d.n_op, 3), jet_eps(b, 1, 3)),
                                  jet_eps(b2, 2, 3));
    const MatrixJet phi_inv = jet_inverse(phi_j);
    if (!jet_is_zero(jet_sub(jet_mul(jet_mul(phi_j, n_j), phi_inv),
                             jet_scale(q_inverse(d), n_j))))
        return false;
    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const MatrixJet t = jet_constant(d.inertial.mats[i], 3);
        const MatrixJet ts = jet_constant(d.inertial.mats[d.inertial.sigma[i]], 3);
        if (!jet_is_zero(jet_sub(jet_mul(jet_mul(phi_j, t), phi_inv), ts))) return false;
        if (!jet_is_zero(jet_sub(jet_mul(jet_mul(t, n_j), jet_inverse(t)), n_j)))
            return false;
    }
    return true;
}

/**
 * Attempt to extend a first-order lift (a, b) to second order: solve
 * d1(a2, b2) = q [a, Ad(Phi) b] + (1/2) [a, [a, N]].  The right-hand side is
 * the quadratic obstruction; its class in coker d1 vanishes exactly when the
 * solve succeeds.
 */
struct SecondOrderExtension {
    bool solvable = false;
    Matrix a2, b2;          // valid when solvable
    Vec obstruction_coords;  // coordinates of the obstruction in the invariants
};

inline SecondOrderExtension second_order_extend(const WDTriple& d, const Matrix& a,
                                                const Matrix& b) {
    const CohomologyReport rep = deformation_complex(d);
    const auto& v = rep.invariants;
    const auto ca = coordinates_in(v, a);
    const auto cb = coordinates_in(v, b);
    if (!ca || !cb) throw NotACocycle("(a, b) is not an invariant pair");
    Vec pair_coords(*ca);
    pair_coords.insert(pair_coords.end(), cb->begin(), cb->end());
    bool in_kernel = true;
    for (std::size_t i = 0; i < rep.gamma && in_kernel; ++i) {
        FieldElement s;
        for (std::size_t j = 0; j < 2 * rep.gamma; ++j) s += rep.d1(i, j) * pair_coords[j];
        if (!s.is_zero()) in_kernel = false;
    }
    if (!in_kernel) throw NotACocycle("(a, b) does not satisfy the first-order equation");

    const Matrix ad_phi_b = d.phi * b * inverse(d.phi);
    const Matrix r = FieldElement(d.q) * bracket(a, ad_phi_b) +
                     FieldElement(Rational(1, 2)) * bracket(a, bracket(a, d.n_op));
    const auto rc = coordinates_in(v, r);
    if (!rc) throw InvariantViolation("quadratic obstruction left the invariants");
    SecondOrderExtension out;
    out.obstruction_coords = *rc;
    const auto x = solve(rep.d1, *rc);
    if (!x) return out;  // genuinely obstructed at this cocycle
    out.solvable = true;
    Vec xa(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(rep.gamma));
    Vec xb(x->begin() + static_cast<std::ptrdiff_t>(rep.gamma), x->end());
    out.a2 = from_coordinates(v, xa);
    out.b2 = from_coordinates(v, xb);
    return out;
}

}  // namespace wdwalk
