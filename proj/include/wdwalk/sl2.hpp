#pragma once

#include <map>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/group.hpp"
#include "wdwalk/matrix.hpp"

/*
 * Jacobson-Morozov sl2-triples inside a designated subalgebra, cocharacters
 * represented by integer weights and spectral projectors, weight gradings,
 * and lowest-weight splittings.
 */

namespace wdwalk {

struct SL2Triple {
    Matrix e, h, f;
};

inline void verify_sl2_relations(const SL2Triple& t) {
    const FieldElement two(Rational(2));
    if (!(bracket(t.h, t.e) == two * t.e)) throw Error("sl2 relation [h,e] = 2e fails");
    if (!(bracket(t.e, t.f) == t.h)) throw Error("sl2 relation [e,f] = h fails");
    if (!(bracket(t.h, t.f) == -(two * t.f))) throw Error("sl2 relation [h,f] = -2f fails");
}

/**
 * Standard two-stage construction: solve (ad e)^2 z = -2e and set h = [e,z],
 * then solve the stacked system [ad e; ad h + 2] f = [h; 0].  All solves run
 * in the coordinates of the given subalgebra, so the triple lies inside it.
 */
inline SL2Triple jacobson_morozov(const Matrix& e, const LieSubspace& v) {
    if (e.is_zero()) throw ZeroNilpotent("cannot build an sl2-triple through 0");
    if (!is_nilpotent(e)) throw NotNilpotent("sl2-triple requires a nilpotent element");
    const auto e_coords = coordinates_in(v, e);
    if (!e_coords) throw Error("nilpotent element must lie in the subalgebra");
    const Matrix ad_e = ad_operator_lie(e, v);
    Vec rhs(*e_coords);
    for (auto& c : rhs) c *= FieldElement(Rational(-2));
    const auto z = solve(ad_e * ad_e, rhs);
    if (!z) throw LinearSolveFailed("no solution of (ad e)^2 z = -2e in the subalgebra");
    const Matrix h = bracket(e, from_coordinates(v, *z));
    const auto h_coords = coordinates_in(v, h);
    if (!h_coords) throw LinearSolveFailed("h escaped the subalgebra");
    const Matrix ad_h = ad_operator_lie(h, v);
    const std::size_t dim = v.dim();
    const Matrix two_id = Matrix::scalar(dim, FieldElement(Rational(2)));
    Vec stacked_rhs(*h_coords);
    stacked_rhs.resize(2 * dim);
    const auto f_coords = solve(vcat(ad_e, ad_h + two_id), stacked_rhs);
    if (!f_coords) throw LinearSolveFailed("no f completing the sl2-triple in the subalgebra");
    SL2Triple t{e, h, from_coordinates(v, *f_coords)};
    verify_sl2_relations(t);
    if (!is_nilpotent(t.f)) throw Error("sl2 element f is not nilpotent");
    return t;
}

/**
 * sl2-triple through e whose h and f behave well under a semisimple adjoint
 * element g with Ad(g)e = alpha e: the returned triple satisfies Ad(g)h = h
 * and Ad(g)f = alpha^{-1} f, obtained by spectral projection of a raw triple.
 */
inline SL2Triple commuting_sl2(const Matrix& e, const Matrix& g, const FieldElement& alpha,
                               const LieSubspace& v) {
    const Matrix gi = inverse(g);
    if (!(g * e * gi == alpha * e))
        throw EigenvalueRelationBroken("Ad(g)e = alpha e does not hold");
    const SL2Triple raw = jacobson_morozov(e, v);
    const Matrix ad_g = ad_operator_group(g, v);
    if (!is_semisimple(ad_g))
        throw NotSemisimple("adjoint of g is not semisimple on the subalgebra");
    const auto h0_coords = coordinates_in(v, raw.h);
    const Matrix p_one = projector_or_zero(ad_g, FieldElement(Rational(1)));
    const Matrix h = from_coordinates(v, p_one * *h0_coords);
    if (!(bracket(h, e) == FieldElement(Rational(2)) * e))
        throw InvariantViolation("projected h lost the bracket relation with e");
    // Complete (e, h) to a triple, then project f to the alpha^{-1} eigenspace.
    const Matrix ad_e = ad_operator_lie(e, v);
    const Matrix ad_h = ad_operator_lie(h, v);
    const std::size_t dim = v.dim();
    Vec stacked_rhs(*coordinates_in(v, h));
    stacked_rhs.resize(2 * dim);
    const auto f0 = solve(vcat(ad_e, ad_h + Matrix::scalar(dim, FieldElement(Rational(2)))),
                          stacked_rhs);
    if (!f0) throw LinearSolveFailed("no f completes the projected h");
    const Matrix p_alpha = projector_or_zero(ad_g, alpha.inverse());
    const Matrix f = from_coordinates(v, p_alpha * *f0);
    SL2Triple t{e, h, f};
    verify_sl2_relations(t);
    if (!(g * h * gi == h)) throw InvariantViolation("projected h is not g-fixed");
    if (!(g * f * gi == alpha.inverse() * f))
        throw InvariantViolation("projected f is not an alpha^{-1} eigenvector");
    return t;
}

/**
 * A cocharacter presented spectrally: integer weights with orthogonal
 * idempotent projectors summing to the identity; evaluation at any
 * invertible scalar is sum of t^w P_w.
 */
struct Cocharacter {
    std::size_t n = 0;
    std::vector<long> weights;       // strictly increasing
    std::vector<Matrix> projectors;  // aligned with weights

    Matrix grading_element() const {
        Matrix h(n, n);
        for (std::size_t i = 0; i < weights.size(); ++i)
            h = h + FieldElement(Rational(weights[i])) * projectors[i];
        return h;
    }

    Matrix evaluate(const FieldElement& t) const {
        Matrix m(n, n);
        for (std::size_t i = 0; i < weights.size(); ++i)
            m = m + t.pow(weights[i]) * projectors[i];
        return m;
    }

    bool is_trivial() const { return weights.size() == 1 && weights[0] == 0; }
};

inline Cocharacter trivial_cocharacter(std::size_t n) {
    return {n, {0}, {Matrix::identity(n)}};
}

/**
 * Cocharacter with the given semisimple integer-spectrum grading element.
 * The weights are the matrix eigenvalues, the projectors its spectral ones.
 */
inline Cocharacter cocharacter_from_grading(const Matrix& h) {
    const kp::FPoly mu = minimal_polynomial(h);
    qp::QPoly mu_q;
    try {
        mu_q = kp::to_q(mu);
    } catch (const FieldMismatch&) {
        throw NonIntegralWeights("grading element has an irrational spectrum");
    }
    const auto roots = qp::integer_roots(mu_q);
    qp::QPoly reassembled{Rational(1)};
    for (long r : roots) reassembled = qp::mul(reassembled, qp::QPoly{Rational(-r), Rational(1)});
    if (reassembled != mu_q)
        throw NonIntegralWeights("grading element spectrum is not a set of integers");
    Cocharacter c;
    c.n = h.rows();
    for (long r : roots) {  // integer_roots returns ascending order
        c.weights.push_back(r);
        c.projectors.push_back(primary_projector(h, FieldElement(Rational(r))));
    }
    return c;
}

/**
 * Structural check that conjugation by lambda(t) scales e by t^shift as an
 * identity in t: every cross-block P_i e P_j with weight gap != shift is 0.
 */
inline bool cocharacter_scales(const Cocharacter& lambda, const Matrix& e, long shift) {
    for (std::size_t i = 0; i < lambda.weights.size(); ++i)
        for (std::size_t j = 0; j < lambda.weights.size(); ++j) {
            if (lambda.weights[i] - lambda.weights[j] == shift) continue;
            if (!(lambda.projectors[i] * e * lambda.projectors[j]).is_zero()) return false;
        }
    return true;
}

/** The cocharacter adapted to the triple's nilpotent: Ad(lambda(t))e = t^2 e. */
inline Cocharacter adapted_cocharacter(const SL2Triple& t) {
    const Cocharacter c = cocharacter_from_grading(t.h);
    if (!cocharacter_scales(c, t.e, 2))
        throw NotAdapted("cocharacter from h does not scale e by t^2");
    return c;
}

/** V = sum of V_n with [h, x] = n x on V_n; keys are the occurring weights. */
inline std::map<long, LieSubspace> weight_grading(const Cocharacter& lambda,
                                                  const LieSubspace& v) {
    std::map<long, LieSubspace> out;
    if (v.dim() == 0) return out;
    const Matrix ad_h = ad_operator_lie(lambda.grading_element(), v);
    const kp::FPoly mu = minimal_polynomial(ad_h);
    qp::QPoly mu_q;
    try {
        mu_q = kp::to_q(mu);
    } catch (const FieldMismatch&) {
        throw NonIntegralWeights("grading operator has an irrational spectrum");
    }
    const auto roots = qp::integer_roots(mu_q);
    qp::QPoly reassembled{Rational(1)};
    for (long r : roots) reassembled = qp::mul(reassembled, qp::QPoly{Rational(-r), Rational(1)});
    if (reassembled != mu_q)
        throw NonIntegralWeights("grading operator spectrum is not a set of integers");
    std::size_t total = 0;
    for (long w : roots) {
        const Matrix shifted = ad_h - Matrix::scalar(v.dim(), FieldElement(Rational(w)));
        const auto kern = kernel_basis(shifted);
        if (kern.empty()) continue;
        LieSubspace piece = subspace_from_coordinate_vectors(v, kern);
        total += piece.dim();
        out.emplace(w, std::move(piece));
    }
    if (total != v.dim())
        throw NotSemisimple("weight spaces do not exhaust the graded subspace");
    return out;
}

struct LowestWeightSplit {
    std::map<long, LieSubspace> grading;        // all weights
    std::map<long, LieSubspace> lowest_weight;  // n <= 0: ker((ad N)^(1-n)) on g_n
    std::map<long, LieSubspace> image_part;     // n <= 0: ad N (g_{n-2})
};

/**
 * For every nonpositive weight n: g_n = g'_n (+) g_n^{lw}, where g_n^{lw} is
 * the kernel of (ad N)^{1-n} on g_n and g'_n = ad N(g_{n-2}).  The direct-sum
 * property and the injectivity of ad N on g_{n-2} are verified exactly.
 */
inline LowestWeightSplit lowest_weight_split(const Matrix& n_mat, const Cocharacter& lambda,
                                             const LieSubspace& v) {
    if (!cocharacter_scales(lambda, n_mat, 2))
        throw NotAdapted("cocharacter is not adapted to the nilpotent");
    LowestWeightSplit s;
    s.grading = weight_grading(lambda, v);
    for (const auto& [w, piece] : s.grading) {
        if (w > 0) continue;
        // Kernel of (ad N)^(1-w) restricted to the weight-w piece.
        std::vector<Vec> cols;
        for (const auto& b : piece.basis) {
            Matrix img = b;
            for (long k = 0; k < 1 - w; ++k) img = bracket(n_mat, img);
            cols.push_back(flatten(img));
        }
        const auto kern = kernel_basis(matrix_from_columns(cols));
        std::vector<Matrix> lw_basis;
        for (const auto& c : kern) lw_basis.push_back(from_coordinates(piece, c));
        s.lowest_weight.emplace(w, make_lie_subspace(v.n, std::move(lw_basis)));
        // Image of ad N from the weight-(w-2) piece; ad N must be injective there.
        std::vector<Matrix> img_basis;
        const auto below = s.grading.find(w - 2);
        if (below != s.grading.end()) {
            for (const auto& b : below->second.basis) img_basis.push_back(bracket(n_mat, b));
            std::vector<Vec> img_cols;
            for (const auto& m : img_basis) img_cols.push_back(flatten(m));
            if (rank(matrix_from_columns(img_cols)) != below->second.dim())
                throw InvariantViolation("ad N is not injective on a negative weight space");
        }
        LieSubspace image_piece = make_lie_subspace(v.n, std::move(img_basis));
        // Direct sum check: dimensions add up and the union is independent.
        const auto& lw = s.lowest_weight.at(w);
        if (lw.dim() + image_piece.dim() != piece.dim())
            throw InvariantViolation("lowest-weight split dimensions do not add up");
        std::vector<Vec> all_cols;
        for (const auto& m : lw.basis) all_cols.push_back(flatten(m));
        for (const auto& m : image_piece.basis) all_cols.push_back(flatten(m));
        if (!all_cols.empty() &&
            rank(matrix_from_columns(all_cols)) != lw.dim() + image_piece.dim())
            throw InvariantViolation("lowest-weight split is not a direct sum");
        s.image_part.emplace(w, std::move(image_piece));
    }
    return s;
}

/**
 * Cocharacter with the same spectral projectors as a semisimple S whose
 * eigenvalues all lie in K, with an injective integer weight per eigenvalue
 * (eigenvalue 1, when present, gets weight 0).  Consequently a matrix is
 * fixed by every Ad(lambda(t)) exactly when it is fixed by Ad(S).
 */
inline Cocharacter eigenweight_cocharacter(const Matrix& s, const FieldPtr& K) {
    const kp::FPoly mu = minimal_polynomial(s);
    if (kp::degree(kp::gcd_monic(mu, kp::derivative(mu))) != 0)
        throw NotSemisimple("eigenweight cocharacter needs a semisimple matrix");
    const FieldPtr Kf = K ? K : NumberField::rationals();
    const auto roots = kp::roots_in_field(mu, Kf);
    if (static_cast<int>(roots.size()) != kp::degree(mu))
        throw InsufficientField("an eigenvalue lies outside the scenario field");
    const FieldElement one(Rational(1));
    Cocharacter c;
    c.n = s.rows();
    std::vector<FieldElement> others;
    bool has_one = false;
    for (const auto& r : roots) {
        if (r == one)
            has_one = true;
        else
            others.push_back(r);
    }
    // roots_in_field returns a deterministic lex order; keep it for weights.
    std::vector<std::pair<long, FieldElement>> assignment;
    if (has_one) assignment.emplace_back(0, one);
    long next = has_one ? 1 : 0;
    for (const auto& r : others) assignment.emplace_back(next++, r);
    std::sort(assignment.begin(), assignment.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [w, ev] : assignment) {
        c.weights.push_back(w);
        c.projectors.push_back(primary_projector(s, ev));
    }
    return c;
}

}  // namespace wdwalk
