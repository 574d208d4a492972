#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/group.hpp"
#include "wdwalk/matrix.hpp"
#include "wdwalk/sl2.hpp"
#include "wdwalk/wd.hpp"

/*
 * The constructive unobstruction walk: starting from any valid triple,
 * produce a verified chain of one-parameter families inside the fiber
 * (N and tau fixed, Phi moving) that ends at a point with h^2 = 0.
 * Every move records enough witness data for an independent checker to
 * re-prove fiber membership by polynomial-identity sampling.
 */

namespace wdwalk {

enum class MoveKind { UnipotentLine, CocharScale, CocharInterpolation };

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::UnipotentLine: return "UnipotentLine";
        case MoveKind::CocharScale: return "CocharScale";
        case MoveKind::CocharInterpolation: return "CocharInterpolation";
    }
    return "?";
}

/**
 * One one-parameter family of fiber points.  The family map is
 *   UnipotentLine:        F(t) = base * exp(t Y) * tail
 *   CocharScale:          F(t) = base * lambda(t)
 *   CocharInterpolation:  F(t) = base * lambda(r t) * lambda_prime(t^{-1}),
 * where r = 1/sqrt(q) comes from the ambient triple.  The move runs from
 * t_start (where F = start_phi) to t_end (where F = end_phi).
 */
struct WalkMove {
    MoveKind kind = MoveKind::UnipotentLine;
    Matrix start_phi, end_phi;
    FieldElement t_start, t_end;
    Matrix base, tail, y;
    Cocharacter lambda, lambda_prime;
};

inline Matrix move_family_at(const WalkMove& m, const FieldElement& t,
                             const FieldElement& inv_sqrt_q) {
    switch (m.kind) {
        case MoveKind::UnipotentLine:
            return m.base * exp_nilpotent(t * m.y) * m.tail;
        case MoveKind::CocharScale:
            return m.base * m.lambda.evaluate(t);
        case MoveKind::CocharInterpolation:
            return m.base * m.lambda.evaluate(inv_sqrt_q * t) *
                   m.lambda_prime.evaluate(t.inverse());
    }
    throw Error("unknown move kind");
}

struct WalkCertificate {
    WDTriple initial;
    std::vector<WalkMove> moves;
    Matrix final_phi;
    CohomologyReport final_report;
};

struct WalkOptions {
    std::vector<long> t_candidates = {2, 3, 5, 7, 11, 13};
    std::size_t max_steps = 64;
};

inline WDTriple with_phi(const WDTriple& d, const Matrix& phi) {
    WDTriple out = d;
    out.phi = phi;
    return out;
}

namespace walk_detail {

inline void require_commutes_with_inertia(const Matrix& x, const InertialData& inertial,
                                          const std::string& who) {
    for (std::size_t i = 0; i < inertial.size(); ++i)
        if (!(x * inertial.mats[i] == inertial.mats[i] * x))
            throw InvariantViolation(who + " does not centralize the inertial image");
}

inline std::size_t kernel_dim_q_ad(const WDTriple& d, const Matrix& phi,
                                   const LieSubspace& v) {
    const Matrix a = ad_operator_group(phi, v);
    const Matrix op = FieldElement(d.q) * a - Matrix::identity(v.dim());
    return v.dim() - rank(op);
}

}  // namespace walk_detail

/**
 * Strip the unipotent part of Phi along the fiber (N = 0 case): with
 * Phi = Phi_s Phi_u and Y = log Phi_u, the line Phi_s exp(tY) stays in the
 * fiber because Y centralizes the inertial image.  Returns the semisimple
 * endpoint and the move from t=1 (Phi) to t=0 (Phi_s); the move is trivial
 * when Phi is already semisimple.
 */
inline std::pair<Matrix, WalkMove> semisimplify_in_fiber(const WDTriple& d) {
    require_valid(d);
    if (!d.n_op.is_zero()) throw Error("semisimplify_in_fiber expects N = 0");
    const auto [s, u] = jordan_chevalley(d.phi);
    WalkMove m;
    m.kind = MoveKind::UnipotentLine;
    m.start_phi = d.phi;
    m.end_phi = s;
    m.t_start = FieldElement(Rational(1));
    m.t_end = FieldElement(Rational(0));
    m.base = s;
    m.tail = Matrix::identity(d.n());
    m.y = log_unipotent(u);
    walk_detail::require_commutes_with_inertia(m.y, d.inertial, "log of the unipotent part");
    // The paper-level power argument, checked directly at the exponent.
    const Matrix un = mat_pow(u, frobenius_exponent(d));
    walk_detail::require_commutes_with_inertia(un, d.inertial, "Phi_u^n");
    return {s, m};
}

namespace walk_detail {

inline void finalize(WalkCertificate& cert, const Matrix& phi, CohomologyReport rep) {
    cert.final_phi = phi;
    cert.final_report = std::move(rep);
}

inline void push_nontrivial(std::vector<WalkMove>& moves, WalkMove m) {
    if (m.start_phi == m.end_phi) return;
    moves.push_back(std::move(m));
}

}  // namespace walk_detail

/**
 * N = 0: h^2 = dim ker(q Ad Phi - 1) on the invariants.  Repeatedly pick a
 * kernel vector N' (always nilpotent), pass to the semisimple point, scale by
 * the adapted cocharacter of an sl2-triple through N' commuting with Phi, and
 * accept the first candidate t that strictly drops the kernel dimension.
 */
inline WalkCertificate case1_walk(const WDTriple& d, const WalkOptions& opt = {}) {
    require_valid(d);
    if (!d.n_op.is_zero()) throw Error("case1_walk expects N = 0");
    WalkCertificate cert;
    cert.initial = d;
    Matrix phi = d.phi;
    const FieldElement qinv = q_inverse(d);
    for (std::size_t step = 0; step <= opt.max_steps; ++step) {
        const CohomologyReport rep = deformation_complex(with_phi(d, phi));
        if (rep.h2 == 0) {
            walk_detail::finalize(cert, phi, rep);
            return cert;
        }
        if (step == opt.max_steps) break;
        const LieSubspace& v = rep.invariants;
        const Matrix a_op = ad_operator_group(phi, v);
        const auto kern =
            kernel_basis(FieldElement(d.q) * a_op - Matrix::identity(v.dim()));
        if (kern.empty()) throw InvariantViolation("h^2 > 0 but the kernel is trivial");
        const Matrix n_prime = from_coordinates(v, kern.front());
        if (!is_nilpotent(n_prime))
            throw InvariantViolation("kernel vector of q Ad Phi - 1 is not nilpotent");
        // Move to the semisimple point of the current Phi first.
        auto [s, ss_move] = semisimplify_in_fiber(with_phi(d, phi));
        walk_detail::push_nontrivial(cert.moves, ss_move);
        phi = s;
        if (!(phi * n_prime == qinv * (n_prime * phi)))
            throw InvariantViolation("semisimple part lost the eigenvector relation");
        const SL2Triple trip = commuting_sl2(n_prime, phi, qinv, v);
        const Cocharacter lam = adapted_cocharacter(trip);
        const std::size_t dim_now = walk_detail::kernel_dim_q_ad(d, phi, v);
        bool accepted = false;
        for (long t : opt.t_candidates) {
            const Matrix cand = phi * lam.evaluate(FieldElement(Rational(t)));
            if (walk_detail::kernel_dim_q_ad(d, cand, v) >= dim_now) continue;
            WalkMove m;
            m.kind = MoveKind::CocharScale;
            m.start_phi = phi;
            m.end_phi = cand;
            m.t_start = FieldElement(Rational(1));
            m.t_end = FieldElement(Rational(t));
            m.base = phi;
            m.lambda = lam;
            cert.moves.push_back(std::move(m));
            phi = cand;
            accepted = true;
            break;
        }
        if (!accepted)
            throw TrialExhausted("no candidate t drops the kernel dimension");
    }
    throw TrialExhausted("step limit reached before h^2 vanished");
}

/**
 * N != 0 preparation: move Phi inside the fiber to Phi_new = Psi_s lambda(1/sqrt q)
 * where Psi = Phi lambda'(sqrt q) is the associated N-centralizing point,
 * Psi_s its semisimple part, lambda' the adapted cocharacter of a
 * Jacobson-Morozov triple through N, and lambda the adapted cocharacter of an
 * sl2-triple through N commuting with Psi_s.  Afterwards Ad(Phi_new) is
 * semisimple on the invariants and commutes with Ad(lambda(t)).
 */
struct FiberSemisimplePoint {
    Matrix phi_new;
    Cocharacter lambda;       // adapted, commutes with psi_s
    Matrix psi_s;             // = phi_new * lambda(sqrt q)
    std::vector<WalkMove> moves;
};

inline FiberSemisimplePoint fiber_semisimple_point(const WDTriple& d) {
    require_valid(d);
    if (d.n_op.is_zero()) throw Error("fiber_semisimple_point expects N != 0");
    const LieSubspace v = invariant_subalgebra(d);
    const SL2Triple raw = jacobson_morozov(d.n_op, v);
    const Cocharacter lam_prime = adapted_cocharacter(raw);
    const FieldElement inv_sqrt_q = d.sqrt_q.inverse();
    const Matrix psi = d.phi * lam_prime.evaluate(d.sqrt_q);
    if (!(psi * d.n_op == d.n_op * psi))
        throw InvariantViolation("Psi does not centralize N");
    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const Matrix& t = d.inertial.mats[i];
        const Matrix& ts = d.inertial.mats[d.inertial.sigma[i]];
        if (!(psi * t == ts * psi))
            throw InvariantViolation("Psi breaks the sigma-compatibility");
    }
    const auto [psi_s, psi_u] = jordan_chevalley(psi);
    if (!(psi_s * d.n_op == d.n_op * psi_s) || !(psi_u * d.n_op == d.n_op * psi_u))
        throw InvariantViolation("a Jordan-Chevalley part of Psi left the centralizer of N");
    walk_detail::require_commutes_with_inertia(psi_u, d.inertial, "unipotent part of Psi");
    FiberSemisimplePoint out;
    out.psi_s = psi_s;
    const Matrix tail = lam_prime.evaluate(inv_sqrt_q);
    const Matrix phi_mid = psi_s * tail;
    {
        WalkMove m;
        m.kind = MoveKind::UnipotentLine;
        m.start_phi = d.phi;
        m.end_phi = phi_mid;
        m.t_start = FieldElement(Rational(1));
        m.t_end = FieldElement(Rational(0));
        m.base = psi_s;
        m.tail = tail;
        m.y = log_unipotent(psi_u);
        walk_detail::require_commutes_with_inertia(m.y, d.inertial, "log of Psi_u");
        if (!(m.y * d.n_op == d.n_op * m.y))
            throw InvariantViolation("log of Psi_u does not centralize N");
        if (!(move_family_at(m, m.t_start, inv_sqrt_q) == d.phi))
            throw InvariantViolation("unipotent line does not start at Phi");
        walk_detail::push_nontrivial(out.moves, std::move(m));
    }
    const SL2Triple com = commuting_sl2(d.n_op, psi_s, FieldElement(Rational(1)), v);
    out.lambda = adapted_cocharacter(com);
    out.phi_new = psi_s * out.lambda.evaluate(inv_sqrt_q);
    {
        WalkMove m;
        m.kind = MoveKind::CocharInterpolation;
        m.start_phi = phi_mid;
        m.end_phi = out.phi_new;
        m.t_start = d.sqrt_q;
        m.t_end = FieldElement(Rational(1));
        m.base = psi_s;
        m.lambda = out.lambda;
        m.lambda_prime = lam_prime;
        if (!(move_family_at(m, m.t_start, inv_sqrt_q) == phi_mid) ||
            !(move_family_at(m, m.t_end, inv_sqrt_q) == out.phi_new))
            throw InvariantViolation("interpolation endpoints are off");
        walk_detail::push_nontrivial(out.moves, std::move(m));
    }
    if (!(out.psi_s == out.phi_new * out.lambda.evaluate(d.sqrt_q)))
        throw InvariantViolation("Phi_new * lambda(sqrt q) is not Psi_s");
    return out;
}

/**
 * N != 0: pass to the fiber-semisimple point; grade the invariants by the
 * commuting adapted cocharacter and split off lowest-weight pieces (checking
 * that Ad Phi preserves them); then branch on whether Ad(Psi_s) has finite
 * order.  Finite order forces h^2 = 0 on the spot; otherwise scale by the
 * eigenweight cocharacter of S = Psi_s^m and accept the first candidate t
 * passing the lowest-weight determinant tests together with h^2 = 0.
 */
inline WalkCertificate case2_walk(const WDTriple& d, const WalkOptions& opt = {}) {
    require_valid(d);
    if (d.n_op.is_zero()) throw Error("case2_walk expects N != 0");
    WalkCertificate cert;
    cert.initial = d;
    FiberSemisimplePoint fs = fiber_semisimple_point(d);
    cert.moves = std::move(fs.moves);
    Matrix phi = fs.phi_new;
    const LieSubspace v = invariant_subalgebra(d);
    const LowestWeightSplit split = lowest_weight_split(d.n_op, fs.lambda, v);
    // Lowest-weight preservation: Ad Phi maps each piece into itself.
    for (const auto& part : {split.lowest_weight, split.image_part})
        for (const auto& [w, sub] : part)
            for (const auto& b : sub.basis)
                if (!coordinates_in(sub, phi * b * inverse(phi)))
                    throw InvariantViolation("Ad Phi does not preserve a lowest-weight piece");
    const GroupSpec ambient = make_group_spec(GroupKind::GeneralLinear, d.n(), d.field());
    const LieSubspace full = lie_algebra_basis(ambient);
    const long order = finite_multiplicative_order(ad_operator_group(fs.psi_s, full));
    if (order != 0) {
        const CohomologyReport rep = deformation_complex(with_phi(d, phi));
        if (rep.h2 != 0)
            throw InvariantViolation("finite-order branch landed at an obstructed point");
        walk_detail::finalize(cert, phi, rep);
        return cert;
    }
    const long m_exp = frobenius_exponent(with_phi(d, phi));
    const Matrix s_mat = mat_pow(fs.psi_s, m_exp);
    const Cocharacter lam2 = eigenweight_cocharacter(s_mat, d.field());
    const FieldElement qinv = q_inverse(d);
    for (long t : opt.t_candidates) {
        const Matrix cand = phi * lam2.evaluate(FieldElement(Rational(t)));
        bool dets_ok = true;
        for (const auto& [w, sub] : split.lowest_weight) {
            if (sub.dim() == 0) continue;
            const Matrix op = ad_operator_group(cand, sub);
            if (det(op - Matrix::scalar(sub.dim(), qinv)).is_zero()) {
                dets_ok = false;
                break;
            }
        }
        if (!dets_ok) continue;
        const CohomologyReport rep = deformation_complex(with_phi(d, cand));
        if (rep.h2 != 0) continue;
        WalkMove m;
        m.kind = MoveKind::CocharScale;
        m.start_phi = phi;
        m.end_phi = cand;
        m.t_start = FieldElement(Rational(1));
        m.t_end = FieldElement(Rational(t));
        m.base = phi;
        m.lambda = lam2;
        cert.moves.push_back(std::move(m));
        walk_detail::finalize(cert, cand, rep);
        return cert;
    }
    throw TrialExhausted("no candidate t passes the lowest-weight and h^2 tests");
}

/** Dispatch: empty certificate when already unobstructed, else by N. */
inline WalkCertificate unobstruct(const WDTriple& d, const WalkOptions& opt = {}) {
    require_valid(d);
    const CohomologyReport rep = deformation_complex(d);
    if (rep.h2 == 0) {
        WalkCertificate cert;
        cert.initial = d;
        walk_detail::finalize(cert, d.phi, rep);
        return cert;
    }
    if (d.group.kind != GroupKind::GeneralLinear)
        throw UnsupportedGroupKind("the walk engine supports GeneralLinear only");
    return d.n_op.is_zero() ? case1_walk(d, opt) : case2_walk(d, opt);
}

/** Independent checker verdict. */
struct VerificationReport {
    bool ok = false;
    bool final_obstructed = false;  // all moves verify but the endpoint has h^2 != 0
    std::string failure;            // first failing check when !ok
    std::size_t checks = 0;         // number of checks performed
};

namespace walk_detail {

inline bool residuals_vanish(const WDTriple& d, const WalkMove& m, const FieldElement& t,
                             const FieldElement& inv_sqrt_q, std::string& why) {
    const Matrix f = move_family_at(m, t, inv_sqrt_q);
    if (!(f * d.n_op == q_inverse(d) * (d.n_op * f))) {
        why = "twisted commutation residual at a sample";
        return false;
    }
    for (std::size_t i = 0; i < d.inertial.size(); ++i) {
        const Matrix& tau = d.inertial.mats[i];
        const Matrix& tau_s = d.inertial.mats[d.inertial.sigma[i]];
        if (!(f * tau == tau_s * f)) {
            why = "Frobenius compatibility residual at a sample";
            return false;
        }
    }
    return true;
}

inline long laurent_width(const Cocharacter& c) {
    if (c.weights.empty()) return 0;
    return c.weights.back() - c.weights.front();
}

}  // namespace walk_detail

/**
 * Total, engine-independent certificate check: re-validates the initial
 * triple and both endpoints of every move, re-proves each family's fiber
 * membership by sampling the residual identities at degree+1 parameter
 * values, checks chain composition and the stored final report, and recomputes
 * h^2 at the final point.
 */
inline VerificationReport verify_certificate(const WalkCertificate& c) {
    VerificationReport out;
    auto fail = [&out](const std::string& why) {
        out.failure = why;
        return out;
    };
    try {
        ++out.checks;
        if (!is_valid(c.initial)) return fail("initial triple is invalid");
        const WDTriple& d = c.initial;
        const FieldElement inv_sqrt_q = d.sqrt_q.inverse();
        Matrix cursor = d.phi;
        for (std::size_t idx = 0; idx < c.moves.size(); ++idx) {
            const WalkMove& m = c.moves[idx];
            const std::string where = "move " + std::to_string(idx) + " (" +
                                      move_kind_name(m.kind) + "): ";
            ++out.checks;
            if (!(m.start_phi == cursor)) return fail(where + "does not start at the cursor");
            ++out.checks;
            if (!is_valid(with_phi(d, m.start_phi))) return fail(where + "start point invalid");
            ++out.checks;
            if (!is_valid(with_phi(d, m.end_phi))) return fail(where + "end point invalid");
            // Sampling plan per kind; witness sanity comes before any evaluation.
            std::vector<FieldElement> samples;
            if (m.kind == MoveKind::UnipotentLine) {
                ++out.checks;
                if (!is_nilpotent(m.y)) return fail(where + "witness Y is not nilpotent");
                const std::size_t deg = m.y.is_zero() ? 0 : nilpotency_index(m.y) - 1;
                for (std::size_t k = 0; k <= deg; ++k)
                    samples.emplace_back(Rational(static_cast<long>(k)));
            } else {
                ++out.checks;
                if ((m.kind == MoveKind::CocharInterpolation &&
                     (m.t_start.is_zero() || m.t_end.is_zero())) ||
                    m.lambda.weights.empty())
                    return fail(where + "degenerate parameter data");
                long width = walk_detail::laurent_width(m.lambda);
                if (m.kind == MoveKind::CocharInterpolation)
                    width += walk_detail::laurent_width(m.lambda_prime);
                for (long k = 1; k <= width + 1; ++k) samples.emplace_back(Rational(k));
            }
            // Family endpoints.
            ++out.checks;
            if (!(move_family_at(m, m.t_start, inv_sqrt_q) == m.start_phi))
                return fail(where + "family does not pass through the start");
            ++out.checks;
            if (!(move_family_at(m, m.t_end, inv_sqrt_q) == m.end_phi))
                return fail(where + "family does not pass through the end");
            for (const auto& t : samples) {
                ++out.checks;
                std::string why;
                if (!walk_detail::residuals_vanish(d, m, t, inv_sqrt_q, why))
                    return fail(where + why);
            }
            cursor = m.end_phi;
        }
        ++out.checks;
        if (!(c.final_phi == cursor)) return fail("final Phi does not close the chain");
        CohomologyReport rep;
        try {
            rep = deformation_complex(with_phi(d, c.final_phi));
        } catch (const Error& e) {
            return fail(std::string("final point rejected: ") + e.what());
        }
        ++out.checks;
        if (rep.h2 != 0) {
            out.final_obstructed = true;
            return fail("final point is obstructed (h^2 = " + std::to_string(rep.h2) + ")");
        }
        ++out.checks;
        if (rep.gamma != c.final_report.gamma || rep.h0 != c.final_report.h0 ||
            rep.h1 != c.final_report.h1 || rep.h2 != c.final_report.h2)
            return fail("stored final report disagrees with recomputation");
        out.ok = true;
        return out;
    } catch (const Error& e) {
        return fail(std::string("verification aborted: ") + e.what());
    }
}

}  // namespace wdwalk
