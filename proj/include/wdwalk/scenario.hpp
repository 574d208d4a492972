#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wdwalk/errors.hpp"
#include "wdwalk/group.hpp"
#include "wdwalk/matrix.hpp"
#include "wdwalk/numberfield.hpp"
#include "wdwalk/sl2.hpp"
#include "wdwalk/walk.hpp"
#include "wdwalk/wd.hpp"

/*
 * Scenario files (triples as JSON), certificate serialization, and the
 * deterministic random scenario generator used for property testing.
 *
 * All rationals serialize as canonical strings "p" or "p/q"; field elements
 * as coordinate arrays of length equal to the field degree, low power first;
 * matrices as row-major arrays of field-element arrays.
 */

namespace wdwalk {

using Json = nlohmann::ordered_json;

struct Scenario {
    std::string name;  // empty = unnamed
    std::optional<std::int64_t> seed;
    WDTriple triple;
};

// ---------- value <-> JSON ----------

inline Json field_element_to_json(const FieldElement& x, const FieldPtr& field) {
    if (x.field() && field && !x.field()->same_as(*field))
        throw FieldMismatch("element belongs to a different field than the scenario");
    const FieldElement y = x.promoted(field);
    Json arr = Json::array();
    for (const auto& c : y.coords()) arr.push_back(rational_to_string(c));
    return arr;
}

inline FieldElement field_element_from_json(const Json& j, const FieldPtr& field) {
    if (!j.is_array()) throw ParseError("field element must be an array of rational strings");
    const std::size_t d = field ? static_cast<std::size_t>(field->degree()) : 1;
    if (j.size() != d)
        throw ParseError("field element has " + std::to_string(j.size()) +
                         " coordinates, expected " + std::to_string(d));
    qp::QPoly p;
    for (const auto& entry : j) {
        if (!entry.is_string()) throw ParseError("field element coordinates must be strings");
        p.push_back(parse_rational(entry.get<std::string>()));
    }
    if (!field) return p.empty() ? FieldElement() : FieldElement(p[0]);
    return FieldElement(field, std::move(p));
}

inline Json matrix_to_json(const Matrix& m, const FieldPtr& field) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(field_element_to_json(m(i, j), field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& j, const FieldPtr& field) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
    const std::size_t r = j.size();
    const std::size_t c = j.front().is_array() ? j.front().size() : 0;
    if (c == 0) throw ParseError("matrix rows must be nonempty arrays");
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        const Json& row = j[i];
        if (!row.is_array() || row.size() != c) throw ParseError("ragged matrix rows");
        for (std::size_t k = 0; k < c; ++k) m.at(i, k) = field_element_from_json(row[k], field);
    }
    return m;
}

// ---------- scenario <-> JSON ----------

inline Scenario scenario_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");
    auto need = [&j](const char* key) -> const Json& {
        auto it = j.find(key);
        if (it == j.end()) throw ParseError(std::string("scenario lacks \"") + key + "\"");
        return *it;
    };
    Scenario s;
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ParseError("scenario name must be a string");
        s.name = it->get<std::string>();
    }
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) throw ParseError("scenario seed must be an integer");
        s.seed = it->get<std::int64_t>();
    }
    const Json& fj = need("field");
    if (!fj.is_object() || !fj.contains("min_poly") || !fj["min_poly"].is_array() ||
        fj["min_poly"].empty())
        throw ParseError("field descriptor must be {\"min_poly\": [rational strings]}");
    qp::QPoly mp;
    for (const auto& entry : fj["min_poly"]) {
        if (!entry.is_string()) throw ParseError("min_poly coefficients must be strings");
        mp.push_back(parse_rational(entry.get<std::string>()));
    }
    const FieldPtr field = NumberField::make(mp);

    const Json& qj = need("q");
    if (!qj.is_string()) throw ParseError("q must be a rational string");
    const Rational q = parse_rational(qj.get<std::string>());
    const FieldElement sqrt_q = field_element_from_json(need("sqrt_q"), field);

    const Json& gj = need("group");
    if (!gj.is_object() || !gj.contains("kind") || !gj.contains("n"))
        throw ParseError("group must be {\"kind\":..., \"n\":...}");
    if (!gj["kind"].is_string()) throw ParseError("group kind must be a string");
    const std::string kind_s = gj["kind"].get<std::string>();
    GroupKind kind;
    if (kind_s == "GL") kind = GroupKind::GeneralLinear;
    else if (kind_s == "SL") kind = GroupKind::SpecialLinear;
    else if (kind_s == "Form") kind = GroupKind::FormStabilizer;
    else throw ParseError("unknown group kind: " + kind_s);
    if (!gj["n"].is_number_integer() || gj["n"].get<std::int64_t>() < 1)
        throw ParseError("group n must be a positive integer");
    const std::size_t n = gj["n"].get<std::size_t>();
    Matrix form;
    if (kind == GroupKind::FormStabilizer) {
        if (!gj.contains("form")) throw ParseError("Form groups need a \"form\" matrix");
        form = matrix_from_json(gj["form"], field);
    }
    const GroupSpec group = make_group_spec(kind, n, field, form);

    const Json& ij = need("inertial");
    if (!ij.is_object() || !ij.contains("elements") || !ij.contains("sigma"))
        throw ParseError("inertial must be {\"elements\":[...], \"sigma\":{...}}");
    std::vector<std::string> labels;
    std::vector<Matrix> mats;
    for (const auto& e : ij["elements"]) {
        if (!e.is_object() || !e.contains("label") || !e.contains("matrix") ||
            !e["label"].is_string())
            throw ParseError("inertial elements need a string \"label\" and a \"matrix\"");
        labels.push_back(e["label"].get<std::string>());
        mats.push_back(matrix_from_json(e["matrix"], field));
    }
    std::map<std::string, std::string> sigma_map;
    if (!ij["sigma"].is_object()) throw ParseError("sigma must be an object label -> label");
    for (const auto& [k, v] : ij["sigma"].items()) {
        if (!v.is_string()) throw ParseError("sigma values must be labels");
        sigma_map[k] = v.get<std::string>();
    }
    const InertialData inertial = InertialData::make(std::move(labels), std::move(mats), sigma_map);

    s.triple = WDTriple{group, inertial, matrix_from_json(need("Phi"), field),
                        matrix_from_json(need("N"), field), q, sqrt_q};
    return s;
}

inline Json scenario_to_json(const Scenario& s) {
    const FieldPtr field = s.triple.field();
    Json j = Json::object();
    if (!s.name.empty()) j["name"] = s.name;
    if (s.seed) j["seed"] = *s.seed;
    Json mp = Json::array();
    const qp::QPoly poly =
        field ? field->min_poly() : qp::QPoly{Rational(0), Rational(1)};
    for (const auto& c : poly) mp.push_back(rational_to_string(c));
    j["field"] = Json{{"min_poly", std::move(mp)}};
    j["q"] = rational_to_string(s.triple.q);
    j["sqrt_q"] = field_element_to_json(s.triple.sqrt_q, field);
    Json gj = Json::object();
    switch (s.triple.group.kind) {
        case GroupKind::GeneralLinear: gj["kind"] = "GL"; break;
        case GroupKind::SpecialLinear: gj["kind"] = "SL"; break;
        case GroupKind::FormStabilizer: gj["kind"] = "Form"; break;
    }
    gj["n"] = s.triple.group.n;
    if (s.triple.group.kind == GroupKind::FormStabilizer)
        gj["form"] = matrix_to_json(s.triple.group.form, field);
    j["group"] = std::move(gj);
    Json elements = Json::array();
    for (std::size_t i = 0; i < s.triple.inertial.size(); ++i)
        elements.push_back(Json{{"label", s.triple.inertial.labels[i]},
                                {"matrix", matrix_to_json(s.triple.inertial.mats[i], field)}});
    Json sigma = Json::object();
    for (std::size_t i = 0; i < s.triple.inertial.size(); ++i)
        sigma[s.triple.inertial.labels[i]] =
            s.triple.inertial.labels[s.triple.inertial.sigma[i]];
    j["inertial"] = Json{{"elements", std::move(elements)}, {"sigma", std::move(sigma)}};
    j["Phi"] = matrix_to_json(s.triple.phi, field);
    j["N"] = matrix_to_json(s.triple.n_op, field);
    return j;
}

// ---------- reports, cocharacters, moves, certificates ----------

inline Json report_to_json(const CohomologyReport& r) {
    Json j = Json::object();
    j["gamma"] = r.gamma;
    j["h0"] = r.h0;
    j["h1"] = r.h1;
    j["h2"] = r.h2;
    return j;
}

inline CohomologyReport report_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("cohomology report must be an object");
    CohomologyReport r;
    for (const char* k : {"gamma", "h0", "h1", "h2"})
        if (!j.contains(k) || !j[k].is_number_unsigned())
            throw ParseError(std::string("cohomology report lacks numeric \"") + k + "\"");
    r.gamma = j["gamma"].get<std::size_t>();
    r.h0 = j["h0"].get<std::size_t>();
    r.h1 = j["h1"].get<std::size_t>();
    r.h2 = j["h2"].get<std::size_t>();
    return r;
}

inline Json cocharacter_to_json(const Cocharacter& c, const FieldPtr& field) {
    Json weights = Json::array();
    for (long w : c.weights) weights.push_back(w);
    Json projectors = Json::array();
    for (const auto& p : c.projectors) projectors.push_back(matrix_to_json(p, field));
    return Json{{"weights", std::move(weights)}, {"projectors", std::move(projectors)}};
}

inline Cocharacter cocharacter_from_json(const Json& j, const FieldPtr& field) {
    if (!j.is_object() || !j.contains("weights") || !j.contains("projectors"))
        throw ParseError("cocharacter must be {\"weights\":[...], \"projectors\":[...]}");
    Cocharacter c;
    for (const auto& w : j["weights"]) {
        if (!w.is_number_integer()) throw ParseError("cocharacter weights must be integers");
        c.weights.push_back(w.get<long>());
    }
    for (const auto& p : j["projectors"]) c.projectors.push_back(matrix_from_json(p, field));
    if (c.weights.size() != c.projectors.size() || c.weights.empty())
        throw ParseError("cocharacter weights and projectors must align and be nonempty");
    c.n = c.projectors.front().rows();
    return c;
}

inline Json move_to_json(const WalkMove& m, const FieldPtr& field) {
    Json j = Json::object();
    j["kind"] = move_kind_name(m.kind);
    j["t"] = Json{{"start", field_element_to_json(m.t_start, field)},
                  {"end", field_element_to_json(m.t_end, field)}};
    j["start_phi"] = matrix_to_json(m.start_phi, field);
    j["end_phi"] = matrix_to_json(m.end_phi, field);
    Json w = Json::object();
    w["base"] = matrix_to_json(m.base, field);
    switch (m.kind) {
        case MoveKind::UnipotentLine:
            w["Y"] = matrix_to_json(m.y, field);
            w["tail"] = matrix_to_json(m.tail, field);
            break;
        case MoveKind::CocharScale:
            w["lambda"] = cocharacter_to_json(m.lambda, field);
            break;
        case MoveKind::CocharInterpolation:
            w["lambda"] = cocharacter_to_json(m.lambda, field);
            w["lambda_prime"] = cocharacter_to_json(m.lambda_prime, field);
            break;
    }
    j["witnesses"] = std::move(w);
    return j;
}

inline WalkMove move_from_json(const Json& j, const FieldPtr& field) {
    if (!j.is_object()) throw ParseError("walk move must be an object");
    for (const char* k : {"kind", "t", "start_phi", "end_phi", "witnesses"})
        if (!j.contains(k)) throw ParseError(std::string("walk move lacks \"") + k + "\"");
    WalkMove m;
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "UnipotentLine") m.kind = MoveKind::UnipotentLine;
    else if (kind == "CocharScale") m.kind = MoveKind::CocharScale;
    else if (kind == "CocharInterpolation") m.kind = MoveKind::CocharInterpolation;
    else throw ParseError("unknown move kind: " + kind);
    const Json& t = j["t"];
    if (!t.is_object() || !t.contains("start") || !t.contains("end"))
        throw ParseError("move t must be {\"start\":..., \"end\":...}");
    m.t_start = field_element_from_json(t["start"], field);
    m.t_end = field_element_from_json(t["end"], field);
    m.start_phi = matrix_from_json(j["start_phi"], field);
    m.end_phi = matrix_from_json(j["end_phi"], field);
    const Json& w = j["witnesses"];
    if (!w.is_object() || !w.contains("base")) throw ParseError("move witnesses need \"base\"");
    m.base = matrix_from_json(w["base"], field);
    switch (m.kind) {
        case MoveKind::UnipotentLine:
            if (!w.contains("Y") || !w.contains("tail"))
                throw ParseError("UnipotentLine witnesses need \"Y\" and \"tail\"");
            m.y = matrix_from_json(w["Y"], field);
            m.tail = matrix_from_json(w["tail"], field);
            break;
        case MoveKind::CocharScale:
            if (!w.contains("lambda")) throw ParseError("CocharScale witnesses need \"lambda\"");
            m.lambda = cocharacter_from_json(w["lambda"], field);
            break;
        case MoveKind::CocharInterpolation:
            if (!w.contains("lambda") || !w.contains("lambda_prime"))
                throw ParseError(
                    "CocharInterpolation witnesses need \"lambda\" and \"lambda_prime\"");
            m.lambda = cocharacter_from_json(w["lambda"], field);
            m.lambda_prime = cocharacter_from_json(w["lambda_prime"], field);
            break;
    }
    return m;
}

inline Json certificate_to_json(const WalkCertificate& c) {
    const FieldPtr field = c.initial.field();
    Json j = Json::object();
    j["initial"] = scenario_to_json(Scenario{"", std::nullopt, c.initial});
    Json moves = Json::array();
    for (const auto& m : c.moves) moves.push_back(move_to_json(m, field));
    j["moves"] = std::move(moves);
    j["final_phi"] = matrix_to_json(c.final_phi, field);
    j["final_report"] = report_to_json(c.final_report);
    return j;
}

inline WalkCertificate certificate_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("certificate must be an object");
    for (const char* k : {"initial", "moves", "final_phi", "final_report"})
        if (!j.contains(k)) throw ParseError(std::string("certificate lacks \"") + k + "\"");
    WalkCertificate c;
    c.initial = scenario_from_json(j["initial"]).triple;
    const FieldPtr field = c.initial.field();
    if (!j["moves"].is_array()) throw ParseError("certificate moves must be an array");
    for (const auto& mj : j["moves"]) c.moves.push_back(move_from_json(mj, field));
    c.final_phi = matrix_from_json(j["final_phi"], field);
    c.final_report = report_from_json(j["final_report"]);
    return c;
}

// ---------- deterministic generation ----------

namespace gen_detail {

inline long pick(std::mt19937_64& rng, long lo, long hi) {  // inclusive bounds
    const unsigned long span = static_cast<unsigned long>(hi - lo + 1);
    return lo + static_cast<long>(rng() % span);
}

inline Matrix random_invertible(std::mt19937_64& rng, std::size_t n) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m.at(i, j) = FieldElement(Rational(pick(rng, -2, 2)));
        if (!det(m).is_zero()) return m;
    }
    throw Error("random invertible matrix search failed");
}

inline std::vector<std::size_t> random_partition(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> parts;
    std::size_t left = n;
    while (left > 0) {
        const std::size_t p = static_cast<std::size_t>(pick(rng, 1, static_cast<long>(left)));
        parts.push_back(p);
        left -= p;
    }
    std::sort(parts.rbegin(), parts.rend());
    return parts;
}

inline Matrix jordan_nilpotent(const std::vector<std::size_t>& parts, std::size_t n) {
    Matrix m(n, n);
    std::size_t off = 0;
    for (std::size_t p : parts) {
        for (std::size_t i = 0; i + 1 < p; ++i)
            m.at(off + i, off + i + 1) = FieldElement(Rational(1));
        off += p;
    }
    return m;
}

inline Matrix random_in_subspace(std::mt19937_64& rng, const LieSubspace& v, long lo, long hi) {
    Matrix m(v.n, v.n);
    for (const auto& b : v.basis) m = m + FieldElement(Rational(pick(rng, lo, hi))) * b;
    return m;
}

/** Diagonal matrices commuting with every given matrix, as diagonal-entry vectors. */
inline std::vector<Vec> diagonal_centralizer(const std::vector<Matrix>& constraints,
                                             std::size_t n) {
    std::vector<Vec> rows;
    for (const auto& c : constraints)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (c(i, j).is_zero()) continue;
                Vec row(n, FieldElement());
                if (i == j) continue;  // (d_i - d_j) c_ij = 0 is trivial on the diagonal
                row[i] = c(i, j);
                row[j] = -c(i, j);
                rows.push_back(std::move(row));
            }
    if (rows.empty()) {
        std::vector<Vec> basis;
        for (std::size_t i = 0; i < n; ++i) {
            Vec e(n, FieldElement());
            e[i] = FieldElement(Rational(1));
            basis.push_back(std::move(e));
        }
        return basis;
    }
    Matrix m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    return kernel_basis(m);
}

inline Matrix companion(const qp::QPoly& p) {
    const std::size_t d = static_cast<std::size_t>(qp::degree(p));
    Matrix m(d, d);
    for (std::size_t i = 0; i + 1 < d; ++i) m.at(i + 1, i) = FieldElement(Rational(1));
    for (std::size_t i = 0; i < d; ++i) m.at(i, d - 1) = FieldElement(-p[i]);
    return m;
}

}  // namespace gen_detail

/**
 * Deterministic scenario generator.  Templates: "trivial" (inertia = {1}),
 * "cyclic-k" for k in {2,3,4,6} (inertia generated by the rational rotation
 * model of order k, sigma = id).  N is a random nilpotent inside the
 * invariant subalgebra, Phi = s * lambda(1/sqrt q) for a random
 * s in Z(N) n Z(tau) and the same adapted cocharacter the walk engine would
 * build, so every output passes validation.
 */
inline Scenario generate_scenario(std::uint64_t seed, std::size_t n, long q,
                                  const std::string& templ) {
    if (n < 1 || n > 6) throw GenerationInfeasible("n must be between 1 and 6");
    long sq = 0;
    while (sq * sq < q) ++sq;
    if (sq * sq != q || q < 4)
        throw GenerationInfeasible("q must be a perfect square >= 4 over the rationals");
    std::mt19937_64 rng(seed);
    const FieldPtr field = NumberField::rationals();

    std::vector<std::string> labels;
    std::vector<Matrix> mats;
    std::map<std::string, std::string> sigma_map;
    if (templ == "trivial") {
        labels = {"e"};
        mats = {Matrix::identity(n)};
        sigma_map["e"] = "e";
    } else if (templ.rfind("cyclic-", 0) == 0) {
        long k = 0;
        try {
            k = std::stol(templ.substr(7));
        } catch (...) {
            throw GenerationInfeasible("bad cyclic template: " + templ);
        }
        if (k != 2 && k != 3 && k != 4 && k != 6)
            throw GenerationInfeasible("cyclic templates support k in {2,3,4,6}");
        const std::size_t d = static_cast<std::size_t>(euler_phi(k));
        if (n < d)
            throw GenerationInfeasible("n is too small for the cyclic-" + std::to_string(k) +
                                       " rational model");
        Matrix r = Matrix::identity(n);
        const Matrix block = gen_detail::companion(qp::cyclotomic(k));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) r.at(i, j) = block(i, j);
        Matrix pw = Matrix::identity(n);
        for (long j = 0; j < k; ++j) {
            labels.push_back("g" + std::to_string(j));
            mats.push_back(pw);
            pw = pw * r;
        }
        for (const auto& l : labels) sigma_map[l] = l;
    } else {
        throw GenerationInfeasible("unknown inertial template: " + templ);
    }
    const GroupSpec group = make_group_spec(GroupKind::GeneralLinear, n, field);
    const InertialData inertial = InertialData::make(labels, mats, sigma_map);
    const LieSubspace full = lie_algebra_basis(group);
    const LieSubspace inv = invariant_subalgebra(inertial, full);

    Matrix n_op(n, n);
    if (templ == "trivial") {
        const auto parts = gen_detail::random_partition(rng, n);
        const Matrix n0 = gen_detail::jordan_nilpotent(parts, n);
        const Matrix p = gen_detail::random_invertible(rng, n);
        n_op = p * n0 * inverse(p);
    } else {
        const Matrix x0 = gen_detail::random_in_subspace(rng, inv, -2, 2);
        n_op = jordan_chevalley_additive(x0).second;
    }

    const Cocharacter lam = n_op.is_zero()
                                ? trivial_cocharacter(n)
                                : adapted_cocharacter(jacobson_morozov(n_op, inv));

    // Semisimple factor: an invertible diagonal commuting with N and tau ...
    std::vector<Matrix> constraints = inertial.mats;
    constraints.push_back(n_op);
    const auto diag_basis = gen_detail::diagonal_centralizer(constraints, n);
    Matrix d_mat;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 200) {
            d_mat = Matrix::identity(n);
            break;
        }
        Vec diag(n, FieldElement());
        for (const auto& b : diag_basis) {
            const FieldElement c(Rational(gen_detail::pick(rng, 1, 3)));
            for (std::size_t i = 0; i < n; ++i) diag[i] += c * b[i];
        }
        bool ok = true;
        for (const auto& e : diag)
            if (e.is_zero()) ok = false;
        if (!ok) continue;
        d_mat = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) d_mat.at(i, i) = diag[i];
        break;
    }
    // ... times a unipotent from the same centralizer (also fixing the diagonal).
    std::vector<Matrix> c2 = constraints;
    c2.push_back(d_mat);
    const LieSubspace cent = centralizer_subspace({}, c2, full);
    const Matrix x = gen_detail::random_in_subspace(rng, cent, -2, 2);
    const Matrix s_mat = exp_nilpotent(jordan_chevalley_additive(x).second) * d_mat;

    const Matrix phi = s_mat * lam.evaluate(FieldElement(Rational(1, sq)));
    Scenario out;
    out.name = templ + "-n" + std::to_string(n) + "-q" + std::to_string(q) + "-s" +
               std::to_string(seed);
    out.seed = static_cast<std::int64_t>(seed);
    out.triple = WDTriple{group, inertial, phi, n_op, Rational(q), FieldElement(Rational(sq))};
    const auto bad = validate_triple(out.triple);
    if (!bad.empty())
        throw GenerationInfeasible("generated scenario failed validation: " + bad.front());
    return out;
}

}  // namespace wdwalk
