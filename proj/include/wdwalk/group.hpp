#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/matrix.hpp"

/*
 * Matrix groups (general linear, special linear, stabilizers of a bilinear
 * form), their Lie algebras, adjoint operators restricted to invariant
 * subspaces, centralizers, and explicit finite inertial actions.
 */

namespace wdwalk {

enum class GroupKind { GeneralLinear, SpecialLinear, FormStabilizer };

struct GroupSpec {
    GroupKind kind = GroupKind::GeneralLinear;
    std::size_t n = 0;
    Matrix form;     // FormStabilizer only
    FieldPtr field;  // null means plain rationals
};

inline GroupSpec make_group_spec(GroupKind kind, std::size_t n, FieldPtr field = nullptr,
                                 Matrix form = Matrix()) {
    if (n == 0) throw ParseError("group rank must be positive");
    GroupSpec g{kind, n, std::move(form), std::move(field)};
    if (kind == GroupKind::FormStabilizer) {
        if (g.form.rows() != n || g.form.cols() != n)
            throw ParseError("form matrix must be n x n");
        if (det(g.form).is_zero()) throw ParseError("form matrix must be invertible");
        const Matrix t = g.form.transpose();
        if (!(t == g.form) && !(t == -g.form))
            throw ParseError("form matrix must be symmetric or antisymmetric");
    }
    return g;
}

struct LieSubspace {
    std::size_t n = 0;  // ambient matrix size
    std::vector<Matrix> basis;
    std::size_t dim() const { return basis.size(); }
};

inline LieSubspace make_lie_subspace(std::size_t n, std::vector<Matrix> basis) {
    std::vector<Vec> cols;
    cols.reserve(basis.size());
    for (const auto& b : basis) {
        if (b.rows() != n || b.cols() != n) throw Error("subspace basis shape mismatch");
        cols.push_back(flatten(b));
    }
    if (!cols.empty() && rank(matrix_from_columns(cols)) != basis.size())
        throw Error("subspace basis is linearly dependent");
    return {n, std::move(basis)};
}

/** Coordinates of x in V's basis, if x lies in the span. */
inline std::optional<Vec> coordinates_in(const LieSubspace& v, const Matrix& x) {
    if (v.basis.empty()) return x.is_zero() ? std::optional<Vec>(Vec{}) : std::nullopt;
    std::vector<Vec> cols;
    cols.reserve(v.basis.size());
    for (const auto& b : v.basis) cols.push_back(flatten(b));
    return solve(matrix_from_columns(cols), flatten(x));
}

inline bool contains(const LieSubspace& v, const Matrix& x) {
    return coordinates_in(v, x).has_value();
}

inline Matrix from_coordinates(const LieSubspace& v, const Vec& c) {
    if (c.size() != v.basis.size()) throw Error("coordinate length mismatch");
    Matrix x(v.n, v.n);
    for (std::size_t i = 0; i < c.size(); ++i) x = x + c[i] * v.basis[i];
    return x;
}

/** Tangent space at the identity, in a deterministic basis order. */
inline LieSubspace lie_algebra_basis(const GroupSpec& g) {
    std::vector<Matrix> basis;
    const std::size_t n = g.n;
    auto unit = [n](std::size_t i, std::size_t j) {
        Matrix e(n, n);
        e.at(i, j) = FieldElement(Rational(1));
        return e;
    };
    switch (g.kind) {
        case GroupKind::GeneralLinear:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) basis.push_back(unit(i, j));
            break;
        case GroupKind::SpecialLinear:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) basis.push_back(unit(i, j));
            for (std::size_t i = 0; i + 1 < n; ++i)
                basis.push_back(unit(i, i) - unit(i + 1, i + 1));
            break;
        case GroupKind::FormStabilizer: {
            // Solutions of X^T B + B X = 0.
            std::vector<Vec> cols;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const Matrix e = unit(i, j);
                    cols.push_back(flatten(e.transpose() * g.form + g.form * e));
                }
            for (const auto& k : kernel_basis(matrix_from_columns(cols)))
                basis.push_back(unflatten(k, n, n));
            break;
        }
    }
    return make_lie_subspace(n, std::move(basis));
}

inline bool in_lie_algebra(const GroupSpec& g, const Matrix& x) {
    if (x.rows() != g.n || x.cols() != g.n) return false;
    switch (g.kind) {
        case GroupKind::GeneralLinear:
            return true;
        case GroupKind::SpecialLinear:
            return x.trace().is_zero();
        case GroupKind::FormStabilizer:
            return (x.transpose() * g.form + g.form * x).is_zero();
    }
    return false;
}

/** Empty when g is a member; otherwise a human-readable reason. */
inline std::optional<std::string> group_membership_violation(const GroupSpec& spec,
                                                             const Matrix& g) {
    if (g.rows() != spec.n || g.cols() != spec.n) return "matrix has the wrong shape";
    const FieldElement d = det(g);
    if (d.is_zero()) return "matrix is not invertible";
    switch (spec.kind) {
        case GroupKind::GeneralLinear:
            break;
        case GroupKind::SpecialLinear:
            if (!d.is_one()) return "determinant is not 1";
            break;
        case GroupKind::FormStabilizer:
            if (!(g.transpose() * spec.form * g == spec.form))
                return "matrix does not stabilize the form";
            break;
    }
    return std::nullopt;
}

/** Matrix of Y -> g Y g^{-1} on V's coordinates. */
inline Matrix ad_operator_group(const Matrix& g, const LieSubspace& v) {
    const Matrix gi = inverse(g);
    std::vector<Vec> cols;
    cols.reserve(v.dim());
    for (const auto& b : v.basis) {
        auto c = coordinates_in(v, g * b * gi);
        if (!c) throw NotInvariant("subspace is not preserved by the adjoint action");
        cols.push_back(*c);
    }
    return v.dim() ? matrix_from_columns(cols) : Matrix(0, 0);
}

/** Matrix of Y -> [x, Y] on V's coordinates. */
inline Matrix ad_operator_lie(const Matrix& x, const LieSubspace& v) {
    std::vector<Vec> cols;
    cols.reserve(v.dim());
    for (const auto& b : v.basis) {
        auto c = coordinates_in(v, x * b - b * x);
        if (!c) throw NotInvariant("subspace is not preserved by the bracket action");
        cols.push_back(*c);
    }
    return v.dim() ? matrix_from_columns(cols) : Matrix(0, 0);
}

inline bool is_bracket_closed(const LieSubspace& v) {
    for (const auto& a : v.basis)
        for (const auto& b : v.basis)
            if (!contains(v, a * b - b * a)) return false;
    return true;
}

/** Sub-subspace from coordinate vectors relative to V's basis. */
inline LieSubspace subspace_from_coordinate_vectors(const LieSubspace& v,
                                                    const std::vector<Vec>& coord_vecs) {
    std::vector<Matrix> basis;
    basis.reserve(coord_vecs.size());
    for (const auto& c : coord_vecs) basis.push_back(from_coordinates(v, c));
    return make_lie_subspace(v.n, std::move(basis));
}

/**
 * A finite inertial action: labeled, pairwise-distinct invertible matrices
 * closed under multiplication (the product table is derived and verified),
 * plus an automorphism sigma of the label set.
 */
struct InertialData {
    std::vector<std::string> labels;
    std::vector<Matrix> mats;
    std::vector<std::size_t> sigma;                // index permutation
    std::vector<std::vector<std::size_t>> table;   // table[i][j]: index of mats[i]*mats[j]
    std::size_t identity_index = 0;

    std::size_t size() const { return mats.size(); }
    bool is_trivial() const { return mats.size() == 1; }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        throw ParseError("unknown inertial label: " + label);
    }

    long sigma_order() const {
        long order = 1;
        std::vector<bool> seen(sigma.size(), false);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (seen[i]) continue;
            long len = 0;
            std::size_t j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = sigma[j];
                ++len;
            }
            order = std::lcm(order, len);
        }
        return order;
    }

    static InertialData make(std::vector<std::string> labels, std::vector<Matrix> mats,
                             const std::map<std::string, std::string>& sigma_map) {
        if (labels.empty() || labels.size() != mats.size())
            throw ParseError("inertial data needs matching labels and matrices");
        const std::size_t m = labels.size();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                if (labels[i] == labels[j]) throw ParseError("duplicate inertial label");
                if (mats[i] == mats[j])
                    throw InvalidTriple("inertial matrices must be pairwise distinct");
            }
        const std::size_t n = mats.front().rows();
        InertialData d;
        d.labels = std::move(labels);
        d.mats = std::move(mats);
        for (const auto& g : d.mats) {
            if (g.rows() != n || g.cols() != n) throw ParseError("inertial matrix shape mismatch");
            if (det(g).is_zero()) throw InvalidTriple("inertial matrix is singular");
        }
        // Derived multiplication table; closure check.
        d.table.assign(m, std::vector<std::size_t>(m, m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const Matrix p = d.mats[i] * d.mats[j];
                for (std::size_t k = 0; k < m; ++k)
                    if (d.mats[k] == p) {
                        d.table[i][j] = k;
                        break;
                    }
                if (d.table[i][j] == m)
                    throw InvalidTriple("inertial matrices are not closed under multiplication");
            }
        // Identity and inverses (associativity is inherited from matrices).
        const Matrix id = Matrix::identity(n);
        bool found_id = false;
        for (std::size_t i = 0; i < m; ++i)
            if (d.mats[i] == id) {
                d.identity_index = i;
                found_id = true;
            }
        if (!found_id) throw InvalidTriple("inertial data lacks the identity matrix");
        for (std::size_t i = 0; i < m; ++i) {
            bool has_inverse = false;
            for (std::size_t j = 0; j < m; ++j)
                if (d.table[i][j] == d.identity_index) has_inverse = true;
            if (!has_inverse) throw InvalidTriple("inertial element has no inverse in the set");
        }
        // Sigma: total bijection that respects the table.
        d.sigma.assign(m, m);
        for (const auto& [from, to] : sigma_map) d.sigma[d.index_of(from)] = d.index_of(to);
        std::vector<bool> hit(m, false);
        for (std::size_t i = 0; i < m; ++i) {
            if (d.sigma[i] == m) throw ParseError("sigma is not defined on every label");
            if (hit[d.sigma[i]]) throw InvalidTriple("sigma is not a bijection");
            hit[d.sigma[i]] = true;
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (d.sigma[d.table[i][j]] != d.table[d.sigma[i]][d.sigma[j]])
                    throw InvalidTriple("sigma is not a group automorphism");
        return d;
    }
};

/** {X in V : Ad(tau(g)) X = X for every g}. */
inline LieSubspace invariant_subalgebra(const InertialData& inertial, const LieSubspace& v) {
    if (v.dim() == 0 || inertial.is_trivial()) return v;
    Matrix stacked(0, v.dim());
    bool any = false;
    for (std::size_t i = 0; i < inertial.size(); ++i) {
        if (i == inertial.identity_index) continue;
        const Matrix op = ad_operator_group(inertial.mats[i], v) - Matrix::identity(v.dim());
        stacked = any ? vcat(stacked, op) : op;
        any = true;
    }
    if (!any) return v;
    return subspace_from_coordinate_vectors(v, kernel_basis(stacked));
}

/** Common kernel of (Ad(g) - 1) and ad(x) on V, over the given elements. */
inline LieSubspace centralizer_subspace(const std::vector<Matrix>& group_elements,
                                        const std::vector<Matrix>& lie_elements,
                                        const LieSubspace& v) {
    if (v.dim() == 0) return v;
    Matrix stacked(0, v.dim());
    bool any = false;
    for (const auto& g : group_elements) {
        const Matrix op = ad_operator_group(g, v) - Matrix::identity(v.dim());
        stacked = any ? vcat(stacked, op) : op;
        any = true;
    }
    for (const auto& x : lie_elements) {
        const Matrix op = ad_operator_lie(x, v);
        stacked = any ? vcat(stacked, op) : op;
        any = true;
    }
    if (!any) return v;
    return subspace_from_coordinate_vectors(v, kernel_basis(stacked));
}

}  // namespace wdwalk
