#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "wdwalk/group.hpp"

using namespace wdwalk;

namespace {
Matrix M(std::size_t r, std::size_t c, std::vector<Rational> es) {
    Matrix m(r, c);
    std::size_t k = 0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = FieldElement(es.at(k++));
    return m;
}
}  // namespace

TEST_CASE("Lie algebra bases of the classical groups") {
    CHECK(lie_algebra_basis(make_group_spec(GroupKind::GeneralLinear, 2)).dim() == 4);
    CHECK(lie_algebra_basis(make_group_spec(GroupKind::SpecialLinear, 2)).dim() == 3);
    CHECK(lie_algebra_basis(make_group_spec(GroupKind::GeneralLinear, 3)).dim() == 9);
    // Orthogonal form diag(1,1): antisymmetric matrices, dimension 1.
    const auto so2 =
        make_group_spec(GroupKind::FormStabilizer, 2, nullptr, Matrix::identity(2));
    CHECK(lie_algebra_basis(so2).dim() == 1);
    // Symplectic form: dimension 3 in rank 2.
    const auto sp2 =
        make_group_spec(GroupKind::FormStabilizer, 2, nullptr, M(2, 2, {0, 1, -1, 0}));
    CHECK(lie_algebra_basis(sp2).dim() == 3);
    for (const auto& b : lie_algebra_basis(sp2).basis) CHECK(in_lie_algebra(sp2, b));
    CHECK(is_bracket_closed(lie_algebra_basis(sp2)));
}

TEST_CASE("group spec validation") {
    CHECK_THROWS_AS(make_group_spec(GroupKind::GeneralLinear, 0), ParseError);
    CHECK_THROWS_AS(make_group_spec(GroupKind::FormStabilizer, 2, nullptr, Matrix(1, 1)),
                    ParseError);
    CHECK_THROWS_AS(make_group_spec(GroupKind::FormStabilizer, 2, nullptr, Matrix(2, 2)),
                    ParseError);  // singular
    CHECK_THROWS_AS(make_group_spec(GroupKind::FormStabilizer, 2, nullptr, M(2, 2, {1, 1, 0, 1})),
                    ParseError);  // neither symmetric nor antisymmetric
}

TEST_CASE("membership tests") {
    const auto gl2 = make_group_spec(GroupKind::GeneralLinear, 2);
    const auto sl2 = make_group_spec(GroupKind::SpecialLinear, 2);
    CHECK(!group_membership_violation(gl2, M(2, 2, {1, 0, 0, 2})).has_value());
    CHECK(group_membership_violation(gl2, M(2, 2, {1, 2, 2, 4})) == "matrix is not invertible");
    CHECK(group_membership_violation(sl2, M(2, 2, {1, 0, 0, 2})) == "determinant is not 1");
    CHECK(!group_membership_violation(sl2, M(2, 2, {1, 1, 0, 1})).has_value());
    CHECK(group_membership_violation(gl2, Matrix::identity(3)) == "matrix has the wrong shape");

    CHECK(in_lie_algebra(sl2, M(2, 2, {1, 0, 0, -1})));
    CHECK(!in_lie_algebra(sl2, Matrix::identity(2)));
    CHECK(in_lie_algebra(gl2, Matrix::identity(2)));
}

TEST_CASE("subspace coordinates") {
    const auto gl2 = lie_algebra_basis(make_group_spec(GroupKind::GeneralLinear, 2));
    const Matrix x = M(2, 2, {1, 2, 3, 4});
    const auto c = coordinates_in(gl2, x);
    REQUIRE(c.has_value());
    CHECK(from_coordinates(gl2, *c) == x);
    CHECK(contains(gl2, x));

    const auto diag = make_lie_subspace(
        2, {M(2, 2, {1, 0, 0, 0}), M(2, 2, {0, 0, 0, 1})});
    CHECK(contains(diag, M(2, 2, {5, 0, 0, -1})));
    CHECK(!contains(diag, M(2, 2, {0, 1, 0, 0})));
    CHECK_THROWS_AS(make_lie_subspace(2, {Matrix::identity(2), Matrix::identity(2)}),
                    Error);  // dependent basis
}

TEST_CASE("adjoint operators") {
    const auto gl2 = lie_algebra_basis(make_group_spec(GroupKind::GeneralLinear, 2));
    const Matrix g = M(2, 2, {1, 0, 0, 2});
    // Basis order E00, E01, E10, E11: Ad(g) scales E01 by 1/2 and E10 by 2.
    Matrix expected(4, 4);
    expected.at(0, 0) = FieldElement(1);
    expected.at(1, 1) = FieldElement(Rational(1, 2));
    expected.at(2, 2) = FieldElement(2);
    expected.at(3, 3) = FieldElement(1);
    CHECK(ad_operator_group(g, gl2) == expected);

    Matrix expected_ad(4, 4);
    expected_ad.at(1, 1) = FieldElement(-1);
    expected_ad.at(2, 2) = FieldElement(1);
    CHECK(ad_operator_lie(g, gl2) == expected_ad);

    // A non-invariant subspace is rejected.
    const auto line = make_lie_subspace(2, {M(2, 2, {0, 1, 0, 0})});
    CHECK_THROWS_AS(ad_operator_group(M(2, 2, {0, 1, 1, 0}), line), NotInvariant);
}

TEST_CASE("inertial data for a cyclic group of order 3") {
    const Matrix r = M(2, 2, {0, -1, 1, -1});
    const Matrix r2 = r * r;
    const std::vector<std::string> labels{"g0", "g1", "g2"};
    const std::vector<Matrix> mats{Matrix::identity(2), r, r2};

    const std::map<std::string, std::string> id_sigma{
        {"g0", "g0"}, {"g1", "g1"}, {"g2", "g2"}};
    const auto d = InertialData::make(labels, mats, id_sigma);
    CHECK(d.size() == 3);
    CHECK(d.identity_index == 0);
    CHECK(d.sigma_order() == 1);
    CHECK(d.table[1][2] == 0);  // r * r^2 = 1
    CHECK(d.index_of("g2") == 2);
    CHECK_THROWS_AS(d.index_of("nope"), ParseError);

    const std::map<std::string, std::string> inv_sigma{
        {"g0", "g0"}, {"g1", "g2"}, {"g2", "g1"}};
    CHECK(InertialData::make(labels, mats, inv_sigma).sigma_order() == 2);

    // Failure modes.
    CHECK_THROWS_AS(InertialData::make({"a", "a", "b"}, mats, id_sigma), ParseError);
    CHECK_THROWS_AS(
        InertialData::make({"g0", "g1"}, {Matrix::identity(2), M(2, 2, {2, 0, 0, 1})},
                           {{"g0", "g0"}, {"g1", "g1"}}),
        InvalidTriple);  // not closed
    CHECK_THROWS_AS(InertialData::make(labels, mats, {{"g0", "g0"}, {"g1", "g1"}}), ParseError);
    CHECK_THROWS_AS(
        InertialData::make(labels, mats, {{"g0", "g0"}, {"g1", "g0"}, {"g2", "g2"}}),
        InvalidTriple);  // not a bijection
    CHECK_THROWS_AS(
        InertialData::make(labels, mats, {{"g0", "g1"}, {"g1", "g0"}, {"g2", "g2"}}),
        InvalidTriple);  // bijection but not an automorphism
}

TEST_CASE("invariant subalgebras and centralizers") {
    const auto gl2 = lie_algebra_basis(make_group_spec(GroupKind::GeneralLinear, 2));
    const Matrix r = M(2, 2, {0, -1, 1, -1});
    const auto d = InertialData::make(
        {"g0", "g1", "g2"}, {Matrix::identity(2), r, r * r},
        {{"g0", "g0"}, {"g1", "g1"}, {"g2", "g2"}});
    const auto inv = invariant_subalgebra(d, gl2);
    CHECK(inv.dim() == 2);  // span{1, r}
    CHECK(contains(inv, Matrix::identity(2)));
    CHECK(contains(inv, r));
    CHECK(is_bracket_closed(inv));

    const auto trivial = InertialData::make({"e"}, {Matrix::identity(2)}, {{"e", "e"}});
    CHECK(invariant_subalgebra(trivial, gl2).dim() == 4);

    CHECK(centralizer_subspace({M(2, 2, {1, 0, 0, 2})}, {}, gl2).dim() == 2);
    CHECK(centralizer_subspace({}, {M(2, 2, {0, 1, 0, 0})}, gl2).dim() == 2);
    CHECK(centralizer_subspace({}, {}, gl2).dim() == 4);
}
