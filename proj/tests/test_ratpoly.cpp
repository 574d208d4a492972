#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wdwalk/ratpoly.hpp"

using namespace wdwalk;
using qp::QPoly;

namespace {
QPoly P(std::initializer_list<long> cs) {
    QPoly p;
    for (long c : cs) p.emplace_back(c);
    qp::normalize(p);
    return p;
}
}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    const QPoly a = P({1, 2, 1});  // (x+1)^2
    const QPoly b = P({-1, 1});    // x-1
    CHECK(qp::degree(a) == 2);
    CHECK(qp::mul(b, b) == P({1, -2, 1}));
    const auto [q, r] = qp::divmod(a, b);
    CHECK(qp::add(qp::mul(q, b), r) == a);
    CHECK(qp::degree(r) < qp::degree(b));
    CHECK(qp::eval(a, Rational(2)) == Rational(9));
    CHECK(qp::is_zero(qp::sub(a, a)));
}

TEST_CASE("gcd and extended gcd") {
    const QPoly a = qp::mul(P({-1, 1}), P({1, 1}));   // x^2-1
    const QPoly b = qp::mul(P({-1, 1}), P({2, 1}));   // (x-1)(x+2)
    CHECK(qp::gcd_monic(a, b) == P({-1, 1}));
    const auto [g, u, v] = qp::xgcd(P({0, 0, 1}), P({1, 1}));  // x^2 and x+1 coprime
    CHECK(g == P({1}));
    CHECK(qp::add(qp::mul(u, P({0, 0, 1})), qp::mul(v, P({1, 1}))) == P({1}));
}

TEST_CASE("squarefree machinery") {
    const QPoly f = qp::mul(qp::mul(P({-1, 1}), P({-1, 1})), P({2, 1}));
    CHECK(qp::squarefree_part(f) == qp::monic(qp::mul(P({-1, 1}), P({2, 1}))));
    CHECK(!qp::is_squarefree(f));
    CHECK(qp::is_squarefree(P({-2, 0, 1})));
    const auto dec = qp::squarefree_decomposition(f);
    QPoly re = P({1});
    for (const auto& [part, mult] : dec)
        for (int i = 0; i < mult; ++i) re = qp::mul(re, part);
    CHECK(qp::monic(re) == qp::monic(f));
}

TEST_CASE("factorization oracles") {
    // x^4 - 1 = (x-1)(x+1)(x^2+1)
    const auto f1 = qp::factor(P({-1, 0, 0, 0, 1}));
    REQUIRE(f1.size() == 3);
    CHECK(f1[0].first == P({-1, 1}));
    CHECK(f1[1].first == P({1, 1}));
    CHECK(f1[2].first == P({1, 0, 1}));
    for (const auto& [p, m] : f1) CHECK(m == 1);

    // x^2 - 2x + 1 = (x-1)^2
    const auto f2 = qp::factor(P({1, -2, 1}));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].first == P({-1, 1}));
    CHECK(f2[0].second == 2);

    // x^3 - 2 is irreducible
    CHECK(qp::is_irreducible(P({-2, 0, 0, 1})));
    CHECK(!qp::is_irreducible(P({-1, 0, 1})));

    // A bigger mixed product, non-monic with a power of x
    const QPoly big =
        qp::mul(qp::mul(P({0, 3}), P({1, 3, 1})), qp::mul(P({7, -1, 0, 1}), P({7, -1, 0, 1})));
    const auto f3 = qp::factor(big);
    QPoly re = P({3});
    for (const auto& [p, m] : f3)
        for (int i = 0; i < m; ++i) re = qp::mul(re, p);
    CHECK(re == big);
}

TEST_CASE("random reassembly property") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 12; ++trial) {
        QPoly prod = P({1});
        const int parts = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < parts; ++i) {
            QPoly p;
            const int d = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k <= d; ++k)
                p.emplace_back(static_cast<long>(rng() % 11) - 5);
            qp::normalize(p);
            if (qp::is_zero(p)) p = P({1, 1});
            if (qp::degree(p) == 0) p = P({2, 1});
            prod = qp::mul(prod, p);
        }
        const auto factors = qp::factor(prod);
        QPoly re{qp::leading(prod)};
        for (const auto& [p, m] : factors) {
            CHECK(qp::is_irreducible(p));
            for (int i = 0; i < m; ++i) re = qp::mul(re, p);
        }
        CHECK(re == prod);
    }
}

TEST_CASE("integer roots") {
    // (x-3)(x+5)^2 x
    const QPoly f = qp::mul(qp::mul(P({-3, 1}), qp::mul(P({5, 1}), P({5, 1}))), P({0, 1}));
    CHECK(qp::integer_roots(f) == std::vector<long>{-5, 0, 3});
    CHECK(qp::integer_roots(P({1, 0, 1})).empty());
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(qp::cyclotomic(1) == P({-1, 1}));
    CHECK(qp::cyclotomic(2) == P({1, 1}));
    CHECK(qp::cyclotomic(3) == P({1, 1, 1}));
    CHECK(qp::cyclotomic(4) == P({1, 0, 1}));
    CHECK(qp::cyclotomic(6) == P({1, -1, 1}));
    CHECK(qp::cyclotomic(12) == P({1, 0, -1, 0, 1}));
}

TEST_CASE("resultants with declared degrees") {
    // Res(x^2-2, x^2-3) = product of (b^2 - 2) over roots b of x^2-3 = 1
    CHECK(qp::sylvester_resultant(P({-2, 0, 1}), 2, P({-3, 0, 1}), 2) == Rational(1));
    // Res(x-a, x-b) = a - b  (convention: product of the second over roots of the first)
    CHECK(qp::sylvester_resultant(P({-2, 1}), 1, P({-7, 1}), 1) == Rational(-5));
    // Shared root makes it vanish
    CHECK(qp::sylvester_resultant(P({-1, 1}), 1, P({-1, 0, 1}), 2) == Rational(0));
}

TEST_CASE("Lagrange interpolation") {
    std::vector<Rational> xs{Rational(0), Rational(1), Rational(-1)};
    std::vector<Rational> ys{Rational(1), Rational(3), Rational(1)};  // 1 + x + x^2
    CHECK(qp::lagrange_interpolate(xs, ys) == P({1, 1, 1}));
}
