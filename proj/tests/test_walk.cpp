#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "wdwalk/scenario.hpp"
#include "wdwalk/walk.hpp"
#include "wdwalk/wd.hpp"

using namespace wdwalk;

namespace {

Matrix M(std::size_t r, std::size_t c, std::vector<Rational> es) {
    Matrix m(r, c);
    std::size_t k = 0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = FieldElement(es.at(k++));
    return m;
}

InertialData trivial_inertia(std::size_t n) {
    return InertialData::make({"e"}, {Matrix::identity(n)}, {{"e", "e"}});
}

WDTriple gl_triple(std::size_t n, Matrix phi, Matrix nil) {
    const GroupSpec g = make_group_spec(GroupKind::GeneralLinear, n, nullptr);
    return WDTriple{g, trivial_inertia(n), std::move(phi), std::move(nil), Rational(4),
                    FieldElement(Rational(2))};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("unobstructed starts yield empty certificates", "[walk]") {
    const Matrix zero2(2, 2);
    const WDTriple triv = gl_triple(2, Matrix::identity(2), zero2);
    const WalkCertificate c1 = unobstruct(triv);
    CHECK(c1.moves.empty());
    CHECK(c1.final_phi == triv.phi);
    CHECK(c1.final_report.h2 == 0);
    const VerificationReport v1 = verify_certificate(c1);
    CHECK(v1.ok);
    CHECK(v1.failure.empty());
    CHECK(v1.checks > 0);

    const WDTriple st =
        gl_triple(2, M(2, 2, {1, 0, 0, 4}), M(2, 2, {0, 1, 0, 0}));
    const WalkCertificate c2 = unobstruct(st);
    CHECK(c2.moves.empty());
    CHECK(c2.final_phi == st.phi);
    CHECK(verify_certificate(c2).ok);
}

TEST_CASE("obstructed semisimple rank-2 point walks out in one scaling move", "[walk]") {
    const WDTriple d =
        gl_triple(2, M(2, 2, {1, 0, 0, Rational(1, 4)}), Matrix(2, 2));
    REQUIRE(deformation_complex(d).h2 == 1);

    const WalkCertificate cert = unobstruct(d);
    REQUIRE(cert.moves.size() == 1);
    const WalkMove& m = cert.moves.front();
    CHECK(m.kind == MoveKind::CocharScale);
    CHECK(m.start_phi == d.phi);
    CHECK(m.t_start == FieldElement(Rational(1)));
    CHECK(m.t_end == FieldElement(Rational(2)));
    CHECK(m.lambda.weights == std::vector<long>{-1, 1});
    const Matrix target = M(2, 2, {Rational(1, 2), 0, 0, Rational(1, 2)});
    CHECK(m.end_phi == target);
    CHECK(cert.final_phi == target);
    CHECK(cert.final_report.gamma == 4);
    CHECK(cert.final_report.h0 == 4);
    CHECK(cert.final_report.h1 == 4);
    CHECK(cert.final_report.h2 == 0);

    const VerificationReport v = verify_certificate(cert);
    CHECK(v.ok);
    CHECK_FALSE(v.final_obstructed);
}

TEST_CASE("obstructed rank-3 point with monodromy scales by an eigenweight cocharacter",
          "[walk]") {
    const Matrix phi = M(3, 3, {1, 0, 0, 0, 4, 0, 0, 0, Rational(1, 4)});
    const Matrix nil = M(3, 3, {0, 1, 0, 0, 0, 0, 0, 0, 0});
    const WDTriple d = gl_triple(3, phi, nil);
    REQUIRE(deformation_complex(d).h2 == 1);

    const WalkCertificate cert = unobstruct(d);
    // The fiber-semisimplification moves are all trivial here: Phi already
    // equals Psi_s lambda(1/sqrt q) for the adapted cocharacter through N.
    REQUIRE(cert.moves.size() == 1);
    const WalkMove& m = cert.moves.front();
    CHECK(m.kind == MoveKind::CocharScale);
    CHECK(m.t_end == FieldElement(Rational(2)));
    CHECK(m.lambda.weights == std::vector<long>{0, 1});
    const Matrix target = M(3, 3, {2, 0, 0, 0, 8, 0, 0, 0, Rational(1, 4)});
    CHECK(cert.final_phi == target);
    CHECK(cert.final_report.h2 == 0);
    CHECK(verify_certificate(cert).ok);
}

TEST_CASE("non-semisimple starts are straightened before scaling", "[walk]") {
    const Matrix phi0 = M(3, 3, {1, 0, 0, 0, Rational(1, 4), 1, 0, 0, Rational(1, 4)});
    const WDTriple d = gl_triple(3, phi0, Matrix(3, 3));
    REQUIRE(deformation_complex(d).h2 == 1);

    const WalkCertificate cert = unobstruct(d);
    REQUIRE(cert.moves.size() == 2);

    const WalkMove& u = cert.moves[0];
    CHECK(u.kind == MoveKind::UnipotentLine);
    CHECK(u.start_phi == phi0);
    const Matrix s = M(3, 3, {1, 0, 0, 0, Rational(1, 4), 0, 0, 0, Rational(1, 4)});
    CHECK(u.end_phi == s);
    CHECK(u.t_start == FieldElement(Rational(1)));
    CHECK(u.t_end == FieldElement(Rational(0)));
    CHECK(u.y == M(3, 3, {0, 0, 0, 0, 0, 4, 0, 0, 0}));

    const WalkMove& sc = cert.moves[1];
    CHECK(sc.kind == MoveKind::CocharScale);
    CHECK(sc.start_phi == s);
    CHECK(sc.t_end == FieldElement(Rational(2)));
    const Matrix target =
        M(3, 3, {Rational(1, 2), 0, 0, 0, Rational(1, 2), 0, 0, 0, Rational(1, 4)});
    CHECK(sc.end_phi == target);
    CHECK(cert.final_phi == target);
    CHECK(cert.final_report.h2 == 0);
    CHECK(verify_certificate(cert).ok);
}

TEST_CASE("semisimplify_in_fiber strips the unipotent part along a fiber line", "[walk]") {
    const Matrix phi0 = M(3, 3, {1, 0, 0, 0, Rational(1, 4), 1, 0, 0, Rational(1, 4)});
    const WDTriple d = gl_triple(3, phi0, Matrix(3, 3));
    const auto [s, mv] = semisimplify_in_fiber(d);
    CHECK(s == M(3, 3, {1, 0, 0, 0, Rational(1, 4), 0, 0, 0, Rational(1, 4)}));
    CHECK(mv.kind == MoveKind::UnipotentLine);
    CHECK(mv.start_phi == phi0);
    CHECK(mv.end_phi == s);
    CHECK(mv.base == s);
    CHECK(mv.tail == Matrix::identity(3));
    CHECK(mv.y == M(3, 3, {0, 0, 0, 0, 0, 4, 0, 0, 0}));
    // The family really passes through both endpoints.
    const FieldElement r = d.sqrt_q.inverse();
    CHECK(move_family_at(mv, mv.t_start, r) == phi0);
    CHECK(move_family_at(mv, mv.t_end, r) == s);

    // Semisimple input: the move degenerates to a constant family.
    const WDTriple ss = gl_triple(2, M(2, 2, {1, 0, 0, Rational(1, 4)}), Matrix(2, 2));
    const auto [s2, mv2] = semisimplify_in_fiber(ss);
    CHECK(s2 == ss.phi);
    CHECK(mv2.start_phi == mv2.end_phi);
    CHECK(mv2.y.is_zero());
}

TEST_CASE("fiber_semisimple_point straightens a unipotent Steinberg twist", "[walk]") {
    const Matrix phi = M(2, 2, {1, 4, 0, 4});
    const Matrix nil = M(2, 2, {0, 1, 0, 0});
    const WDTriple d = gl_triple(2, phi, nil);
    REQUIRE(validate_triple(d).empty());

    const FiberSemisimplePoint fs = fiber_semisimple_point(d);
    CHECK(fs.psi_s == M(2, 2, {2, 0, 0, 2}));
    CHECK(fs.phi_new == M(2, 2, {1, 0, 0, 4}));
    CHECK(fs.lambda.weights == std::vector<long>{-1, 1});
    REQUIRE(fs.moves.size() == 1);
    const WalkMove& mv = fs.moves.front();
    CHECK(mv.kind == MoveKind::UnipotentLine);
    CHECK(mv.base == fs.psi_s);
    CHECK(mv.tail == M(2, 2, {Rational(1, 2), 0, 0, 2}));
    CHECK(mv.y == M(2, 2, {0, 1, 0, 0}));
    CHECK(mv.end_phi == fs.phi_new);

    // This start already has h^2 = 0, so the dispatcher does not move at all,
    // while the direct second-case walk still records the straightening line.
    CHECK(unobstruct(d).moves.empty());
    const WalkCertificate cert = case2_walk(d);
    REQUIRE(cert.moves.size() == 1);
    CHECK(cert.moves.front().kind == MoveKind::UnipotentLine);
    CHECK(cert.final_phi == M(2, 2, {1, 0, 0, 4}));
    CHECK(cert.final_report.gamma == 4);
    CHECK(cert.final_report.h0 == 1);
    CHECK(cert.final_report.h1 == 1);
    CHECK(cert.final_report.h2 == 0);
    CHECK(verify_certificate(cert).ok);
}

TEST_CASE("the walk engine refuses non-GL ambient groups", "[walk]") {
    const GroupSpec sl = make_group_spec(GroupKind::SpecialLinear, 2, nullptr);
    const WDTriple d{sl, trivial_inertia(2), M(2, 2, {2, 0, 0, Rational(1, 2)}),
                     Matrix(2, 2), Rational(4), FieldElement(Rational(2))};
    REQUIRE(validate_triple(d).empty());
    REQUIRE(deformation_complex(d).h2 == 1);
    CHECK_THROWS_AS(unobstruct(d), UnsupportedGroupKind);
}

TEST_CASE("the verifier rejects tampered certificates", "[walk]") {
    const WDTriple d =
        gl_triple(2, M(2, 2, {1, 0, 0, Rational(1, 4)}), Matrix(2, 2));
    const WalkCertificate good = unobstruct(d);
    REQUIRE(verify_certificate(good).ok);

    SECTION("broken chain closure") {
        WalkCertificate bad = good;
        bad.final_phi = d.phi;
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "final Phi does not close the chain"));
    }
    SECTION("empty walk stopping at an obstructed point") {
        WalkCertificate bad;
        bad.initial = d;
        bad.final_phi = d.phi;
        bad.final_report = deformation_complex(d);
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(v.final_obstructed);
        CHECK(contains(v.failure, "final point is obstructed"));
    }
    SECTION("tampered move endpoint parameter") {
        WalkCertificate bad = good;
        bad.moves.front().t_end = FieldElement(Rational(3));
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "family does not pass through the end"));
    }
    SECTION("tampered move start") {
        WalkCertificate bad = good;
        bad.moves.front().start_phi = M(2, 2, {2, 0, 0, 2});
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "does not start at the cursor"));
    }
    SECTION("forged report at the final point") {
        WalkCertificate bad = good;
        bad.final_report.h1 = 99;
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "stored final report disagrees"));
    }
}

TEST_CASE("the verifier survives malformed witness data", "[walk]") {
    const Matrix phi0 = M(3, 3, {1, 0, 0, 0, Rational(1, 4), 1, 0, 0, Rational(1, 4)});
    const WDTriple d = gl_triple(3, phi0, Matrix(3, 3));
    const WalkCertificate good = unobstruct(d);
    REQUIRE(good.moves.size() == 2);
    REQUIRE(good.moves.front().kind == MoveKind::UnipotentLine);

    SECTION("non-nilpotent Y simply fails instead of throwing") {
        WalkCertificate bad = good;
        bad.moves.front().y = Matrix::identity(3);
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "witness Y is not nilpotent"));
    }
    SECTION("empty cocharacter data simply fails instead of throwing") {
        WalkCertificate bad = good;
        bad.moves.back().lambda = Cocharacter{};
        const VerificationReport v = verify_certificate(bad);
        CHECK_FALSE(v.ok);
        CHECK(contains(v.failure, "degenerate parameter data"));
    }
}

TEST_CASE("generated scenarios walk to unobstructed points with verifiable certificates",
          "[walk][generated]") {
    struct Pick {
        std::uint64_t seed;
        std::size_t n;
        long q;
        const char* templ;
    };
    const std::vector<Pick> picks = {
        {1, 2, 4, "trivial"},   {2, 3, 4, "trivial"},  {3, 3, 4, "cyclic-2"},
        {4, 3, 9, "cyclic-3"},  {5, 4, 25, "trivial"}, {6, 2, 4, "cyclic-6"},
    };
    for (const Pick& p : picks) {
        INFO("seed " << p.seed << " n " << p.n << " q " << p.q << " template " << p.templ);
        const Scenario s = generate_scenario(p.seed, p.n, p.q, p.templ);
        REQUIRE(validate_triple(s.triple).empty());
        const WalkCertificate cert = unobstruct(s.triple);
        CHECK(cert.final_report.h2 == 0);
        const VerificationReport v = verify_certificate(cert);
        CHECK(v.ok);
        CHECK(v.failure.empty());

        // Certificates survive a JSON round trip and still verify.
        const Json j = certificate_to_json(cert);
        const WalkCertificate back = certificate_from_json(j);
        CHECK(back.moves.size() == cert.moves.size());
        CHECK(back.final_phi == cert.final_phi);
        CHECK(verify_certificate(back).ok);
    }
}
