#include <catch2/catch_amalgamated.hpp>

#include "charvar/repvar.hpp"

using namespace charvar;

namespace {

SurfaceType disc_m2() { return {0, 0, 0, 1, {2}}; }
SurfaceType annulus() { return {0, 1, 1, 0, {}}; }

std::vector<SurfaceType> test_grid() {
    std::vector<SurfaceType> grid;
    for (int g = 0; g <= 1; ++g) {
        grid.push_back({g, 1, 1, 0, {}});
        grid.push_back({g, 0, 1, 0, {}});
        for (int m1 = 1; m1 <= 3; ++m1) grid.push_back({g, 0, 0, 1, {m1}});
    }
    return grid;
}

}  // namespace

TEST_CASE("identity tuples satisfy the relation", "[repvar]") {
    PrimeField f3(3);
    for (const auto& t : test_grid()) {
        auto rep = DecoratedRep<PrimeField>::identity_rep(t, 2, f3);
        REQUIRE(verify_relation(rep));
    }
}

TEST_CASE("disc relation forces T12 = T11^-1", "[repvar]") {
    PrimeField f5(5);
    std::mt19937_64 rng(8);
    auto rep = DecoratedRep<PrimeField>::identity_rep(disc_m2(), 2, f5);
    auto x = random_gl(f5, 2, rng);
    rep.T[0][0] = x;
    rep.T[0][1] = mat_inverse(x);
    REQUIRE(verify_relation(rep));
    if (x * x != Matrix<PrimeField>::identity(f5, 2)) {
        rep.T[0][1] = x;
        REQUIRE(!verify_relation(rep));
    }

    rep.T[0][0] = x;
    auto solved = solve_for(rep, {GeneratorId::Kind::delta_seg, 1, 2});
    REQUIRE(solved.T[0][1] == mat_inverse(x));
    REQUIRE(verify_relation(solved));
}

TEST_CASE("single-entry mutation breaks the relation", "[repvar]") {
    PrimeField f5(5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto rep = sample_random({1, 0, 0, 1, {2}}, 2, f5, seed);
        REQUIRE(verify_relation(rep));
        auto mutated = rep;
        auto& entry = mutated.A[0](0, 0);
        entry = f5.add(entry, f5.one());
        REQUIRE(!verify_relation(mutated));
    }
}

TEST_CASE("solve_for on the annulus reports NotInBorel", "[repvar]") {
    PrimeField f5(5);
    auto rep = DecoratedRep<PrimeField>::identity_rep(annulus(), 2, f5);
    auto g = Matrix<PrimeField>::from_ints(f5, {{1, 0}, {1, 1}});  // inverse is not in B
    rep.M[0] = g;
    try {
        solve_for(rep, {GeneratorId::Kind::delta, 1, 0});
        FAIL("expected NotInBorel");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::not_in_borel);
    }
    auto b = Matrix<PrimeField>::from_ints(f5, {{2, 1}, {0, 3}});
    rep.M[0] = mat_inverse(b);
    auto solved = solve_for(rep, {GeneratorId::Kind::delta, 1, 0});
    REQUIRE(solved.N[0] == b);
    REQUIRE(verify_relation(solved));

    try {
        solve_for(rep, {GeneratorId::Kind::alpha, 1, 0});
        FAIL("expected CannotEliminate");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::cannot_eliminate);
    }
}

TEST_CASE("solve_for round-trips every eliminable slot", "[repvar]") {
    PrimeField f5(5);
    for (const auto& t : test_grid()) {
        auto rep = sample_random(t, 2, f5, 99);
        auto pres = rep_presentation(rep);
        for (const auto& g : pres.generators) {
            if (!is_eliminable(g)) continue;
            auto resolved = solve_for(rep, g, pres);
            REQUIRE(resolved == rep);
        }
    }
}

TEST_CASE("sampler determinism and relation invariant", "[repvar]") {
    PrimeField f3(3);
    for (const auto& t : test_grid()) {
        auto a = sample_random(t, 2, f3, 123);
        auto b = sample_random(t, 2, f3, 123);
        REQUIRE(a == b);
        auto c = sample_random(t, 2, f3, 124);
        REQUIRE(verify_relation(a));
        REQUIRE(verify_relation(c));
        a.validate_decorations();
    }
}

TEST_CASE("disc sample is determined by one free matrix", "[repvar]") {
    PrimeField f3(3);
    auto rep = sample_random(disc_m2(), 2, f3, 7);
    REQUIRE(rep.T[0][1] == mat_inverse(rep.T[0][0]));
    REQUIRE(rep.C[0] == Matrix<PrimeField>::identity(f3, 2));
}

TEST_CASE("mixed conjugation preserves relation, Borel condition and pinning", "[repvar]") {
    PrimeField f5(5);
    std::mt19937_64 rng(2024);
    for (const auto& t : test_grid()) {
        auto rep = sample_random(t, 2, f5, 5);
        for (auto cls : {DecorationClass::Fi, DecorationClass::Fr, DecorationClass::PFr}) {
            auto x = random_mixed(t, 2, f5, cls, rng);
            auto moved = mixed_conjugate(x, rep, cls);
            REQUIRE(verify_relation(moved));
            moved.validate_decorations();
        }
    }
}

TEST_CASE("identity mixed element acts trivially; composition law holds", "[repvar]") {
    PrimeField f5(5);
    std::mt19937_64 rng(77);
    SurfaceType t{0, 1, 1, 1, {2}};
    auto rep = sample_random(t, 2, f5, 31);
    auto e = MixedGroupElement<PrimeField>::identity_element(t, 2, f5);
    REQUIRE(mixed_conjugate(e, rep, DecorationClass::Fi) == rep);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = random_mixed(t, 2, f5, DecorationClass::Fi, rng);
        auto y = random_mixed(t, 2, f5, DecorationClass::Fi, rng);
        auto lhs = mixed_conjugate(compose_mixed(x, y), rep, DecorationClass::Fi);
        auto rhs =
            mixed_conjugate(x, mixed_conjugate(y, rep, DecorationClass::Fi), DecorationClass::Fi);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("wrong subgroup factors are rejected", "[repvar]") {
    PrimeField f5(5);
    SurfaceType t = annulus();
    auto rep = sample_random(t, 2, f5, 3);
    auto x = MixedGroupElement<PrimeField>::identity_element(t, 2, f5);
    x.secondary[0] = Matrix<PrimeField>::from_ints(f5, {{2, 1}, {0, 3}});  // in B, not U
    REQUIRE_NOTHROW(mixed_conjugate(x, rep, DecorationClass::Fi));
    try {
        mixed_conjugate(x, rep, DecorationClass::Fr);
        FAIL("expected WrongSubgroup");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::wrong_subgroup);
    }

    auto bad = rep;
    bad.D[0] = Matrix<PrimeField>::from_ints(f5, {{1, 1}, {0, 1}});  // breaks the pinning
    try {
        mixed_conjugate(x, bad, DecorationClass::Fi);
        FAIL("expected PinningViolated");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::pinning_violated);
    }
}

TEST_CASE("dimension formulas", "[repvar]") {
    // g=1, d=1, m=2, r=0, n=2: dim R_G = 4 * 3 = 12 and dim Loc^Fi = 6
    SurfaceType t{1, 0, 0, 1, {2}};
    REQUIRE(dims(t, 2, SpaceKind::rep_variety).value == 12);
    REQUIRE(!dims(t, 2, SpaceKind::rep_variety).stack_caveat);
    REQUIRE(dims(t, 2, SpaceKind::loc_fi).value == 6);

    // pure regular boundary: the formula value is negative, flagged not clamped
    SurfaceType reg{0, 0, 1, 0, {}};
    auto dr = dims(reg, 2, SpaceKind::rep_variety);
    REQUIRE(dr.value == -1);
    REQUIRE(dr.stack_caveat);

    // MonSpace for g=1, s=2 is 3 n^2
    SurfaceType two_holes{1, 1, 1, 0, {}};
    REQUIRE(dims(two_holes, 2, SpaceKind::mon_space).value == 12);
    REQUIRE(dims(two_holes, 3, SpaceKind::mon_space).value == 27);

    SurfaceType closed{2, 0, 0, 0, {}};
    REQUIRE_THROWS_AS(dims(closed, 2, SpaceKind::rep_variety), domain_error);
}

TEST_CASE("dims agrees with the sampler free-parameter inventory", "[repvar]") {
    for (const auto& t : test_grid())
        for (std::size_t n = 1; n <= 3; ++n)
            REQUIRE(dims(t, n, SpaceKind::rep_variety).value ==
                    sampler_free_parameter_count(t, n));
}

TEST_CASE("stack dimension formulas match the nu-shift form", "[repvar]") {
    for (const auto& t : test_grid()) {
        for (std::size_t n = 1; n <= 3; ++n) {
            std::int64_t g = t.g, s = t.holes(), m = t.primary_points(), r = t.r;
            std::int64_t nn = static_cast<std::int64_t>(n * n), nl = static_cast<std::int64_t>(n);
            auto base = [&](std::int64_t nu) {
                return (2 * g + s - 2) * nn + m * (nn - nl + 2 * nu) / 2 - r * nu;
            };
            REQUIRE(dims(t, n, SpaceKind::loc_fi).value == base(0));
            REQUIRE(dims(t, n, SpaceKind::loc_fr).value == base(nl));
            REQUIRE(dims(t, n, SpaceKind::loc_pfr).value == base(nl - 1));
            REQUIRE(dims(t, n, SpaceKind::rep_variety_hat).value ==
                    dims(t, n, SpaceKind::rep_variety).value + nn);
        }
    }
}

TEST_CASE("adjacent positions and strata", "[repvar]") {
    PrimeField f5(5);
    SurfaceType t{0, 0, 0, 1, {2}};
    auto rep = DecoratedRep<PrimeField>::identity_rep(t, 2, f5);
    REQUIRE(adjacent_position(rep, 1, 1) == RelativePosition::identity(2));

    auto w0 = Matrix<PrimeField>::from_ints(f5, {{0, 1}, {1, 0}});
    rep.T[0][0] = w0;
    rep.T[0][1] = mat_inverse(w0);
    REQUIRE(verify_relation(rep));
    REQUIRE(adjacent_position(rep, 1, 1) == RelativePosition::skew_identity(2));

    auto b = Matrix<PrimeField>::from_ints(f5, {{2, 3}, {0, 1}});
    rep.T[0][0] = b;
    rep.T[0][1] = mat_inverse(b);
    REQUIRE(adjacent_position(rep, 1, 1) == RelativePosition::identity(2));

    REQUIRE(stratum(rep).size() == 2);
    REQUIRE_THROWS_AS(adjacent_position(rep, 1, 3), domain_error);
}

TEST_CASE("stratum is constant on B_P orbits", "[repvar]") {
    PrimeField f5(5);
    std::mt19937_64 rng(9);
    SurfaceType t{0, 0, 0, 1, {3}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rep = sample_random(t, 3, f5, seed);
        auto sig = stratum(rep);
        auto x = random_mixed(t, 3, f5, DecorationClass::Fi, rng);
        REQUIRE(stratum(mixed_conjugate(x, rep, DecorationClass::Fi)) == sig);
    }
}

TEST_CASE("monodromy data", "[repvar]") {
    PrimeField f5(5);
    std::mt19937_64 rng(12);

    MonodromyData<PrimeField> trivial{{}, {}, {Matrix<PrimeField>::identity(f5, 2)}};
    REQUIRE(verify_monodromy_data(trivial));

    // g=1, s=1: M_1 must equal [A,B]^-1
    auto a = random_gl(f5, 2, rng), b = random_gl(f5, 2, rng);
    MonodromyData<PrimeField> md{{a}, {b}, {Matrix<PrimeField>::identity(f5, 2)}};
    md = eliminate_mono(md, 1);
    REQUIRE(verify_monodromy_data(md));
    REQUIRE(md.M[0] == mat_inverse(commutator(a, b)));

    // g=0, s=2: M_2 = M_1^-1
    auto m1 = random_gl(f5, 2, rng);
    MonodromyData<PrimeField> md2{{}, {}, {m1, Matrix<PrimeField>::identity(f5, 2)}};
    md2 = eliminate_mono(md2, 2);
    REQUIRE(md2.M[1] == mat_inverse(m1));
    REQUIRE(verify_monodromy_data(md2));

    MonodromyData<PrimeField> none{{a}, {b}, {}};
    REQUIRE_THROWS_AS(eliminate_mono(none, 1), domain_error);
}
