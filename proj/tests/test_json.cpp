#include <catch2/catch_amalgamated.hpp>

#include "charvar/json_io.hpp"

using namespace charvar;

TEST_CASE("field tags round trip", "[json]") {
    FieldTag q{FieldTag::Kind::rationals, 0};
    FieldTag f5{FieldTag::Kind::prime, 5};
    REQUIRE(field_from_json(field_to_json(q)) == q);
    REQUIRE(field_from_json(field_to_json(f5)) == f5);
    REQUIRE(field_to_json(q).dump() == R"({"kind":"Q"})");
    REQUIRE(field_to_json(f5).dump() == R"({"kind":"Fp","p":5})");
    REQUIRE_THROWS_AS(field_from_json(Json{{"kind", "R"}}), domain_error);
    REQUIRE_THROWS_AS(
        visit_field(FieldTag{FieldTag::Kind::prime, 6}, [](const auto&) { return 0; }),
        domain_error);
}

TEST_CASE("scalar encoding per the wire format", "[json]") {
    Rationals q;
    REQUIRE(scalar_to_json(q, q.from_fraction(3, 4)) == Json("3/4"));
    REQUIRE(scalar_to_json(q, q.from_int(5)) == Json("5"));  // denominator omitted
    REQUIRE(scalar_from_json(q, Json("3/4")) == q.from_fraction(3, 4));
    REQUIRE(scalar_from_json(q, Json("-7")) == q.from_int(-7));
    REQUIRE(scalar_from_json(q, Json(-7)) == q.from_int(-7));
    REQUIRE_THROWS_AS(scalar_from_json(q, Json("1/0")), domain_error);
    REQUIRE_THROWS_AS(scalar_from_json(q, Json("x")), domain_error);

    PrimeField f5(5);
    REQUIRE(scalar_to_json(f5, 3) == Json(3));
    REQUIRE(scalar_from_json(f5, Json(-1)) == 4);
    REQUIRE_THROWS_AS(scalar_from_json(f5, Json("3")), domain_error);
}

TEST_CASE("matrices round trip over both fields", "[json]") {
    Rationals q;
    auto m = Matrix<Rationals>::from_rows(
        q, {{q.from_fraction(1, 2), q.zero()}, {q.from_int(-3), q.one()}});
    REQUIRE(matrix_from_json(q, matrix_to_json(m)) == m);

    PrimeField f3(3);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        auto r = random_matrix(f3, 3, 3, rng);
        REQUIRE(matrix_from_json(f3, matrix_to_json(r)) == r);
    }
}

TEST_CASE("flags and relative positions", "[json]") {
    PrimeField f5(5);
    std::mt19937_64 rng(11);
    auto f = random_flag(f5, 3, rng);
    REQUIRE(flag_from_json(f5, flag_to_json(f)) == f);
    RelativePosition pos = RelativePosition::skew_identity(3);
    REQUIRE(relpos_to_json(pos).dump() == "[3,2,1]");
}

TEST_CASE("decorated reps round trip", "[json]") {
    PrimeField f5(5);
    for (auto t : {SurfaceType{0, 1, 1, 0, {}}, SurfaceType{1, 0, 1, 1, {2}},
                   SurfaceType{0, 0, 0, 2, {2, 1}}}) {
        auto rep = sample_random(t, 2, f5, 42);
        auto back = rep_from_json(f5, rep_to_json(rep));
        REQUIRE(back == rep);
        REQUIRE(verify_relation(back));
    }
}

TEST_CASE("generator names parse back", "[json]") {
    for (const char* name : {"a1", "b2", "g1", "n3", "t1_2", "t10_3", "c1", "d2"}) {
        auto g = generator_from_name(name);
        REQUIRE(g.name() == name);
    }
    REQUIRE_THROWS_AS(generator_from_name("z1"), domain_error);
    REQUIRE_THROWS_AS(generator_from_name("t1"), domain_error);
    REQUIRE_THROWS_AS(generator_from_name("a"), domain_error);
}

TEST_CASE("shuffles as box-label sequences", "[json]") {
    TableauShape shape{{2, 1}, {1}};
    for (const auto& s : enumerate_shuffles(shape)) {
        auto j = shuffle_to_json(s);
        auto back = shuffle_from_json(j);
        REQUIRE(back == s);
        REQUIRE(shape_of_shuffle(back) == shape);
    }
    Shuffle s0 = enumerate_shuffles(TableauShape{{2}})[0];
    REQUIRE(shuffle_to_json(s0)[0].get<std::string>() ==
            "\xce\xbb"
            "1:1.1");
}

TEST_CASE("types round trip through their canonical labels", "[json]") {
    TableauShape shape{{2, 2, 1}};
    for (const auto& t : enumerate_shuffled_jordan_types(shape)) {
        auto back = type_from_json(type_to_json(t));
        REQUIRE(back == t);
    }
}

TEST_CASE("presentation serialization carries the documented names", "[json]") {
    auto p = build_presentation({0, 1, 1, 0, {}}, MarkedPoint::secondary(1));
    auto j = presentation_to_json(p);
    REQUIRE(j["pinned"] == "d1");
    REQUIRE(j["generators"].size() == 2);
    REQUIRE(j["generators"][0]["name"] == "g1");
    REQUIRE(j["generators"][1]["name"] == "n1");
    REQUIRE(j["relation"].dump() == R"([["g1",1],["n1",1]])");
}

TEST_CASE("fibre description serialization", "[json]") {
    PrimeField f5(5);
    SurfaceType t{0, 1, 1, 0, {}};
    auto rep = DecoratedRep<PrimeField>::identity_rep(t, 2, f5);
    rep.N[0] = Matrix<PrimeField>::from_ints(f5, {{1, 0}, {0, 2}});
    rep = solve_for(rep, {GeneratorId::Kind::gamma, 1, 0});
    auto j = fibre_to_json(fibre_over(rep), f5);
    REQUIRE(j["cardinality"] == "2");
    REQUIRE(j["generic"] == true);
    REQUIRE(j["per_point"].size() == 1);
    REQUIRE(j["per_point"][0]["jw_count"] == 2);
}

TEST_CASE("census report serialization", "[json]") {
    PrimeField f2(2);
    auto rep = orbit_count({0, 1, 1, 0, {}}, 2, f2, ActionClass::fi);
    auto j = census_report_to_json(rep);
    REQUIRE(j["class"] == "fi");
    REQUIRE(j["method"] == "orbits");
    REQUIRE(j["points"] == 2);
    REQUIRE(j["orbits"] == 2);
}

TEST_CASE("big counts serialize as numbers when they fit", "[json]") {
    REQUIRE(bigint_to_json(BigInt(831600)) == Json(831600));
    BigInt huge = factorial_big(30);
    REQUIRE(bigint_to_json(huge).is_string());
}
