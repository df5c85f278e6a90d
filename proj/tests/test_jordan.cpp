#include <catch2/catch_amalgamated.hpp>

#include "charvar/jordan.hpp"

using namespace charvar;

namespace {

Matrix<Rationals> diag12(const Rationals& q) {
    return Matrix<Rationals>::from_ints(q, {{1, 0}, {0, 2}});
}

Matrix<Rationals> single_block3(const Rationals& q) {
    return Matrix<Rationals>::from_ints(q, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
}

Matrix<Rationals> blocks21(const Rationals& q) {
    return Matrix<Rationals>::from_ints(q, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
}

Matrix<PrimeField> jordan_matrix(const PrimeField& k,
                                 const std::vector<std::pair<std::int64_t, std::vector<int>>>& bl) {
    int n = 0;
    for (auto& [e, part] : bl)
        for (int r : part) n += r;
    Matrix<PrimeField> j(k, n, n);
    int at = 0;
    for (auto& [e, part] : bl)
        for (int len : part) {
            for (int t = 0; t < len; ++t) {
                j(at + t, at + t) = k.from_int(e);
                if (t + 1 < len) j(at + t, at + t + 1) = k.one();
            }
            at += len;
        }
    return j;
}

}  // namespace

TEST_CASE("jordan_type on the worked examples", "[jordan]") {
    Rationals q;
    auto jt = jordan_type(diag12(q));
    REQUIRE(jt.blocks.size() == 2);
    REQUIRE(jt.blocks[0].eigenvalue == BigRational(1));
    REQUIRE(jt.blocks[0].partition == std::vector<int>{1});
    REQUIRE(jt.blocks[1].eigenvalue == BigRational(2));
    REQUIRE(jt.blocks[1].partition == std::vector<int>{1});

    auto jt3 = jordan_type(single_block3(q));
    REQUIRE(jt3.blocks.size() == 1);
    REQUIRE(jt3.blocks[0].partition == std::vector<int>{3});

    auto jt21 = jordan_type(blocks21(q));
    REQUIRE(jt21.blocks.size() == 1);
    REQUIRE(jt21.blocks[0].partition == std::vector<int>{2, 1});

    auto comp = Matrix<Rationals>::from_ints(q, {{0, -1}, {1, 0}});
    try {
        jordan_type(comp);
        FAIL("expected EigenvaluesNotInField");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::eigenvalues_not_in_field);
    }
}

TEST_CASE("jordan_type recovers partitions from conjugated block matrices", "[jordan]") {
    PrimeField f5(5);
    std::mt19937_64 rng(101);
    std::vector<std::vector<std::pair<std::int64_t, std::vector<int>>>> specs = {
        {{1, {2, 1}}},
        {{1, {3}}, {2, {1}}},
        {{1, {2, 2}}},
        {{2, {1}}, {3, {1}}, {4, {1}}},
        {{1, {1, 1}}, {2, {2}}},
    };
    for (const auto& spec_blocks : specs) {
        auto j = jordan_matrix(f5, spec_blocks);
        auto g = random_gl(f5, j.rows(), rng);
        auto m = g * j * mat_inverse(g);
        auto jt = jordan_type(m);
        REQUIRE(jt.blocks.size() == spec_blocks.size());
        for (std::size_t i = 0; i < spec_blocks.size(); ++i) {
            REQUIRE(jt.blocks[i].eigenvalue == f5.from_int(spec_blocks[i].first));
            REQUIRE(jt.blocks[i].partition == spec_blocks[i].second);
        }
    }
}

TEST_CASE("shuffle and type counts on paper-pinned shapes", "[jordan]") {
    TableauShape big{{3, 2, 2, 1}, {2, 1}};
    REQUIRE(count_shuffles(big) == 831600);
    REQUIRE(count_shuffled_jordan_types(big) == 415800);

    REQUIRE(count_shuffled_jordan_types(TableauShape{{3, 1}}) == 4);
    REQUIRE(count_shuffled_jordan_types(TableauShape{{5}}) == 1);
    REQUIRE(count_shuffles(TableauShape{{2, 1}}) == 3);
    REQUIRE(count_shuffled_jordan_types(TableauShape{{2, 1}}) == 3);
    REQUIRE(count_shuffles(TableauShape{{1, 1}}) == 2);
    REQUIRE(count_shuffled_jordan_types(TableauShape{{1, 1}}) == 1);
    REQUIRE(count_shuffles(TableauShape{{1}, {1}}) == 2);
    REQUIRE(count_shuffled_jordan_types(TableauShape{{1}, {1}}) == 2);
}

TEST_CASE("enumeration matches closed-form counts", "[jordan]") {
    std::vector<TableauShape> shapes = {
        {{2, 1}}, {{1, 1}}, {{1}, {1}}, {{3, 1}}, {{2, 2}}, {{2, 1, 1}},
        {{2, 1}, {2, 1}}, {{1, 1}, {1, 1}}, {{3}, {2}, {1}},
    };
    for (const auto& shape : shapes) {
        auto shuffles = enumerate_shuffles(shape);
        auto types = enumerate_shuffled_jordan_types(shape);
        REQUIRE(BigInt(shuffles.size()) == count_shuffles(shape));
        REQUIRE(BigInt(types.size()) == count_shuffled_jordan_types(shape));
        for (std::size_t i = 0; i < shuffles.size(); ++i) {
            REQUIRE(shuffle_valid_for(shuffles[i], shape));
            if (i > 0) REQUIRE(shuffles[i - 1] < shuffles[i]);
        }
        // canonicalization maps every shuffle onto an enumerated type
        for (const auto& s : shuffles) {
            ShuffledJordanType t(shape, s);
            REQUIRE(std::find(types.begin(), types.end(), t) != types.end());
        }
    }
}

TEST_CASE("enumeration budget is enforced", "[jordan]") {
    TableauShape big{{3, 2, 2, 1}, {2, 1}};
    REQUIRE_THROWS_AS(enumerate_shuffles(big, 1000), budget_error);
}

TEST_CASE("shuffled matrices of diag(1,2)", "[jordan]") {
    Rationals q;
    auto jw = jw_set(diag12(q));
    REQUIRE(jw.size() == 2);
    REQUIRE(std::find(jw.begin(), jw.end(), Matrix<Rationals>::from_ints(q, {{1, 0}, {0, 2}})) !=
            jw.end());
    REQUIRE(std::find(jw.begin(), jw.end(), Matrix<Rationals>::from_ints(q, {{2, 0}, {0, 1}})) !=
            jw.end());
}

TEST_CASE("shuffled matrices of the [2,1] single-eigenvalue type", "[jordan]") {
    Rationals q;
    auto jw = jw_set(blocks21(q));
    REQUIRE(jw.size() == 3);
    // the three matrices with a single 1 at (1,2), (1,3), (2,3)
    auto e12 = Matrix<Rationals>::from_ints(q, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
    auto e13 = Matrix<Rationals>::from_ints(q, {{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
    auto e23 = Matrix<Rationals>::from_ints(q, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
    for (const auto& m : {e12, e13, e23})
        REQUIRE(std::find(jw.begin(), jw.end(), m) != jw.end());

    auto single = jw_set(single_block3(q));
    REQUIRE(single.size() == 1);
    REQUIRE(single[0] == single_block3(q));
}

TEST_CASE("jw_set members all share the Jordan type of phi", "[jordan]") {
    PrimeField f5(5);
    std::mt19937_64 rng(55);
    for (int t = 0; t < 15; ++t) {
        auto b = random_borel(f5, 3, rng);
        auto jt = jordan_type(b);
        auto jw = jw_set(b);
        REQUIRE(BigInt(jw.size()) == count_shuffled_jordan_types(jt));
        for (const auto& z : jw) {
            REQUIRE(in_borel(z));
            REQUIRE(jordan_type(z) == jt);
        }
        for (std::size_t i = 0; i < jw.size(); ++i)
            for (std::size_t j = i + 1; j < jw.size(); ++j) REQUIRE(jw[i] != jw[j]);
    }
}

TEST_CASE("classify_invariant_flag on the three worked flags", "[jordan]") {
    Rationals q;
    auto phi = blocks21(q);
    auto mk_flag = [&](std::vector<std::vector<std::int64_t>> v1,
                       std::vector<std::vector<std::int64_t>> v2) {
        std::vector<Subspace<Rationals>> steps;
        steps.push_back(Subspace<Rationals>::from_rows(Matrix<Rationals>::from_ints(q, v1)));
        steps.push_back(Subspace<Rationals>::from_rows(Matrix<Rationals>::from_ints(q, v2)));
        steps.push_back(Subspace<Rationals>::full(q, 3));
        return Flag<Rationals>(steps);
    };
    auto f0 = mk_flag({{1, 0, 0}}, {{1, 0, 0}, {0, 1, 0}});
    auto fp = mk_flag({{0, 1, 0}}, {{1, 0, 0}, {0, 1, 0}});
    auto fpp = mk_flag({{0, 1, 0}}, {{0, 1, 0}, {0, 0, 1}});

    auto t0 = classify_invariant_flag(phi, f0);
    auto tp = classify_invariant_flag(phi, fp);
    auto tpp = classify_invariant_flag(phi, fpp);
    REQUIRE(!(t0 == tp));
    REQUIRE(!(t0 == tpp));
    REQUIRE(!(tp == tpp));

    // the one-parameter family F^c is equivalent to F^0
    auto fc = mk_flag({{1, 2, 0}}, {{1, 0, 0}, {0, 1, 0}});
    REQUIRE(classify_invariant_flag(phi, fc) == t0);

    // box sequences; row 1 is the length-2 row, row 2 the length-1 row
    REQUIRE(t0.canonical().order == std::vector<TableauBox>{{1, 2, 1}, {1, 1, 1}, {1, 1, 2}});
    REQUIRE(tp.canonical().order == std::vector<TableauBox>{{1, 1, 1}, {1, 2, 1}, {1, 1, 2}});
    REQUIRE(tpp.canonical().order == std::vector<TableauBox>{{1, 1, 1}, {1, 1, 2}, {1, 2, 1}});
}

TEST_CASE("classify on diag(1,2) distinguishes the two flags", "[jordan]") {
    Rationals q;
    auto phi = diag12(q);
    auto std2 = standard_flag(q, 2);
    auto opp = Flag<Rationals>::from_basis(Matrix<Rationals>::from_ints(q, {{0, 1}, {1, 0}}));
    auto t_std = classify_invariant_flag(phi, std2);
    auto t_opp = classify_invariant_flag(phi, opp);
    REQUIRE(!(t_std == t_opp));
    REQUIRE(t_std.canonical().order == std::vector<TableauBox>{{1, 1, 1}, {2, 1, 1}});
    REQUIRE(t_opp.canonical().order == std::vector<TableauBox>{{2, 1, 1}, {1, 1, 1}});

    auto w0 = Matrix<Rationals>::from_ints(q, {{0, 1}, {1, 0}});
    try {
        classify_invariant_flag(w0, std2);
        FAIL("expected NotInvariant");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::not_invariant);
    }
}

TEST_CASE("the single 3-block admits only the standard flag", "[jordan]") {
    PrimeField f2(2);
    auto phi = Matrix<PrimeField>::from_ints(f2, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
    auto flags = invariant_flags_bruteforce(phi);
    REQUIRE(flags.size() == 1);
    REQUIRE(flags[0] == standard_flag(f2, 3));
}

TEST_CASE("identity fixes every flag; diag(1,2) fixes exactly two", "[jordan]") {
    PrimeField f2(2);
    auto id2 = Matrix<PrimeField>::identity(f2, 2);
    REQUIRE(invariant_flags_bruteforce(id2).size() == 3);  // q + 1 lines in F_2^2

    PrimeField f5(5);
    auto d = Matrix<PrimeField>::from_ints(f5, {{1, 0}, {0, 2}});
    REQUIRE(invariant_flags_bruteforce(d).size() == 2);
}

TEST_CASE("flag_from_type round trips", "[jordan]") {
    Rationals q;
    auto phi = diag12(q);
    auto types = enumerate_shuffled_jordan_types(jordan_type(phi).shape());
    REQUIRE(types.size() == 2);
    auto opp = Flag<Rationals>::from_basis(Matrix<Rationals>::from_ints(q, {{0, 1}, {1, 0}}));
    bool saw_opp = false;
    for (const auto& t : types) {
        auto f = flag_from_type(phi, t);
        REQUIRE(classify_invariant_flag(phi, f) == t);
        if (f == opp) saw_opp = true;
    }
    REQUIRE(saw_opp);

    auto phi21 = blocks21(q);
    for (const auto& t : enumerate_shuffled_jordan_types(jordan_type(phi21).shape()))
        REQUIRE(classify_invariant_flag(phi21, flag_from_type(phi21, t)) == t);

    ShuffledJordanType wrong(TableauShape{{2}}, enumerate_shuffles({{2}})[0]);
    try {
        flag_from_type(phi, wrong);
        FAIL("expected TypeShapeMismatch");
    } catch (const domain_error& e) {
        REQUIRE(e.code() == errc::type_shape_mismatch);
    }
}

TEST_CASE("round trip over F_5 for split matrices up to n = 4", "[jordan]") {
    PrimeField f5(5);
    std::mt19937_64 rng(404);
    std::vector<std::vector<std::pair<std::int64_t, std::vector<int>>>> specs = {
        {{1, {2}}, {3, {1, 1}}},
        {{2, {2, 2}}},
        {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}},
        {{1, {3, 1}}},
    };
    for (const auto& spec_blocks : specs) {
        auto j = jordan_matrix(f5, spec_blocks);
        auto g = random_gl(f5, j.rows(), rng);
        auto phi = g * j * mat_inverse(g);
        std::size_t n = phi.rows();
        for (const auto& t : enumerate_shuffled_jordan_types(jordan_type(phi).shape())) {
            auto f = flag_from_type(phi, t);
            for (std::size_t i = 1; i <= n; ++i)
                REQUIRE(f.step(i).contains(image(phi, f.step(i))));
            REQUIRE(classify_invariant_flag(phi, f) == t);
        }
    }
}

TEST_CASE("classification is invariant under commuting automorphisms", "[jordan]") {
    PrimeField f3(3);
    std::mt19937_64 rng(77);
    auto phi = Matrix<PrimeField>::from_ints(f3, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
    auto flags = invariant_flags_bruteforce(phi);
    auto basis = commutant_basis(phi);
    int used = 0;
    for (int trial = 0; trial < 200 && used < 60; ++trial) {
        Matrix<PrimeField> psi(f3, 3, 3);
        for (const auto& b : basis) psi = mat_add(psi, scalar_mul(f3.random(rng), b));
        if (!is_invertible(psi)) continue;
        ++used;
        for (const auto& f : flags)
            REQUIRE(classify_invariant_flag(phi, transport_flag(psi, f)) ==
                    classify_invariant_flag(phi, f));
    }
    REQUIRE(used > 0);
}

TEST_CASE("commuting equivalence classes match the worked examples", "[jordan]") {
    PrimeField f2(2);
    auto id2 = Matrix<PrimeField>::identity(f2, 2);
    auto flags_id = invariant_flags_bruteforce(id2);
    REQUIRE(commuting_equivalence_classes(id2, flags_id).size() == 1);

    PrimeField f3(3);
    auto phi21 = Matrix<PrimeField>::from_ints(f3, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
    auto flags21 = invariant_flags_bruteforce(phi21);
    REQUIRE(commuting_equivalence_classes(phi21, flags21).size() == 3);

    PrimeField f5(5);
    auto d12 = Matrix<PrimeField>::from_ints(f5, {{1, 0}, {0, 2}});
    auto flags12 = invariant_flags_bruteforce(d12);
    auto classes = commuting_equivalence_classes(d12, flags12);
    REQUIRE(classes.size() == 2);
    for (const auto& c : classes) REQUIRE(c.size() == 1);
}

TEST_CASE("type partition equals centralizer-search partition on small cases", "[jordan]") {
    PrimeField f2(2);
    std::vector<Matrix<PrimeField>> phis = {
        Matrix<PrimeField>::identity(f2, 2),
        Matrix<PrimeField>::from_ints(f2, {{1, 1}, {0, 1}}),
        Matrix<PrimeField>::from_ints(f2, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}),
        Matrix<PrimeField>::from_ints(f2, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}),
    };
    for (const auto& phi : phis) {
        auto flags = invariant_flags_bruteforce(phi);
        REQUIRE(commuting_equivalence_classes(phi, flags) == centralizer_partition(phi, flags));
    }
}

TEST_CASE("distinct eigenvalues give n! types realized by eigenline sums", "[jordan]") {
    PrimeField f7(7);
    auto phi = Matrix<PrimeField>::from_ints(f7, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    REQUIRE(jw_set(phi).size() == 6);
    auto flags = invariant_flags_bruteforce(phi);
    REQUIRE(flags.size() == 6);
    REQUIRE(commuting_equivalence_classes(phi, flags).size() == 6);
}
