#pragma once

#include <chrono>
#include <cstdlib>
#include <map>
#include <thread>

#include "charvar/covering.hpp"
#include "charvar/repvar.hpp"

namespace charvar {

/// Acting group per marked point for the census: the three decoration
/// classes, plus the full general linear group (which acts on plain groupoid
/// homomorphisms, not on R_G).
enum class ActionClass { fi, fr, pfr, full_g };

inline const char* action_name(ActionClass c) {
    switch (c) {
        case ActionClass::fi: return "fi";
        case ActionClass::fr: return "fr";
        case ActionClass::pfr: return "pfr";
        case ActionClass::full_g: return "g";
    }
    return "?";
}

enum class CountMethod { direct_orbits, burnside };

inline const char* method_name(CountMethod m) {
    return m == CountMethod::direct_orbits ? "orbits" : "burnside";
}

struct CensusOptions {
    std::optional<GeneratorId> eliminate;  // defaults to dependent_slot(t)
    std::int64_t budget = 10'000'000;
    int jobs = 1;
};

namespace detail {

inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::int64_t budget) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > static_cast<std::size_t>(budget) / std::max<std::size_t>(base, 1))
            throw budget_error("enumeration size overflows the budget");
        out *= base;
    }
    return out;
}

}  // namespace detail

/// All matrices over F_q of the given size (budget-guarded).
inline std::vector<Matrix<PrimeField>> all_matrices(const PrimeField& k, std::size_t n,
                                                    std::int64_t budget) {
    std::size_t q = static_cast<std::size_t>(k.modulus());
    std::size_t total = detail::checked_pow(q, n * n, budget);
    std::vector<Matrix<PrimeField>> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t x = code;
        Matrix<PrimeField> m(k, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = static_cast<std::int64_t>(x % q);
                x /= q;
            }
        out.push_back(std::move(m));
    }
    return out;
}

inline std::vector<Matrix<PrimeField>> all_gl(const PrimeField& k, std::size_t n,
                                              std::int64_t budget) {
    std::vector<Matrix<PrimeField>> out;
    for (auto& m : all_matrices(k, n, budget))
        if (is_invertible(m)) out.push_back(std::move(m));
    return out;
}

inline std::vector<Matrix<PrimeField>> all_borel(const PrimeField& k, std::size_t n,
                                                 std::int64_t budget) {
    std::size_t q = static_cast<std::size_t>(k.modulus());
    std::size_t diag = detail::checked_pow(q - 1, n, budget);
    std::size_t upper = detail::checked_pow(q, n * (n - 1) / 2, budget);
    if (diag > static_cast<std::size_t>(budget) / std::max<std::size_t>(upper, 1))
        throw budget_error("Borel group too large for the budget");
    std::vector<Matrix<PrimeField>> out;
    out.reserve(diag * upper);
    for (std::size_t dc = 0; dc < diag; ++dc)
        for (std::size_t uc = 0; uc < upper; ++uc) {
            Matrix<PrimeField> m(k, n, n);
            std::size_t x = dc;
            for (std::size_t i = 0; i < n; ++i) {
                m(i, i) = static_cast<std::int64_t>(1 + x % (q - 1));
                x /= (q - 1);
            }
            std::size_t y = uc;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    m(i, j) = static_cast<std::int64_t>(y % q);
                    y /= q;
                }
            out.push_back(std::move(m));
        }
    return out;
}

inline std::vector<Matrix<PrimeField>> all_unipotent(const PrimeField& k, std::size_t n,
                                                     std::int64_t budget) {
    std::vector<Matrix<PrimeField>> out;
    for (auto& m : all_borel(k, n, budget))
        if (in_unipotent(m)) out.push_back(std::move(m));
    return out;
}

/// The full per-point acting group as a list, for the Burnside count.
inline std::vector<Matrix<PrimeField>> action_group_elements(const PrimeField& k, std::size_t n,
                                                             ActionClass cls,
                                                             std::int64_t budget) {
    switch (cls) {
        case ActionClass::fi: return all_borel(k, n, budget);
        case ActionClass::fr: return all_unipotent(k, n, budget);
        case ActionClass::pfr: {
            std::vector<Matrix<PrimeField>> out;
            for (std::int64_t c = 1; c < k.modulus(); ++c)
                for (const auto& u : all_unipotent(k, n, budget))
                    out.push_back(scalar_mul(k.from_int(c), u));
            return out;
        }
        case ActionClass::full_g: return all_gl(k, n, budget);
    }
    return {};
}

/// A small generating set of the per-point acting group: elementary
/// unipotents, diagonal one-spot primitive roots, and scalars, as needed.
inline std::vector<Matrix<PrimeField>> action_group_generators(const PrimeField& k, std::size_t n,
                                                               ActionClass cls) {
    std::vector<Matrix<PrimeField>> gens;
    auto id = Matrix<PrimeField>::identity(k, n);
    auto w = k.primitive_root();
    auto elementary = [&](std::size_t i, std::size_t j) {
        auto e = id;
        e(i, j) = k.one();
        return e;
    };
    switch (cls) {
        case ActionClass::fr:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) gens.push_back(elementary(i, j));
            break;
        case ActionClass::fi:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) gens.push_back(elementary(i, j));
            if (k.modulus() > 2)
                for (std::size_t i = 0; i < n; ++i) {
                    auto d = id;
                    d(i, i) = w;
                    gens.push_back(d);
                }
            break;
        case ActionClass::pfr:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) gens.push_back(elementary(i, j));
            if (k.modulus() > 2) gens.push_back(scalar_mul(w, id));
            break;
        case ActionClass::full_g:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) gens.push_back(elementary(i, j));
            if (k.modulus() > 2) {
                auto d = id;
                d(0, 0) = w;
                gens.push_back(d);
            }
            break;
    }
    return gens;
}

/// Enumerates every point of R_G(S, P)(F_q) exactly once (or of the plain
/// homomorphism space when hom_space is set, dropping the Borel condition on
/// the boundary loops).  Free generators range over their groups; the
/// eliminated generator is solved from the relation, with a Borel filter when
/// the eliminated slot is a boundary loop.
template <class Visitor>
void enumerate_points(const SurfaceType& t, std::size_t n, const PrimeField& field,
                      const CensusOptions& opts, bool hom_space, Visitor&& visit) {
    t.validate();
    require(t.holes() >= 1, errc::no_holes, "no boundary circles");
    require(t.marked_points() >= 1, errc::no_marked_points, "no marked points");
    auto rep0 = DecoratedRep<PrimeField>::identity_rep(t, n, field);
    auto pres = rep_presentation(rep0);
    GeneratorId dep = opts.eliminate.value_or(dependent_slot(t));
    require(is_eliminable(dep), errc::cannot_eliminate,
            "cannot enumerate with " + dep.name() + " eliminated");

    auto gl = all_gl(field, n, opts.budget);
    auto borel = all_borel(field, n, opts.budget);

    std::vector<GeneratorId> free_slots;
    std::vector<const std::vector<Matrix<PrimeField>>*> ranges;
    double total = 1;
    for (const auto& g : pres.generators) {
        if (g == dep) continue;
        free_slots.push_back(g);
        bool borel_slot = g.kind == GeneratorId::Kind::delta && !hom_space;
        ranges.push_back(borel_slot ? &borel : &gl);
        total *= static_cast<double>(ranges.back()->size());
        if (total > static_cast<double>(opts.budget))
            throw budget_error("point enumeration exceeds the budget");
    }

    std::vector<std::size_t> counter(free_slots.size(), 0);
    DecoratedRep<PrimeField> rep = rep0;
    for (;;) {
        for (std::size_t s = 0; s < free_slots.size(); ++s)
            rep.value(free_slots[s]) = (*ranges[s])[counter[s]];
        auto solved = detail::solve_slot_value(rep, dep, pres);
        bool keep =
            hom_space || dep.kind != GeneratorId::Kind::delta || in_borel(solved);
        if (keep) {
            rep.value(dep) = solved;
            visit(rep);
        }
        std::size_t pos = 0;
        while (pos < counter.size() && counter[pos] + 1 == ranges[pos]->size()) counter[pos++] = 0;
        if (pos == counter.size()) break;
        ++counter[pos];
    }
}

inline std::vector<DecoratedRep<PrimeField>> enumerate_points(const SurfaceType& t, std::size_t n,
                                                              const PrimeField& field,
                                                              const CensusOptions& opts = {},
                                                              bool hom_space = false) {
    std::vector<DecoratedRep<PrimeField>> out;
    enumerate_points(t, n, field, opts, hom_space,
                     [&](const DecoratedRep<PrimeField>& rep) { out.push_back(rep); });
    return out;
}

namespace detail {

inline std::vector<std::int64_t> rep_key(const DecoratedRep<PrimeField>& rep) {
    std::vector<std::int64_t> key;
    auto push = [&](const Matrix<PrimeField>& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) key.push_back(m(i, j));
    };
    for (const auto& v : {&rep.A, &rep.B, &rep.M, &rep.N, &rep.C, &rep.D})
        for (const auto& m : *v) push(m);
    for (const auto& row : rep.T)
        for (const auto& m : row) push(m);
    return key;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::size_t roots() {
        std::size_t c = 0;
        for (std::size_t i = 0; i < parent.size(); ++i)
            if (find(i) == i) ++c;
        return c;
    }
};

/// All single-point mixed group elements built from the per-point generators.
inline std::vector<MixedGroupElement<PrimeField>> single_point_moves(
    const SurfaceType& t, std::size_t n, const PrimeField& field, ActionClass cls) {
    auto gens = action_group_generators(field, n, cls);
    std::vector<MixedGroupElement<PrimeField>> moves;
    auto base = MixedGroupElement<PrimeField>::identity_element(t, n, field);
    for (int i = 1; i <= t.d; ++i)
        for (int j = 1; j <= t.m[i - 1]; ++j)
            for (const auto& g : gens) {
                auto x = base;
                x.primary[i - 1][j - 1] = g;
                moves.push_back(std::move(x));
            }
    for (int i = 1; i <= t.r; ++i)
        for (const auto& g : gens) {
            auto x = base;
            x.secondary[i - 1] = g;
            moves.push_back(std::move(x));
        }
    return moves;
}

}  // namespace detail

struct CensusReport {
    SurfaceType surface;
    std::size_t n = 1;
    std::int64_t q = 2;
    ActionClass cls = ActionClass::fi;
    CountMethod method = CountMethod::direct_orbits;
    std::int64_t points = 0;
    std::int64_t orbits = 0;
    std::int64_t millis = 0;
};

/// Number of mixed-conjugation orbits on the enumerated points.  Orbits are
/// closed under single-point generator moves (union-find); the Burnside
/// variant averages fixed points over the whole acting group instead.
inline CensusReport orbit_count(const SurfaceType& t, std::size_t n, const PrimeField& field,
                                ActionClass cls, CountMethod method = CountMethod::direct_orbits,
                                const CensusOptions& opts = {}) {
    auto start = std::chrono::steady_clock::now();
    bool hom_space = cls == ActionClass::full_g;
    auto points = enumerate_points(t, n, field, opts, hom_space);

    std::map<std::vector<std::int64_t>, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index[detail::rep_key(points[i])] = i;
    auto locate = [&](const DecoratedRep<PrimeField>& rep) {
        auto it = index.find(detail::rep_key(rep));
        require(it != index.end(), errc::invalid_argument,
                "moved point escaped the enumerated set");
        return it->second;
    };

    std::int64_t orbits = 0;
    if (method == CountMethod::direct_orbits) {
        auto moves = detail::single_point_moves(t, n, field, cls);
        detail::UnionFind uf(points.size());
        int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || points.size() < 64) {
            for (std::size_t i = 0; i < points.size(); ++i)
                for (const auto& x : moves) uf.unite(i, locate(apply_mixed(x, points[i])));
        } else {
            // deterministic partition of the point range; unions merged after
            std::vector<std::vector<std::pair<std::size_t, std::size_t>>> partial(jobs);
            std::vector<std::thread> workers;
            std::size_t chunk = (points.size() + jobs - 1) / jobs;
            for (int w = 0; w < jobs; ++w)
                workers.emplace_back([&, w]() {
                    std::size_t lo = w * chunk, hi = std::min(points.size(), lo + chunk);
                    for (std::size_t i = lo; i < hi; ++i)
                        for (const auto& x : moves)
                            partial[w].push_back({i, locate(apply_mixed(x, points[i]))});
                });
            for (auto& th : workers) th.join();
            for (const auto& batch : partial)
                for (const auto& [a, b] : batch) uf.unite(a, b);
        }
        orbits = static_cast<std::int64_t>(uf.roots());
    } else {
        auto group = action_group_elements(field, n, cls, opts.budget);
        std::size_t marked = static_cast<std::size_t>(t.marked_points());
        std::size_t group_size = detail::checked_pow(group.size(), marked, opts.budget);
        if (static_cast<double>(group_size) * static_cast<double>(points.size()) >
            static_cast<double>(opts.budget))
            throw budget_error("Burnside sweep exceeds the budget");
        BigInt fixed_total = 0;
        std::vector<std::size_t> counter(marked, 0);
        auto x = MixedGroupElement<PrimeField>::identity_element(t, n, field);
        for (;;) {
            std::size_t slot = 0;
            for (int i = 0; i < t.d; ++i)
                for (int j = 0; j < t.m[i]; ++j) x.primary[i][j] = group[counter[slot++]];
            for (int i = 0; i < t.r; ++i) x.secondary[i] = group[counter[slot++]];
            for (const auto& p : points)
                if (apply_mixed(x, p) == p) ++fixed_total;
            std::size_t pos = 0;
            while (pos < counter.size() && counter[pos] + 1 == group.size()) counter[pos++] = 0;
            if (pos == counter.size()) break;
            ++counter[pos];
        }
        BigInt order(group_size);
        require(fixed_total % order == 0, errc::invalid_argument,
                "Burnside sum not divisible by the group order");
        orbits = static_cast<std::int64_t>(fixed_total / order);
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return {t, n, field.modulus(), cls, method, static_cast<std::int64_t>(points.size()), orbits,
            elapsed};
}

/// Orbit count of the simultaneous-conjugation action of G on
/// Hom(pi_1(S, p0), G) = G^(2g+s-1), for the basepoint-independence check.
inline std::int64_t single_basepoint_orbit_count(const SurfaceType& t, std::size_t n,
                                                 const PrimeField& field,
                                                 std::int64_t budget = 10'000'000) {
    t.validate();
    require(t.holes() >= 1, errc::no_holes, "no boundary circles");
    std::size_t rank = static_cast<std::size_t>(2 * t.g + t.holes() - 1);
    auto gl = all_gl(field, n, budget);
    std::size_t total = detail::checked_pow(gl.size(), rank, budget);

    std::vector<std::vector<std::size_t>> tuples;
    tuples.reserve(total);
    std::vector<std::size_t> counter(rank, 0);
    for (;;) {
        tuples.push_back(counter);
        std::size_t pos = 0;
        while (pos < rank && counter[pos] + 1 == gl.size()) counter[pos++] = 0;
        if (pos == rank) break;
        ++counter[pos];
    }

    std::map<std::vector<std::int64_t>, std::size_t> index;
    auto key_of = [&](const std::vector<std::size_t>& tup) {
        std::vector<std::int64_t> key;
        for (auto idx : tup)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) key.push_back(gl[idx](i, j));
        return key;
    };
    std::map<std::vector<std::int64_t>, std::size_t> gl_index;
    for (std::size_t i = 0; i < gl.size(); ++i) {
        std::vector<std::int64_t> key;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) key.push_back(gl[i](a, b));
        gl_index[key] = i;
    }
    for (std::size_t i = 0; i < tuples.size(); ++i) index[key_of(tuples[i])] = i;

    detail::UnionFind uf(tuples.size());
    auto gens = action_group_generators(field, n, ActionClass::full_g);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (const auto& g : gens) {
            auto ginv = mat_inverse(g);
            std::vector<std::size_t> moved;
            for (auto idx : tuples[i]) {
                auto m = g * gl[idx] * ginv;
                std::vector<std::int64_t> key;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) key.push_back(m(a, b));
                moved.push_back(gl_index.at(key));
            }
            uf.unite(i, index.at(key_of(moved)));
        }
    }
    return static_cast<std::int64_t>(uf.roots());
}

/// Counts of B-conjugacy classes in B(F_q) (by brute-force orbits) and of
/// shuffled Jordan matrices over F_q (from type enumeration); the paper's
/// correspondence says they agree.
struct BConjugacyCensus {
    std::int64_t class_count = 0;
    std::int64_t jw_count = 0;
};

inline BConjugacyCensus b_conjugacy_census(std::size_t n, std::int64_t q,
                                           std::int64_t budget = 10'000'000) {
    PrimeField field(q);
    auto borel = all_borel(field, n, budget);
    std::map<std::vector<std::int64_t>, std::size_t> index;
    auto key_of = [&](const Matrix<PrimeField>& m) {
        std::vector<std::int64_t> key;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) key.push_back(m(i, j));
        return key;
    };
    for (std::size_t i = 0; i < borel.size(); ++i) index[key_of(borel[i])] = i;

    detail::UnionFind uf(borel.size());
    auto gens = action_group_generators(field, n, ActionClass::fi);
    for (std::size_t i = 0; i < borel.size(); ++i)
        for (const auto& g : gens)
            uf.unite(i, index.at(key_of(g * borel[i] * mat_inverse(g))));

    // shuffled Jordan matrices over F_q: sum over Jordan types with nonzero
    // eigenvalues in F_q of the number of shuffled types
    BigInt jw = 0;
    std::function<void(std::int64_t, int, TableauShape&)> recurse =
        [&](std::int64_t min_eig, int remaining, TableauShape& shape) {
            if (remaining == 0) {
                jw += count_shuffled_jordan_types(shape);
                return;
            }
            for (std::int64_t e = min_eig; e < q; ++e) {
                for (int mult = 1; mult <= remaining; ++mult) {
                    // all partitions of mult
                    std::vector<std::vector<int>> parts;
                    std::function<void(int, int, std::vector<int>&)> gen_parts =
                        [&](int left, int max_part, std::vector<int>& cur) {
                            if (left == 0) {
                                parts.push_back(cur);
                                return;
                            }
                            for (int p = std::min(left, max_part); p >= 1; --p) {
                                cur.push_back(p);
                                gen_parts(left - p, p, cur);
                                cur.pop_back();
                            }
                        };
                    std::vector<int> cur;
                    gen_parts(mult, mult, cur);
                    for (const auto& part : parts) {
                        shape.push_back(part);
                        recurse(e + 1, remaining - mult, shape);
                        shape.pop_back();
                    }
                }
            }
        };
    TableauShape shape;
    recurse(1, static_cast<int>(n), shape);

    BConjugacyCensus out;
    out.class_count = static_cast<std::int64_t>(uf.roots());
    out.jw_count = static_cast<std::int64_t>(jw);
    return out;
}

/// For every split phi in GL_n(F_q): the brute-force invariant flags fall
/// into exactly count_shuffled_jordan_types(Jt(phi)) commuting-equivalence
/// classes, and the type partition equals the centralizer-search partition.
struct InvariantFlagCensus {
    std::int64_t checked = 0;
    std::int64_t skipped_nonsplit = 0;
    std::int64_t mismatches = 0;
    bool all_match() const { return mismatches == 0; }
};

inline InvariantFlagCensus invariant_flag_census(std::size_t n, std::int64_t q,
                                                 std::int64_t budget = 50'000'000,
                                                 bool cross_check_centralizer = true) {
    PrimeField field(q);
    InvariantFlagCensus report;
    for (const auto& phi : all_gl(field, n, budget)) {
        JordanType<PrimeField> jt;
        try {
            jt = jordan_type(phi);
        } catch (const domain_error& e) {
            if (e.code() == errc::eigenvalues_not_in_field) {
                ++report.skipped_nonsplit;
                continue;
            }
            throw;
        }
        auto flags = invariant_flags_bruteforce(phi, budget);
        auto classes = commuting_equivalence_classes(phi, flags);
        bool ok = BigInt(classes.size()) == count_shuffled_jordan_types(jt);
        if (ok && cross_check_centralizer)
            ok = classes == centralizer_partition(phi, flags, budget);
        ++report.checked;
        if (!ok) ++report.mismatches;
    }
    return report;
}

/// Default enumeration budget, overridable through CHARVAR_BUDGET.
inline std::int64_t default_budget() {
    if (const char* env = std::getenv("CHARVAR_BUDGET")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 10'000'000;
}

}  // namespace charvar
