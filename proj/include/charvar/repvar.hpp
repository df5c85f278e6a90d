#pragma once

#include "charvar/flag.hpp"
#include "charvar/surface.hpp"

namespace charvar {

/// A point of the decorated representation variety R_G(S, P): one matrix per
/// presentation generator, with N_i upper-triangular and the connecting path
/// at the basepoint pinned to the identity (C_1 if there are primary points,
/// else D_1).
///
/// The basepoint convention is fixed: p_{1,1} when d >= 1, otherwise the
/// secondary point p_1.
template <class F>
struct DecoratedRep {
    SurfaceType surface;
    std::size_t n = 1;
    F field;
    std::vector<Matrix<F>> A, B;          // g each
    std::vector<Matrix<F>> M;             // l
    std::vector<Matrix<F>> N;             // r, in B
    std::vector<Matrix<F>> C;             // d (C_1 pinned when d >= 1)
    std::vector<Matrix<F>> D;             // r (D_1 pinned when d = 0, r >= 1)
    std::vector<std::vector<Matrix<F>>> T;  // T[i][j], m_i per irregular boundary

    static DecoratedRep identity_rep(const SurfaceType& t, std::size_t n, const F& field) {
        t.validate();
        DecoratedRep rep{t, n, field, {}, {}, {}, {}, {}, {}, {}};
        auto id = Matrix<F>::identity(field, n);
        rep.A.assign(t.g, id);
        rep.B.assign(t.g, id);
        rep.M.assign(t.l, id);
        rep.N.assign(t.r, id);
        rep.C.assign(t.d, id);
        rep.D.assign(t.r, id);
        for (int i = 0; i < t.d; ++i) rep.T.emplace_back(t.m[i], id);
        return rep;
    }

    const Matrix<F>& value(const GeneratorId& g) const {
        switch (g.kind) {
            case GeneratorId::Kind::alpha: return A.at(g.i - 1);
            case GeneratorId::Kind::beta: return B.at(g.i - 1);
            case GeneratorId::Kind::gamma: return M.at(g.i - 1);
            case GeneratorId::Kind::delta: return N.at(g.i - 1);
            case GeneratorId::Kind::delta_seg: return T.at(g.i - 1).at(g.j - 1);
            case GeneratorId::Kind::c: return C.at(g.i - 1);
            case GeneratorId::Kind::d: return D.at(g.i - 1);
        }
        fail(errc::invalid_argument, "unknown generator");
    }

    Matrix<F>& value(const GeneratorId& g) {
        return const_cast<Matrix<F>&>(std::as_const(*this).value(g));
    }

    MarkedPoint basepoint() const {
        return surface.d >= 1 ? MarkedPoint::primary(1, 1) : MarkedPoint::secondary(1);
    }

    GeneratorId pinned_generator() const {
        return surface.d >= 1 ? GeneratorId{GeneratorId::Kind::c, 1, 0}
                              : GeneratorId{GeneratorId::Kind::d, 1, 0};
    }

    void validate_shapes() const {
        surface.validate();
        require(surface.marked_points() >= 1, errc::no_marked_points, "no marked points");
        require(static_cast<int>(A.size()) == surface.g && A.size() == B.size(),
                errc::shape_mismatch, "A/B count");
        require(static_cast<int>(M.size()) == surface.l, errc::shape_mismatch, "M count");
        require(static_cast<int>(N.size()) == surface.r, errc::shape_mismatch, "N count");
        require(static_cast<int>(C.size()) == surface.d, errc::shape_mismatch, "C count");
        require(static_cast<int>(D.size()) == surface.r, errc::shape_mismatch, "D count");
        require(static_cast<int>(T.size()) == surface.d, errc::shape_mismatch, "T count");
        for (int i = 0; i < surface.d; ++i)
            require(static_cast<int>(T[i].size()) == surface.m[i], errc::shape_mismatch,
                    "T row count");
        auto check = [&](const Matrix<F>& m) {
            require(m.rows() == n && m.cols() == n, errc::shape_mismatch, "matrix size");
            require(m.field().tag() == field.tag(), errc::field_mismatch, "field tag");
        };
        for (const auto& v : {&A, &B, &M, &N, &C, &D})
            for (const auto& m : *v) check(m);
        for (const auto& row : T)
            for (const auto& m : row) check(m);
    }

    /// N_i upper-triangular invertible, pinned slot equal to the identity.
    void validate_decorations() const {
        for (const auto& m : N)
            require(in_borel(m), errc::not_in_borel, "boundary-loop matrix N not in B");
        require(value(pinned_generator()) == Matrix<F>::identity(field, n),
                errc::pinning_violated, "pinned connecting path is not the identity");
    }
};

template <class F>
bool operator==(const DecoratedRep<F>& a, const DecoratedRep<F>& b) {
    return a.surface == b.surface && a.n == b.n && a.A == b.A && a.B == b.B && a.M == b.M &&
           a.N == b.N && a.C == b.C && a.D == b.D && a.T == b.T;
}

template <class F>
Presentation rep_presentation(const DecoratedRep<F>& rep) {
    return build_presentation(rep.surface, rep.basepoint());
}

template <class F>
Matrix<F> evaluate_word(const DecoratedRep<F>& rep, const PathWord& word) {
    auto acc = Matrix<F>::identity(rep.field, rep.n);
    for (const auto& letter : word.letters()) {
        const auto& m = rep.value(letter.gen);
        acc = letter.exp > 0 ? acc * m : acc * mat_inverse(m);
    }
    return acc;
}

/// Exact check of the defining relation
/// prod [A,B] . prod M . prod D^-1 N D . prod C^-1 (prod T) C = 1.
/// Never throws on bad tuples: a singular entry means the tuple is not a
/// point of the variety, hence false.
template <class F>
bool verify_relation(const DecoratedRep<F>& rep, const Presentation& pres) {
    rep.validate_shapes();
    for (const auto& letter : pres.relation.letters())
        if (!is_invertible(rep.value(letter.gen))) return false;
    return evaluate_word(rep, pres.relation) == Matrix<F>::identity(rep.field, rep.n);
}

template <class F>
bool verify_relation(const DecoratedRep<F>& rep) {
    return verify_relation(rep, rep_presentation(rep));
}

namespace detail {

/// The value the relation forces on one solvable slot: with L x R = 1, the
/// slot is L^-1 R^-1.  No Borel check here.
template <class F>
Matrix<F> solve_slot_value(const DecoratedRep<F>& rep, const GeneratorId& target,
                           const Presentation& pres) {
    require(is_eliminable(target), errc::cannot_eliminate,
            "relation cannot be solved for " + target.name());
    auto id = Matrix<F>::identity(rep.field, rep.n);
    Matrix<F> prefix = id, suffix = id;
    bool seen = false;
    for (const auto& letter : pres.relation.letters()) {
        if (letter.gen == target) {
            require(!seen, errc::invalid_argument, "target occurs twice in relation");
            require(letter.exp == 1, errc::invalid_argument, "unexpected exponent");
            seen = true;
            continue;
        }
        const auto& m = rep.value(letter.gen);
        auto factor = letter.exp > 0 ? m : mat_inverse(m);
        (seen ? suffix : prefix) = (seen ? suffix : prefix) * factor;
    }
    require(seen, errc::invalid_argument, "target " + target.name() + " not in the relation");
    return mat_inverse(prefix) * mat_inverse(suffix);
}

}  // namespace detail

/// Reconstructs one relation-solvable slot (an M, N or T matrix) from all the
/// others.  Solving for an N slot additionally checks the Borel condition.
template <class F>
DecoratedRep<F> solve_for(const DecoratedRep<F>& rep, const GeneratorId& target,
                          const Presentation& pres) {
    rep.validate_shapes();
    Matrix<F> solved = detail::solve_slot_value(rep, target, pres);
    if (target.kind == GeneratorId::Kind::delta)
        require(in_borel(solved), errc::not_in_borel,
                "solved boundary-loop matrix is not upper-triangular");
    DecoratedRep<F> out = rep;
    out.value(target) = solved;
    return out;
}

template <class F>
DecoratedRep<F> solve_for(const DecoratedRep<F>& rep, const GeneratorId& target) {
    return solve_for(rep, target, rep_presentation(rep));
}

/// The slot the sampler treats as dependent: the last segment of the last
/// irregular boundary, else the last simple-boundary loop, else (no M or T
/// available) the last boundary loop N, which forces residual rejection.
inline GeneratorId dependent_slot(const SurfaceType& t) {
    if (t.d >= 1) return {GeneratorId::Kind::delta_seg, t.d, t.m[t.d - 1]};
    if (t.l >= 1) return {GeneratorId::Kind::gamma, t.l, 0};
    require(t.r >= 1, errc::no_marked_points, "surface has no marked points");
    return {GeneratorId::Kind::delta, t.r, 0};
}

/// Number of free scalar parameters the sampler fills: every non-pinned slot
/// contributes its group dimension (n^2 for GL slots, (n^2+n)/2 for the Borel
/// slots N), and the single relation removes n^2.
inline std::int64_t sampler_free_parameter_count(const SurfaceType& t, std::size_t n) {
    t.validate();
    require(t.holes() >= 1, errc::no_holes, "no boundary circles");
    require(t.marked_points() >= 1, errc::no_marked_points, "no marked points");
    std::int64_t nn = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
    std::int64_t borel = (nn + static_cast<std::int64_t>(n)) / 2;
    std::int64_t gl_slots = 2 * t.g + t.l + t.primary_points() + t.d + t.r - 1;  // minus pinned
    return gl_slots * nn + t.r * borel - nn;
}

/// Deterministic seeded sampler over F_p: free slots drawn uniformly from
/// GL_n or B, the dependent slot solved from the relation.  When only N
/// slots are solvable the draw is rejected until the solved matrix lands in
/// B, so the output is always a point of R_G.
inline DecoratedRep<PrimeField> sample_random(const SurfaceType& t, std::size_t n,
                                              const PrimeField& field, std::uint64_t seed) {
    t.validate();
    require(t.holes() >= 1, errc::no_holes, "surface has no boundary circles");
    require(t.marked_points() >= 1, errc::no_marked_points, "surface has no marked points");
    std::mt19937_64 rng(seed);
    auto rep = DecoratedRep<PrimeField>::identity_rep(t, n, field);
    auto pres = rep_presentation(rep);
    GeneratorId dep = dependent_slot(t);
    for (;;) {
        for (const auto& g : pres.generators) {
            if (g == dep) continue;
            rep.value(g) = g.kind == GeneratorId::Kind::delta ? random_borel(field, n, rng)
                                                              : random_gl(field, n, rng);
        }
        if (dep.kind != GeneratorId::Kind::delta) {
            rep = solve_for(rep, dep, pres);
            return rep;
        }
        try {
            rep = solve_for(rep, dep, pres);
            return rep;
        } catch (const domain_error& e) {
            if (e.code() != errc::not_in_borel) throw;
        }
    }
}

enum class DecorationClass { Fi, Fr, PFr };

inline const char* decoration_name(DecorationClass c) {
    switch (c) {
        case DecorationClass::Fi: return "fi";
        case DecorationClass::Fr: return "fr";
        case DecorationClass::PFr: return "pfr";
    }
    return "?";
}

/// One invertible matrix per marked point; the basepoint factor x_0 is not
/// stored but derived (it equals the factor at the basepoint, which keeps the
/// pinned connecting path equal to the identity).
template <class F>
struct MixedGroupElement {
    SurfaceType surface;
    std::vector<std::vector<Matrix<F>>> primary;  // [i][j] like T
    std::vector<Matrix<F>> secondary;             // [i], i = 1..r

    static MixedGroupElement identity_element(const SurfaceType& t, std::size_t n,
                                              const F& field) {
        MixedGroupElement x{t, {}, {}};
        auto id = Matrix<F>::identity(field, n);
        for (int i = 0; i < t.d; ++i) x.primary.emplace_back(t.m[i], id);
        x.secondary.assign(t.r, id);
        return x;
    }

    const Matrix<F>& at_primary(int i, int j) const { return primary.at(i - 1).at(j - 1); }
    const Matrix<F>& at_secondary(int i) const { return secondary.at(i - 1); }

    const Matrix<F>& basepoint_factor() const {
        return surface.d >= 1 ? at_primary(1, 1) : at_secondary(1);
    }
};

template <class F>
bool in_class(const Matrix<F>& m, DecorationClass cls) {
    switch (cls) {
        case DecorationClass::Fi: return in_borel(m);
        case DecorationClass::Fr: return in_unipotent(m);
        case DecorationClass::PFr: return in_scalar_unipotent(m);
    }
    return false;
}

template <class F>
void require_in_class(const MixedGroupElement<F>& x, DecorationClass cls) {
    for (const auto& row : x.primary)
        for (const auto& m : row)
            require(in_class(m, cls), errc::wrong_subgroup,
                    std::string("factor outside the ") + decoration_name(cls) + " group");
    for (const auto& m : x.secondary)
        require(in_class(m, cls), errc::wrong_subgroup,
                std::string("factor outside the ") + decoration_name(cls) + " group");
}

/// Pointwise product, acting as composition of mixed conjugations.
template <class F>
MixedGroupElement<F> compose_mixed(const MixedGroupElement<F>& x, const MixedGroupElement<F>& y) {
    require(x.surface == y.surface, errc::shape_mismatch, "mixed elements on different surfaces");
    MixedGroupElement<F> out = x;
    for (std::size_t i = 0; i < x.primary.size(); ++i)
        for (std::size_t j = 0; j < x.primary[i].size(); ++j)
            out.primary[i][j] = x.primary[i][j] * y.primary[i][j];
    for (std::size_t i = 0; i < x.secondary.size(); ++i)
        out.secondary[i] = x.secondary[i] * y.secondary[i];
    return out;
}

inline MixedGroupElement<PrimeField> random_mixed(const SurfaceType& t, std::size_t n,
                                                  const PrimeField& field, DecorationClass cls,
                                                  std::mt19937_64& rng) {
    auto draw = [&]() -> Matrix<PrimeField> {
        switch (cls) {
            case DecorationClass::Fi: return random_borel(field, n, rng);
            case DecorationClass::Fr: return random_unipotent(field, n, rng);
            case DecorationClass::PFr:
                return scalar_mul(field.random_nonzero(rng), random_unipotent(field, n, rng));
        }
        return Matrix<PrimeField>::identity(field, n);
    };
    MixedGroupElement<PrimeField> x = MixedGroupElement<PrimeField>::identity_element(t, n, field);
    for (auto& row : x.primary)
        for (auto& m : row) m = draw();
    for (auto& m : x.secondary) m = draw();
    return x;
}

/// Mixed conjugation without any subgroup checks; also used for the full
/// G_P action on plain groupoid homomorphisms (no Borel condition).
template <class F>
DecoratedRep<F> apply_mixed(const MixedGroupElement<F>& x, const DecoratedRep<F>& rep) {
    require(x.surface == rep.surface, errc::shape_mismatch, "group element surface mismatch");
    const Matrix<F>& x0 = x.basepoint_factor();
    auto x0_inv = mat_inverse(x0);
    DecoratedRep<F> out = rep;
    for (int i = 0; i < rep.surface.g; ++i) {
        out.A[i] = x0 * rep.A[i] * x0_inv;
        out.B[i] = x0 * rep.B[i] * x0_inv;
    }
    for (int i = 0; i < rep.surface.l; ++i) out.M[i] = x0 * rep.M[i] * x0_inv;
    for (int i = 0; i < rep.surface.r; ++i) {
        const auto& xi = x.at_secondary(i + 1);
        out.N[i] = xi * rep.N[i] * mat_inverse(xi);
        out.D[i] = xi * rep.D[i] * x0_inv;
    }
    for (int i = 0; i < rep.surface.d; ++i) {
        out.C[i] = x.at_primary(i + 1, 1) * rep.C[i] * x0_inv;
        int mi = rep.surface.m[i];
        for (int j = 0; j < mi; ++j) {
            const auto& xnext = x.at_primary(i + 1, (j + 1) % mi + 1);
            out.T[i][j] = xnext * rep.T[i][j] * mat_inverse(x.at_primary(i + 1, j + 1));
        }
    }
    return out;
}

/// Mixed conjugation:
///   A_i, B_i, M_i -> x0 . x0^-1;      N_i -> x_i N_i x_i^-1;
///   C_i -> x_{i,1} C_i x0^-1;         D_i -> x_i D_i x0^-1;
///   T_{i,j} -> x_{i,j+1} T_{i,j} x_{i,j}^-1   (j cyclic mod m_i),
/// with x0 the factor at the basepoint, so the pinning survives.
template <class F>
DecoratedRep<F> mixed_conjugate(const MixedGroupElement<F>& x, const DecoratedRep<F>& rep,
                                DecorationClass cls) {
    rep.validate_shapes();
    rep.validate_decorations();
    require_in_class(x, cls);
    DecoratedRep<F> out = apply_mixed(x, rep);
    out.validate_decorations();
    return out;
}

/// Dimension formulas for the representation varieties, the stacks of
/// decorated local systems, and the monodromy space.
enum class SpaceKind { rep_variety, rep_variety_hat, loc_fi, loc_fr, loc_pfr, mon_space };

struct DimResult {
    std::int64_t value = 0;
    /// Stack dimensions may legitimately be negative; the flag marks those
    /// rather than clamping.
    bool stack_caveat = false;
};

inline DimResult dims(const SurfaceType& t, std::size_t n, SpaceKind kind) {
    t.validate();
    require(t.holes() >= 1, errc::no_holes, "dimension formulas require s >= 1");
    std::int64_t g = t.g, s = t.holes(), m = t.primary_points(), r = t.r;
    std::int64_t nn = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
    std::int64_t nl = static_cast<std::int64_t>(n);
    std::int64_t v = 0;
    switch (kind) {
        case SpaceKind::rep_variety: v = nn * (2 * g + s + m - 2) + r * (nn + nl) / 2; break;
        case SpaceKind::rep_variety_hat: v = nn * (2 * g + s + m - 1) + r * (nn + nl) / 2; break;
        case SpaceKind::loc_fi: v = (2 * g + s - 2) * nn + m * (nn - nl) / 2; break;
        case SpaceKind::loc_fr: v = (2 * g + s - 2) * nn + m * (nn + nl) / 2 - r * nl; break;
        case SpaceKind::loc_pfr:
            v = (2 * g + s - 2) * nn + m * (nn + nl - 2) / 2 - r * (nl - 1);
            break;
        case SpaceKind::mon_space: v = (2 * g + s - 1) * nn; break;
    }
    return {v, v < 0};
}

/// Relative position of the adjacent flags across one boundary segment, in
/// the trivialized model: pos(T_{ij} . standard flag, standard flag).
template <class F>
RelativePosition adjacent_position(const DecoratedRep<F>& rep, int i, int j) {
    rep.validate_shapes();
    require(i >= 1 && i <= rep.surface.d && j >= 1 && j <= rep.surface.m[i - 1],
            errc::invalid_segment, "no such boundary segment");
    auto std_flag = standard_flag(rep.field, rep.n);
    return relative_position(transport_flag(rep.T[i - 1][j - 1], std_flag), std_flag);
}

/// All segment positions in boundary order: the stratum of the rep in W_A.
template <class F>
std::vector<RelativePosition> stratum(const DecoratedRep<F>& rep) {
    std::vector<RelativePosition> out;
    for (int i = 1; i <= rep.surface.d; ++i)
        for (int j = 1; j <= rep.surface.m[i - 1]; ++j)
            out.push_back(adjacent_position(rep, i, j));
    return out;
}

/// Monodromy data of type (g, s): period monodromies A, B and standard
/// monodromies M with prod [A_i,B_i] . prod M_i = 1.
template <class F>
struct MonodromyData {
    std::vector<Matrix<F>> A, B;  // g each
    std::vector<Matrix<F>> M;     // s
};

template <class F>
bool verify_monodromy_data(const MonodromyData<F>& md) {
    require(md.A.size() == md.B.size(), errc::shape_mismatch, "A/B count");
    require(!md.A.empty() || !md.M.empty(), errc::invalid_argument, "empty monodromy data");
    const auto& any = md.A.empty() ? md.M.front() : md.A.front();
    auto acc = Matrix<F>::identity(any.field(), any.rows());
    for (std::size_t i = md.A.size(); i-- > 0;) acc = acc * commutator(md.A[i], md.B[i]);
    for (std::size_t i = md.M.size(); i-- > 0;) acc = acc * md.M[i];
    return acc == Matrix<F>::identity(any.field(), any.rows());
}

/// Solves the monodromy relation for M_i, returning the repaired data.
template <class F>
MonodromyData<F> eliminate_mono(const MonodromyData<F>& md, std::size_t i) {
    require(!md.M.empty(), errc::nothing_to_eliminate, "no standard monodromies to eliminate");
    require(i >= 1 && i <= md.M.size(), errc::index_out_of_range, "monodromy index");
    const auto& any = md.M.front();
    auto id = Matrix<F>::identity(any.field(), any.rows());
    // relation letters: [A_g,B_g]..[A_1,B_1] M_s .. M_1
    Matrix<F> prefix = id, suffix = id;
    for (std::size_t k = md.A.size(); k-- > 0;) prefix = prefix * commutator(md.A[k], md.B[k]);
    for (std::size_t k = md.M.size(); k-- > 0;) {
        if (k + 1 == i) continue;
        auto& side = (k + 1 > i) ? prefix : suffix;
        side = side * md.M[k];
    }
    MonodromyData<F> out = md;
    out.M[i - 1] = mat_inverse(prefix) * mat_inverse(suffix);
    return out;
}

}  // namespace charvar
