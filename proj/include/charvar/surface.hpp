#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "charvar/errors.hpp"

namespace charvar {

/// Discrete invariant of a surface with marked boundary: genus g, then l
/// simple, r regular and d irregular boundary circles, with m[i] primary
/// marked points on the i-th irregular boundary.  Regular boundaries carry
/// one secondary marked point each; simple boundaries carry none.
struct SurfaceType {
    int g = 0;
    int l = 0;
    int r = 0;
    int d = 0;
    std::vector<int> m;

    int holes() const { return l + r + d; }
    int primary_points() const {
        int t = 0;
        for (int mi : m) t += mi;
        return t;
    }
    int marked_points() const { return primary_points() + r; }

    void validate() const {
        require(g >= 0 && l >= 0 && r >= 0 && d >= 0, errc::invalid_argument,
                "negative surface datum");
        require(static_cast<int>(m.size()) == d, errc::invalid_argument,
                "m must list one entry per irregular boundary");
        for (int mi : m)
            require(mi >= 1, errc::invalid_argument, "each irregular boundary needs >= 1 point");
    }

    friend bool operator==(const SurfaceType&, const SurfaceType&) = default;
};

/// A marked point: primary p_{i,j} on irregular boundary i, or the secondary
/// point p_i on regular boundary i.  Indices are 1-based as in the notation
/// p_{1,1}.
struct MarkedPoint {
    enum class Kind { primary, secondary };
    Kind kind = Kind::primary;
    int i = 1;
    int j = 1;  // used only for primary points

    static MarkedPoint primary(int i, int j) { return {Kind::primary, i, j}; }
    static MarkedPoint secondary(int i) { return {Kind::secondary, i, 0}; }

    friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;

    bool valid_for(const SurfaceType& t) const {
        if (kind == Kind::secondary) return i >= 1 && i <= t.r;
        return i >= 1 && i <= t.d && j >= 1 && j <= t.m[i - 1];
    }

    std::string to_string() const {
        if (kind == Kind::secondary) return "p" + std::to_string(i);
        return "p" + std::to_string(i) + "," + std::to_string(j);
    }
};

/// One generator of the presentation.  alpha/beta are the A- and B-cycles,
/// gamma the loops round simple boundaries, delta the boundary loop at a
/// secondary point, delta_seg the boundary segment p_{i,j} -> p_{i,j+1}, and
/// c/d the connecting paths from the basepoint.
struct GeneratorId {
    enum class Kind { alpha, beta, gamma, delta, delta_seg, c, d };
    Kind kind = Kind::alpha;
    int i = 1;
    int j = 0;  // used only for delta_seg

    friend bool operator==(const GeneratorId&, const GeneratorId&) = default;

    std::string name() const {
        switch (kind) {
            case Kind::alpha: return "a" + std::to_string(i);
            case Kind::beta: return "b" + std::to_string(i);
            case Kind::gamma: return "g" + std::to_string(i);
            case Kind::delta: return "n" + std::to_string(i);
            case Kind::delta_seg: return "t" + std::to_string(i) + "_" + std::to_string(j);
            case Kind::c: return "c" + std::to_string(i);
            case Kind::d: return "d" + std::to_string(i);
        }
        return "?";
    }
};

/// Source and target of a generator, given the basepoint convention of the
/// presentation (loops live at the basepoint; segments run along their
/// boundary; c_i and d_i start at the basepoint).
inline MarkedPoint generator_source(const GeneratorId& g, const SurfaceType& t,
                                    const MarkedPoint& basepoint) {
    switch (g.kind) {
        case GeneratorId::Kind::alpha:
        case GeneratorId::Kind::beta:
        case GeneratorId::Kind::gamma:
        case GeneratorId::Kind::c:
        case GeneratorId::Kind::d: return basepoint;
        case GeneratorId::Kind::delta: return MarkedPoint::secondary(g.i);
        case GeneratorId::Kind::delta_seg: return MarkedPoint::primary(g.i, g.j);
    }
    return basepoint;
}

inline MarkedPoint generator_target(const GeneratorId& g, const SurfaceType& t,
                                    const MarkedPoint& basepoint) {
    switch (g.kind) {
        case GeneratorId::Kind::alpha:
        case GeneratorId::Kind::beta:
        case GeneratorId::Kind::gamma: return basepoint;
        case GeneratorId::Kind::delta: return MarkedPoint::secondary(g.i);
        case GeneratorId::Kind::delta_seg: {
            int next = g.j % t.m[g.i - 1] + 1;
            return MarkedPoint::primary(g.i, next);
        }
        case GeneratorId::Kind::c: return MarkedPoint::primary(g.i, 1);
        case GeneratorId::Kind::d: return MarkedPoint::secondary(g.i);
    }
    return basepoint;
}

struct PathLetter {
    GeneratorId gen;
    int exp = 1;  // +1 or -1

    friend bool operator==(const PathLetter&, const PathLetter&) = default;
};

/// Word in the free groupoid on the presentation's generators.  Letters read
/// left to right, with the rightmost letter acting first, matching the
/// product convention of the relation.  Kept freely reduced.
///
/// Generator endpoints depend on the presentation's basepoint (loops and
/// connecting paths start there), so every word carries that basepoint; an
/// empty word additionally needs its own anchor point.
class PathWord {
  public:
    PathWord(const SurfaceType& t, const MarkedPoint& gen_base)
        : surface_(t), gen_base_(gen_base), anchor_(gen_base) {}

    PathWord(const SurfaceType& t, const MarkedPoint& gen_base, std::vector<PathLetter> letters,
             std::optional<MarkedPoint> empty_anchor = std::nullopt)
        : surface_(t),
          gen_base_(gen_base),
          anchor_(empty_anchor.value_or(gen_base)),
          letters_(std::move(letters)) {
        check_composable();
        reduce();
    }

    const std::vector<PathLetter>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    const SurfaceType& surface() const { return surface_; }
    const MarkedPoint& generator_basepoint() const { return gen_base_; }

    MarkedPoint source() const {
        if (letters_.empty()) return anchor_;
        return letter_source(letters_.back());
    }
    MarkedPoint target() const {
        if (letters_.empty()) return anchor_;
        return letter_target(letters_.front());
    }
    bool is_loop() const { return source() == target(); }

    friend bool operator==(const PathWord& a, const PathWord& b) {
        return a.letters_ == b.letters_ && a.source() == b.source() && a.target() == b.target();
    }

    MarkedPoint letter_source(const PathLetter& l) const {
        return l.exp > 0 ? generator_source(l.gen, surface_, gen_base_)
                         : generator_target(l.gen, surface_, gen_base_);
    }
    MarkedPoint letter_target(const PathLetter& l) const {
        return l.exp > 0 ? generator_target(l.gen, surface_, gen_base_)
                         : generator_source(l.gen, surface_, gen_base_);
    }

  private:
    void check_composable() const {
        for (std::size_t k = 0; k + 1 < letters_.size(); ++k)
            require(letter_target(letters_[k + 1]) == letter_source(letters_[k]),
                    errc::not_composable, "adjacent letters do not compose");
    }

    void reduce() {
        if (letters_.empty()) return;
        MarkedPoint src = source();
        std::vector<PathLetter> out;
        for (const auto& l : letters_) {
            if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
                out.pop_back();
            else
                out.push_back(l);
        }
        letters_ = std::move(out);
        if (letters_.empty()) anchor_ = src;
    }

    SurfaceType surface_;
    MarkedPoint gen_base_;
    MarkedPoint anchor_;
    std::vector<PathLetter> letters_;
};

/// Composition a after b (target of b must equal source of a).
inline PathWord word_compose(const PathWord& a, const PathWord& b) {
    require(a.surface() == b.surface() && a.generator_basepoint() == b.generator_basepoint(),
            errc::not_composable, "words over different presentations");
    require(b.target() == a.source(), errc::not_composable,
            "target(b) must equal source(a) for a o b");
    std::vector<PathLetter> letters = a.letters();
    letters.insert(letters.end(), b.letters().begin(), b.letters().end());
    return PathWord(a.surface(), a.generator_basepoint(), std::move(letters), b.source());
}

inline PathWord word_inverse(const PathWord& a) {
    std::vector<PathLetter> letters(a.letters().rbegin(), a.letters().rend());
    for (auto& l : letters) l.exp = -l.exp;
    return PathWord(a.surface(), a.generator_basepoint(), std::move(letters), a.target());
}

/// Finite presentation of the discrete fundamental groupoid pi_1(S, P): the
/// generator list (excluding the pinned constant path), the single relation,
/// and which connecting path is pinned to the constant path (c_1 for a
/// primary basepoint, d_1 for a secondary one).
struct Presentation {
    SurfaceType surface;
    MarkedPoint basepoint;
    std::vector<GeneratorId> generators;
    PathWord relation;
    GeneratorId pinned;

    int free_rank() const { return static_cast<int>(generators.size()) - 1; }
};

/// Segment list A(S, P): one positively-oriented boundary segment per (i, j),
/// running p_{i,j} -> p_{i,j+1} cyclically.
struct BoundarySegment {
    GeneratorId id;
    MarkedPoint source;
    MarkedPoint target;
};

inline std::vector<BoundarySegment> boundary_segments(const SurfaceType& t) {
    t.validate();
    std::vector<BoundarySegment> out;
    for (int i = 1; i <= t.d; ++i)
        for (int j = 1; j <= t.m[i - 1]; ++j) {
            GeneratorId id{GeneratorId::Kind::delta_seg, i, j};
            out.push_back({id, MarkedPoint::primary(i, j),
                           MarkedPoint::primary(i, j % t.m[i - 1] + 1)});
        }
    return out;
}

/// Builds the presentation for the given surface type and basepoint.
///
/// Boundaries of the basepoint's kind are renumbered cyclically so that the
/// basepoint's boundary becomes boundary 1, and primary positions on that
/// boundary are rotated so the basepoint is p_{1,1}; the surface type stored
/// in the result reflects that relabelling (only the order of m can change).
/// The relation is
///   [a_g,b_g]...[a_1,b_1] g_l...g_1 (d_r^-1 n_r d_r)...(d_1^-1 n_1 d_1)
///   (c_d^-1 t_{d,m_d}...t_{d,1} c_d)...(c_1^-1 t_{1,m_1}...t_{1,1} c_1) = 1
/// with the pinned letter omitted (it is the constant path).
inline Presentation build_presentation(const SurfaceType& type, const MarkedPoint& basepoint) {
    type.validate();
    require(type.holes() >= 1, errc::no_holes, "surface has no boundary circles");
    require(type.marked_points() >= 1, errc::no_marked_points, "surface has no marked points");
    require(basepoint.valid_for(type), errc::invalid_argument,
            "basepoint does not exist on this surface");

    SurfaceType t = type;
    MarkedPoint bp = basepoint;
    if (basepoint.kind == MarkedPoint::Kind::primary) {
        std::rotate(t.m.begin(), t.m.begin() + (basepoint.i - 1), t.m.end());
        bp = MarkedPoint::primary(1, 1);
        // positions on the basepoint's boundary are rotated so j0 becomes 1;
        // the rotation leaves m[0] unchanged, so nothing else to record.
    } else {
        bp = MarkedPoint::secondary(1);
    }

    Presentation pres{t, bp, {}, PathWord(t, bp), {}};
    bool primary_base = bp.kind == MarkedPoint::Kind::primary;
    pres.pinned = primary_base ? GeneratorId{GeneratorId::Kind::c, 1, 0}
                               : GeneratorId{GeneratorId::Kind::d, 1, 0};

    auto add = [&](GeneratorId g) { pres.generators.push_back(g); };
    for (int i = 1; i <= t.g; ++i) add({GeneratorId::Kind::alpha, i, 0});
    for (int i = 1; i <= t.g; ++i) add({GeneratorId::Kind::beta, i, 0});
    for (int i = 1; i <= t.l; ++i) add({GeneratorId::Kind::gamma, i, 0});
    for (int i = 1; i <= t.r; ++i) add({GeneratorId::Kind::delta, i, 0});
    for (int i = 1; i <= t.d; ++i)
        for (int j = 1; j <= t.m[i - 1]; ++j) add({GeneratorId::Kind::delta_seg, i, j});
    for (int i = 1; i <= t.d; ++i) {
        GeneratorId g{GeneratorId::Kind::c, i, 0};
        if (!(g == pres.pinned)) add(g);
    }
    for (int i = 1; i <= t.r; ++i) {
        GeneratorId g{GeneratorId::Kind::d, i, 0};
        if (!(g == pres.pinned)) add(g);
    }

    std::vector<PathLetter> word;
    auto push = [&](GeneratorId g, int exp) {
        if (g == pres.pinned) return;  // constant path
        word.push_back({g, exp});
    };
    for (int i = t.g; i >= 1; --i) {
        GeneratorId a{GeneratorId::Kind::alpha, i, 0}, b{GeneratorId::Kind::beta, i, 0};
        push(a, 1);
        push(b, 1);
        push(a, -1);
        push(b, -1);
    }
    for (int i = t.l; i >= 1; --i) push({GeneratorId::Kind::gamma, i, 0}, 1);
    for (int i = t.r; i >= 1; --i) {
        GeneratorId di{GeneratorId::Kind::d, i, 0};
        push(di, -1);
        push({GeneratorId::Kind::delta, i, 0}, 1);
        push(di, 1);
    }
    for (int i = t.d; i >= 1; --i) {
        GeneratorId ci{GeneratorId::Kind::c, i, 0};
        push(ci, -1);
        for (int j = t.m[i - 1]; j >= 1; --j) push({GeneratorId::Kind::delta_seg, i, j}, 1);
        push(ci, 1);
    }
    pres.relation = PathWord(t, bp, std::move(word));
    require(pres.relation.is_loop() && pres.relation.source() == bp, errc::not_composable,
            "relation word must be a loop at the basepoint");
    return pres;
}

inline bool is_eliminable(const GeneratorId& g) {
    return g.kind == GeneratorId::Kind::gamma || g.kind == GeneratorId::Kind::delta ||
           g.kind == GeneratorId::Kind::delta_seg;
}

struct FreeGenerators {
    std::vector<GeneratorId> generators;
    /// Dropping a boundary loop delta_i leaves the Borel constraint on N_i
    /// unexpressed; solving the relation for N_i need not land in B.
    bool solve_unsafe = false;
};

/// The relation can be solved for any gamma_i, delta_i, delta_{i,j}; dropping
/// one of those leaves a free generating set of rank 2g+s+r+m-2.
inline FreeGenerators free_generators(const Presentation& p, const GeneratorId& drop) {
    require(is_eliminable(drop), errc::cannot_eliminate,
            "relation cannot be solved for " + drop.name());
    FreeGenerators out;
    out.solve_unsafe = drop.kind == GeneratorId::Kind::delta;
    bool found = false;
    for (const auto& g : p.generators) {
        if (g == drop) {
            found = true;
            continue;
        }
        out.generators.push_back(g);
    }
    require(found, errc::invalid_argument, "generator " + drop.name() + " not in presentation");
    return out;
}

/// Expresses the dropped generator as a word in the remaining ones: with the
/// relation written L x R = 1 (x occurs exactly once, exponent +1), the
/// solved word is L^-1 R^-1.
inline PathWord solve_relation_for(const Presentation& p, const GeneratorId& drop) {
    require(is_eliminable(drop), errc::cannot_eliminate,
            "relation cannot be solved for " + drop.name());
    const auto& letters = p.relation.letters();
    std::size_t pos = letters.size();
    for (std::size_t k = 0; k < letters.size(); ++k)
        if (letters[k].gen == drop) {
            require(pos == letters.size(), errc::invalid_argument, "generator occurs twice");
            pos = k;
        }
    require(pos < letters.size(), errc::invalid_argument,
            "generator " + drop.name() + " not in relation");
    require(letters[pos].exp == 1, errc::invalid_argument, "expected exponent +1 in relation");
    std::vector<PathLetter> prefix(letters.begin(), letters.begin() + pos);
    std::vector<PathLetter> suffix(letters.begin() + pos + 1, letters.end());
    PathWord lw(p.surface, p.basepoint, std::move(prefix));
    PathWord rw(p.surface, p.basepoint, std::move(suffix));
    return word_compose(word_inverse(lw), word_inverse(rw));
}

}  // namespace charvar
