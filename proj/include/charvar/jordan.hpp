#pragma once

#include <functional>
#include <map>
#include <utility>

#include "charvar/flag.hpp"
#include "charvar/poly.hpp"

namespace charvar {

/// One distinct eigenvalue with its Jordan block sizes (weakly decreasing).
template <class F>
struct EigenBlock {
    typename F::Element eigenvalue;
    std::vector<int> partition;
};

/// Tableau shape without eigenvalues: one partition per distinct eigenvalue
/// index.  Counting and enumeration of shuffles depend only on this.
using TableauShape = std::vector<std::vector<int>>;

inline void validate_shape(const TableauShape& shape) {
    require(!shape.empty(), errc::invalid_argument, "empty tableau shape");
    for (const auto& part : shape) {
        require(!part.empty(), errc::invalid_argument, "empty partition in shape");
        for (std::size_t i = 0; i < part.size(); ++i) {
            require(part[i] >= 1, errc::invalid_argument, "partition entries must be positive");
            if (i > 0)
                require(part[i] <= part[i - 1], errc::invalid_argument,
                        "partition must be weakly decreasing");
        }
    }
}

inline int shape_dimension(const TableauShape& shape) {
    int n = 0;
    for (const auto& part : shape)
        for (int r : part) n += r;
    return n;
}

/// The Jordan type of an automorphism: distinct eigenvalues (canonically
/// ordered) with their block partitions.
template <class F>
struct JordanType {
    std::vector<EigenBlock<F>> blocks;

    int dimension() const {
        int n = 0;
        for (const auto& b : blocks)
            for (int r : b.partition) n += r;
        return n;
    }

    TableauShape shape() const {
        TableauShape s;
        for (const auto& b : blocks) s.push_back(b.partition);
        return s;
    }

    bool has_distinct_eigenvalues() const {
        for (const auto& b : blocks)
            if (b.partition.size() != 1 || b.partition[0] != 1) return false;
        return true;
    }
};

template <class F>
bool operator==(const JordanType<F>& a, const JordanType<F>& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        if (a.blocks[i].partition != b.blocks[i].partition) return false;
        if (!(a.blocks[i].eigenvalue == b.blocks[i].eigenvalue)) return false;
    }
    return true;
}

/// Jordan type from kernel dimensions of powers of (m - lambda).  Requires
/// the characteristic polynomial to split over the base field.
template <class F>
JordanType<F> jordan_type(const Matrix<F>& m) {
    require(m.rows() == m.cols(), errc::shape_mismatch, "Jordan type of non-square matrix");
    const F& k = m.field();
    std::size_t n = m.rows();
    auto roots = poly_roots(char_poly(m));
    int total = 0;
    for (const auto& [root, mult] : roots) total += mult;
    require(total == static_cast<int>(n), errc::eigenvalues_not_in_field,
            "characteristic polynomial does not split over the base field");

    JordanType<F> jt;
    for (const auto& [root, mult] : roots) {
        typename F::Element lambda = root;
        Matrix<F> nu = mat_sub(m, scalar_mul(lambda, Matrix<F>::identity(k, n)));
        std::vector<int> ker_dims{0};
        Matrix<F> power = Matrix<F>::identity(k, n);
        while (ker_dims.back() < mult && ker_dims.size() <= n) {
            power = power * nu;
            ker_dims.push_back(static_cast<int>(kernel(power).dim()));
        }
        require(ker_dims.back() == mult, errc::invalid_argument,
                "generalized eigenspace dimension mismatch");
        // blocks of size >= c: ker_dims[c] - ker_dims[c-1]
        std::vector<int> at_least;
        for (std::size_t c = 1; c < ker_dims.size(); ++c)
            at_least.push_back(ker_dims[c] - ker_dims[c - 1]);
        std::vector<int> partition;
        for (int i = 1; i <= at_least.front(); ++i) {
            int len = 0;
            for (int b : at_least)
                if (b >= i) ++len;
            partition.push_back(len);
        }
        jt.blocks.push_back({lambda, partition});
    }
    std::sort(jt.blocks.begin(), jt.blocks.end(),
              [&](const EigenBlock<F>& a, const EigenBlock<F>& b) {
                  return k.less(a.eigenvalue, b.eigenvalue);
              });
    return jt;
}

/// A box of the Young tableau: eigenvalue index, row, column (all 1-based).
struct TableauBox {
    int eig = 1;
    int row = 1;
    int col = 1;

    friend bool operator==(const TableauBox&, const TableauBox&) = default;
    friend auto operator<=>(const TableauBox& a, const TableauBox& b) {
        return std::tie(a.eig, a.row, a.col) <=> std::tie(b.eig, b.row, b.col);
    }

    std::string label() const {
        return "\xce\xbb" + std::to_string(eig) + ":" + std::to_string(row) + "." +
               std::to_string(col);
    }
};

/// Total order on all tableau boxes whose restriction to each row is the
/// natural column order.
struct Shuffle {
    std::vector<TableauBox> order;

    friend bool operator==(const Shuffle&, const Shuffle&) = default;
    friend auto operator<=>(const Shuffle& a, const Shuffle& b) { return a.order <=> b.order; }
};

inline bool shuffle_valid_for(const Shuffle& s, const TableauShape& shape) {
    std::map<std::pair<int, int>, int> next_col;
    int n = shape_dimension(shape);
    if (static_cast<int>(s.order.size()) != n) return false;
    for (const auto& b : s.order) {
        if (b.eig < 1 || b.eig > static_cast<int>(shape.size())) return false;
        const auto& part = shape[b.eig - 1];
        if (b.row < 1 || b.row > static_cast<int>(part.size())) return false;
        if (b.col < 1 || b.col > part[b.row - 1]) return false;
        int& expect = next_col[{b.eig, b.row}];
        if (b.col != expect + 1) return false;
        expect = b.col;
    }
    for (std::size_t e = 0; e < shape.size(); ++e)
        for (std::size_t r = 0; r < shape[e].size(); ++r)
            if (next_col[{static_cast<int>(e + 1), static_cast<int>(r + 1)}] != shape[e][r])
                return false;
    return true;
}

/// Canonical representative of a shuffle's equivalence class: within each
/// group of equal-length rows of one subtableau, rows are relabelled in order
/// of their first appearance, which yields the lexicographically least
/// equivalent box sequence.
inline Shuffle canonicalize_shuffle(const Shuffle& s, const TableauShape& shape) {
    // first occurrence position of each (eig, row)
    std::map<std::pair<int, int>, std::size_t> first;
    for (std::size_t pos = 0; pos < s.order.size(); ++pos) {
        auto key = std::make_pair(s.order[pos].eig, s.order[pos].row);
        if (!first.count(key)) first[key] = pos;
    }
    std::map<std::pair<int, int>, int> relabel;
    for (std::size_t e = 0; e < shape.size(); ++e) {
        const auto& part = shape[e];
        std::size_t lo = 0;
        while (lo < part.size()) {
            std::size_t hi = lo;
            while (hi + 1 < part.size() && part[hi + 1] == part[lo]) ++hi;
            // rows lo..hi (0-based) share a length; sort by first appearance
            std::vector<int> rows;
            for (std::size_t r = lo; r <= hi; ++r) rows.push_back(static_cast<int>(r + 1));
            std::sort(rows.begin(), rows.end(), [&](int a, int b) {
                return first.at({static_cast<int>(e + 1), a}) <
                       first.at({static_cast<int>(e + 1), b});
            });
            for (std::size_t idx = 0; idx < rows.size(); ++idx)
                relabel[{static_cast<int>(e + 1), rows[idx]}] = static_cast<int>(lo + idx + 1);
            lo = hi + 1;
        }
    }
    Shuffle out = s;
    for (auto& b : out.order) b.row = relabel.at({b.eig, b.row});
    return out;
}

/// Equivalence class of shuffles under swaps of equal-length rows within one
/// subtableau, held by its canonical representative.  The complete invariant
/// of phi-invariant complete flags.
class ShuffledJordanType {
  public:
    ShuffledJordanType(TableauShape shape, const Shuffle& any_representative)
        : shape_(std::move(shape)) {
        validate_shape(shape_);
        require(shuffle_valid_for(any_representative, shape_), errc::invalid_argument,
                "not a shuffle of this tableau shape");
        canonical_ = canonicalize_shuffle(any_representative, shape_);
    }

    const TableauShape& shape() const { return shape_; }
    const Shuffle& canonical() const { return canonical_; }
    int dimension() const { return shape_dimension(shape_); }

    friend bool operator==(const ShuffledJordanType& a, const ShuffledJordanType& b) {
        return a.shape_ == b.shape_ && a.canonical_ == b.canonical_;
    }
    friend bool operator<(const ShuffledJordanType& a, const ShuffledJordanType& b) {
        return std::tie(a.shape_, a.canonical_.order) < std::tie(b.shape_, b.canonical_.order);
    }

  private:
    TableauShape shape_;
    Shuffle canonical_;
};

inline BigInt factorial_big(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Number of shuffles: the multinomial n! / prod(row lengths!).
inline BigInt count_shuffles(const TableauShape& shape) {
    validate_shape(shape);
    BigInt total = factorial_big(shape_dimension(shape));
    for (const auto& part : shape)
        for (int r : part) total /= factorial_big(r);
    return total;
}

/// Number of shuffled Jordan types: the multinomial divided by
/// C = prod over (eigenvalue, row length) of (number of rows of that length)!.
inline BigInt count_shuffled_jordan_types(const TableauShape& shape) {
    BigInt total = count_shuffles(shape);
    for (const auto& part : shape) {
        std::map<int, int> length_count;
        for (int r : part) ++length_count[r];
        for (const auto& [len, cnt] : length_count) total /= factorial_big(cnt);
    }
    return total;
}

template <class F>
BigInt count_shuffles(const JordanType<F>& jt) {
    return count_shuffles(jt.shape());
}
template <class F>
BigInt count_shuffled_jordan_types(const JordanType<F>& jt) {
    return count_shuffled_jordan_types(jt.shape());
}

/// All shuffles in lexicographic order of box sequences.
inline std::vector<Shuffle> enumerate_shuffles(const TableauShape& shape,
                                               std::int64_t budget = 10'000'000) {
    validate_shape(shape);
    BigInt count = count_shuffles(shape);
    if (count > budget)
        throw budget_error("shape has " + count.str() + " shuffles, budget is " +
                           std::to_string(budget));
    // row-id sequence with multiplicities; next_permutation yields lex order
    std::vector<std::pair<int, int>> ids;  // (eig, row)
    for (std::size_t e = 0; e < shape.size(); ++e)
        for (std::size_t r = 0; r < shape[e].size(); ++r)
            for (int c = 0; c < shape[e][r]; ++c)
                ids.emplace_back(static_cast<int>(e + 1), static_cast<int>(r + 1));
    std::sort(ids.begin(), ids.end());
    std::vector<Shuffle> out;
    do {
        Shuffle s;
        std::map<std::pair<int, int>, int> col;
        for (const auto& id : ids) s.order.push_back({id.first, id.second, ++col[id]});
        out.push_back(std::move(s));
    } while (std::next_permutation(ids.begin(), ids.end()));
    return out;
}

/// All shuffled Jordan types, one canonical representative each, in
/// lexicographic order.
inline std::vector<ShuffledJordanType> enumerate_shuffled_jordan_types(
    const TableauShape& shape, std::int64_t budget = 10'000'000) {
    auto shuffles = enumerate_shuffles(shape, budget);
    std::vector<ShuffledJordanType> out;
    for (const auto& s : shuffles)
        if (canonicalize_shuffle(s, shape) == s) out.emplace_back(shape, s);
    return out;
}

/// The shuffled Jordan matrix of a type: eigenvalues on the diagonal in box
/// order, a 1 linking consecutive boxes of each row.  Upper-triangular by
/// construction since a shuffle lists each row's boxes left to right.
template <class F>
Matrix<F> shuffled_matrix(const JordanType<F>& jt, const ShuffledJordanType& t, const F& field) {
    require(jt.shape() == t.shape(), errc::type_shape_mismatch,
            "type's tableau shape does not match the Jordan type");
    int n = t.dimension();
    Matrix<F> z(field, n, n);
    const auto& order = t.canonical().order;
    std::map<TableauBox, int> pos;
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    for (int i = 0; i < n; ++i) {
        const auto& b = order[i];
        z(i, i) = jt.blocks[b.eig - 1].eigenvalue;
        TableauBox next{b.eig, b.row, b.col + 1};
        auto it = pos.find(next);
        if (it != pos.end()) z(i, it->second) = field.one();
    }
    require(is_upper_triangular(z), errc::invalid_argument, "shuffled matrix not triangular");
    return z;
}

/// J_W(phi): every shuffled Jordan matrix with the same Jordan type as phi.
template <class F>
std::vector<Matrix<F>> jw_set(const Matrix<F>& phi, std::int64_t budget = 10'000'000) {
    auto jt = jordan_type(phi);
    auto types = enumerate_shuffled_jordan_types(jt.shape(), budget);
    std::vector<Matrix<F>> out;
    out.reserve(types.size());
    for (const auto& t : types) out.push_back(shuffled_matrix(jt, t, phi.field()));
    return out;
}

/// Reads the shuffled Jordan type off a phi-invariant complete flag.
///
/// Levels are labelled by the generalized eigenspace whose intersection
/// dimension jumps.  Within one eigenvalue, writing nu = phi - lambda, the
/// image spaces nu(F_i) link each level to the level of its Jordan-chain
/// predecessor: the new box sits at column 1 when nu(F_i) = nu(F_{i-1}) and
/// otherwise continues the row of the level p = min{ j : nu(F_i) c
/// nu(F_{i-1}) + F_j }.  No generator choices are involved, so the output is
/// well-defined on equivalence classes by construction.
template <class F>
ShuffledJordanType classify_invariant_flag(const Matrix<F>& phi, const Flag<F>& flag) {
    const F& k = phi.field();
    require(phi.rows() == phi.cols() && phi.rows() == flag.ambient_dim(), errc::shape_mismatch,
            "automorphism and flag dimensions disagree");
    std::size_t n = phi.rows();
    for (std::size_t i = 1; i <= n; ++i)
        require(flag.step(i).contains(image(phi, flag.step(i))), errc::not_invariant,
                "flag step " + std::to_string(i) + " is not phi-invariant");

    auto jt = jordan_type(phi);
    std::size_t num_eigs = jt.blocks.size();

    // generalized eigenspaces and nilpotent parts
    std::vector<Subspace<F>> gen_space;
    std::vector<Matrix<F>> nu;
    for (const auto& block : jt.blocks) {
        Matrix<F> shifted = mat_sub(phi, scalar_mul(block.eigenvalue, Matrix<F>::identity(k, n)));
        Matrix<F> power = Matrix<F>::identity(k, n);
        int mult = 0;
        for (int r : block.partition) mult += r;
        for (int c = 0; c < mult; ++c) power = power * shifted;
        gen_space.push_back(kernel(power));
        nu.push_back(shifted);
    }

    // label levels by eigenvalue
    std::vector<int> label(n + 1, 0);
    std::vector<std::vector<std::size_t>> levels_of(num_eigs);  // global levels per eigenvalue
    {
        std::vector<std::size_t> prev(num_eigs, 0);
        for (std::size_t i = 1; i <= n; ++i) {
            int jumped = -1;
            for (std::size_t e = 0; e < num_eigs; ++e) {
                std::size_t dim_now = sub_intersect(flag.step(i), gen_space[e]).dim();
                if (dim_now == prev[e] + 1) {
                    require(jumped < 0, errc::not_invariant, "ambiguous eigenvalue labelling");
                    jumped = static_cast<int>(e);
                }
                require(dim_now >= prev[e] && dim_now <= prev[e] + 1, errc::not_invariant,
                        "flag is not adapted to the eigenspace decomposition");
            }
            require(jumped >= 0, errc::not_invariant, "no eigenvalue label for a flag level");
            label[i] = jumped;
            prev[jumped] += 1;
            levels_of[jumped].push_back(i);
        }
    }

    // per-eigenvalue chain structure from image linking
    struct RowBuild {
        std::vector<std::size_t> levels;  // global levels, column order
    };
    std::vector<TableauBox> box_at(n + 1);
    for (std::size_t e = 0; e < num_eigs; ++e) {
        const auto& levels = levels_of[e];
        std::vector<RowBuild> rows;
        std::vector<int> row_of_local(levels.size(), -1);
        Subspace<F> prev_img(k, n);
        std::vector<Subspace<F>> local_steps;  // G_1 .. G_m for this eigenvalue
        for (std::size_t j = 0; j < levels.size(); ++j) {
            local_steps.push_back(sub_intersect(flag.step(levels[j]), gen_space[e]));
            auto img = image(nu[e], local_steps.back());
            if (img.dim() == prev_img.dim()) {
                rows.push_back({{levels[j]}});
                row_of_local[j] = static_cast<int>(rows.size()) - 1;
            } else {
                require(img.dim() == prev_img.dim() + 1, errc::not_invariant,
                        "unexpected image jump");
                std::size_t pred = levels.size();
                for (std::size_t jp = 0; jp < j; ++jp) {
                    auto bound = sub_sum(prev_img, local_steps[jp]);
                    if (bound.contains(img)) {
                        pred = jp;
                        break;
                    }
                }
                require(pred < levels.size(), errc::not_invariant, "chain predecessor not found");
                int r = row_of_local[pred];
                require(r >= 0 && rows[r].levels.back() == levels[pred], errc::not_invariant,
                        "chain predecessor already extended");
                rows[r].levels.push_back(levels[j]);
                row_of_local[j] = r;
            }
            prev_img = img;
        }
        // canonical row order: length descending, then first level ascending
        std::vector<std::size_t> idx(rows.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (rows[a].levels.size() != rows[b].levels.size())
                return rows[a].levels.size() > rows[b].levels.size();
            return rows[a].levels.front() < rows[b].levels.front();
        });
        // validate against the Jordan partition
        const auto& part = jt.blocks[e].partition;
        require(idx.size() == part.size(), errc::not_invariant, "row count mismatch");
        for (std::size_t r = 0; r < idx.size(); ++r)
            require(static_cast<int>(rows[idx[r]].levels.size()) == part[r], errc::not_invariant,
                    "row length mismatch with Jordan partition");
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const auto& lv = rows[idx[r]].levels;
            for (std::size_t c = 0; c < lv.size(); ++c)
                box_at[lv[c]] = {static_cast<int>(e + 1), static_cast<int>(r + 1),
                                 static_cast<int>(c + 1)};
        }
    }

    Shuffle s;
    for (std::size_t i = 1; i <= n; ++i) s.order.push_back(box_at[i]);
    return ShuffledJordanType(jt.shape(), s);
}

namespace detail {

/// Jordan chains for one eigenvalue: each chain is its vectors by rank,
/// chain[c-1] has rank c (so chain.front() is killed by nu).
template <class F>
std::vector<std::vector<std::vector<typename F::Element>>> jordan_chains(
    const Matrix<F>& phi, const typename F::Element& lambda, int mult) {
    const F& k = phi.field();
    std::size_t n = phi.rows();
    Matrix<F> nu = mat_sub(phi, scalar_mul(lambda, Matrix<F>::identity(k, n)));

    std::vector<Subspace<F>> ker_pow{Subspace<F>(k, n)};
    Matrix<F> power = Matrix<F>::identity(k, n);
    while (static_cast<int>(ker_pow.back().dim()) < mult) {
        power = power * nu;
        ker_pow.push_back(kernel(power));
    }
    int longest = static_cast<int>(ker_pow.size()) - 1;

    std::vector<std::vector<std::vector<typename F::Element>>> chains;
    // spanning set grown as we walk c = longest .. 1
    std::vector<std::vector<typename F::Element>> span_rows;
    auto span_contains = [&](const std::vector<typename F::Element>& v) {
        Matrix<F> m(k, span_rows.size() + 1, n);
        for (std::size_t i = 0; i < span_rows.size(); ++i) m.set_row(i, span_rows[i]);
        m.set_row(span_rows.size(), v);
        return rank(m) == span_rows.size();
    };
    for (int c = longest; c >= 1; --c) {
        span_rows.clear();
        for (std::size_t i = 0; i < ker_pow[c - 1].dim(); ++i)
            span_rows.push_back(ker_pow[c - 1].basis().row(i));
        for (const auto& chain : chains)
            if (static_cast<int>(chain.size()) > c) span_rows.push_back(chain[c - 1]);
        for (std::size_t i = 0; i < ker_pow[c].dim(); ++i) {
            auto v = ker_pow[c].basis().row(i);
            if (span_contains(v)) continue;
            std::vector<std::vector<typename F::Element>> chain(c);
            chain[c - 1] = v;
            for (int rank_idx = c - 1; rank_idx >= 1; --rank_idx)
                chain[rank_idx - 1] = mat_apply(nu, chain[rank_idx]);
            span_rows.push_back(v);
            chains.push_back(std::move(chain));
        }
    }
    std::sort(chains.begin(), chains.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return chains;
}

}  // namespace detail

/// Builds a phi-invariant flag with the given shuffled Jordan type: order a
/// Jordan basis by the type's box sequence and take spans of prefixes.
template <class F>
Flag<F> flag_from_type(const Matrix<F>& phi, const ShuffledJordanType& t) {
    const F& k = phi.field();
    std::size_t n = phi.rows();
    auto jt = jordan_type(phi);
    require(jt.shape() == t.shape(), errc::type_shape_mismatch,
            "type's tableau shape does not match Jt(phi)");

    std::vector<std::vector<std::vector<std::vector<typename F::Element>>>> chains_per_eig;
    for (const auto& block : jt.blocks) {
        int mult = 0;
        for (int r : block.partition) mult += r;
        auto chains = detail::jordan_chains(phi, block.eigenvalue, mult);
        require(chains.size() == block.partition.size(), errc::invalid_argument,
                "jordan chain extraction failed");
        for (std::size_t r = 0; r < chains.size(); ++r)
            require(static_cast<int>(chains[r].size()) == block.partition[r],
                    errc::invalid_argument, "jordan chain lengths disagree with partition");
        chains_per_eig.push_back(std::move(chains));
    }

    std::vector<Subspace<F>> steps;
    Matrix<F> acc(k, n, n);
    std::size_t filled = 0;
    for (const auto& box : t.canonical().order) {
        const auto& v = chains_per_eig[box.eig - 1][box.row - 1][box.col - 1];
        acc.set_row(filled, v);
        ++filled;
        Matrix<F> rows(k, filled, n);
        for (std::size_t i = 0; i < filled; ++i) rows.set_row(i, acc.row(i));
        auto s = Subspace<F>::from_rows(rows);
        require(s.dim() == filled, errc::invalid_argument, "jordan basis not independent");
        steps.push_back(std::move(s));
    }
    return Flag<F>(std::move(steps));
}

/// All complete phi-invariant flags over F_q, by exhaustive extension of
/// invariant subspace chains.  Small cases only; the budget counts candidate
/// vectors considered.
inline std::vector<Flag<PrimeField>> invariant_flags_bruteforce(const Matrix<PrimeField>& phi,
                                                                std::int64_t budget = 10'000'000) {
    const PrimeField& k = phi.field();
    std::size_t n = phi.rows();
    require(phi.rows() == phi.cols(), errc::shape_mismatch, "square matrix expected");
    std::int64_t q = k.modulus();

    double est = 1;
    for (std::size_t i = 0; i < n; ++i) est *= static_cast<double>(q);
    if (est * static_cast<double>(n) > static_cast<double>(budget) * 64.0)
        throw budget_error("flag enumeration over F_" + std::to_string(q) + "^" +
                           std::to_string(n) + " exceeds the budget");

    std::int64_t spent = 0;
    std::vector<Flag<PrimeField>> found;
    std::vector<Subspace<PrimeField>> chain;

    // all q^n vectors, fixed order
    std::vector<std::vector<PrimeField::Element>> all_vectors;
    {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(q);
        for (std::size_t code = 1; code < total; ++code) {  // skip zero vector
            std::size_t x = code;
            std::vector<PrimeField::Element> v(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = static_cast<std::int64_t>(x % q);
                x /= q;
            }
            all_vectors.push_back(std::move(v));
        }
    }

    auto extend = [&](auto&& self, const Subspace<PrimeField>& current) -> void {
        if (current.dim() == n) {
            found.emplace_back(chain);
            return;
        }
        std::vector<Subspace<PrimeField>> seen;
        for (const auto& v : all_vectors) {
            if (++spent > budget) throw budget_error("invariant flag search budget exhausted");
            if (current.contains(v)) continue;
            Matrix<PrimeField> rows(k, current.dim() + 1, n);
            for (std::size_t i = 0; i < current.dim(); ++i) rows.set_row(i, current.basis().row(i));
            rows.set_row(current.dim(), v);
            auto bigger = Subspace<PrimeField>::from_rows(rows);
            if (std::find(seen.begin(), seen.end(), bigger) != seen.end()) continue;
            seen.push_back(bigger);
            if (!bigger.contains(image(phi, bigger))) continue;
            chain.push_back(bigger);
            self(self, bigger);
            chain.pop_back();
        }
    };
    extend(extend, Subspace<PrimeField>(k, n));
    return found;
}

/// Partition of flags where two flags are equivalent iff some invertible psi
/// with psi phi = phi psi maps one onto the other: grouping by shuffled
/// Jordan type, which is the complete invariant.
template <class F>
std::vector<std::vector<std::size_t>> commuting_equivalence_classes(
    const Matrix<F>& phi, const std::vector<Flag<F>>& flags) {
    std::vector<std::pair<ShuffledJordanType, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        auto t = classify_invariant_flag(phi, flags[i]);
        bool placed = false;
        for (auto& [key, members] : groups)
            if (key == t) {
                members.push_back(i);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({std::move(t), {i}});
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [key, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

/// Basis of the commutant algebra { X : phi X = X phi }.
template <class F>
std::vector<Matrix<F>> commutant_basis(const Matrix<F>& phi) {
    const F& k = phi.field();
    std::size_t n = phi.rows();
    // linear system over the n^2 entries of X: (phi X - X phi)_{ij} = 0
    Matrix<F> sys(k, n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t row = i * n + j;
            for (std::size_t t = 0; t < n; ++t) {
                sys(row, t * n + j) = k.add(sys(row, t * n + j), phi(i, t));
                sys(row, i * n + t) = k.sub(sys(row, i * n + t), phi(t, j));
            }
        }
    auto ker = kernel(sys);
    std::vector<Matrix<F>> basis;
    for (std::size_t b = 0; b < ker.dim(); ++b) {
        Matrix<F> x(k, n, n);
        auto v = ker.basis().row(b);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) x(i, j) = v[i * n + j];
        basis.push_back(std::move(x));
    }
    return basis;
}

/// Brute-force oracle for commuting_equivalence_classes: enumerate the whole
/// commutant algebra over F_q, act with its invertible elements, and take
/// orbit closures.
inline std::vector<std::vector<std::size_t>> centralizer_partition(
    const Matrix<PrimeField>& phi, const std::vector<Flag<PrimeField>>& flags,
    std::int64_t budget = 10'000'000) {
    const PrimeField& k = phi.field();
    std::int64_t q = k.modulus();
    auto basis = commutant_basis(phi);
    double combos = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) combos *= static_cast<double>(q);
    if (combos > static_cast<double>(budget))
        throw budget_error("centralizer has ~" + std::to_string(combos) + " elements");

    std::vector<std::size_t> parent(flags.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    auto flag_index = [&](const Flag<PrimeField>& f) {
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i] == f) return i;
        fail(errc::invalid_argument, "moved flag not in the supplied list");
        return std::size_t{0};
    };

    std::size_t dim = basis.size();
    std::vector<std::int64_t> coeff(dim, 0);
    std::size_t n = phi.rows();
    for (;;) {
        Matrix<PrimeField> x(k, n, n);
        for (std::size_t b = 0; b < dim; ++b)
            if (coeff[b] != 0) x = mat_add(x, scalar_mul(k.from_int(coeff[b]), basis[b]));
        if (is_invertible(x))
            for (std::size_t i = 0; i < flags.size(); ++i)
                unite(i, flag_index(transport_flag(x, flags[i])));
        std::size_t pos = 0;
        while (pos < dim && coeff[pos] == q - 1) coeff[pos++] = 0;
        if (pos == dim) break;
        ++coeff[pos];
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < flags.size(); ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace charvar
