#pragma once

#include "charvar/jordan.hpp"
#include "charvar/repvar.hpp"

namespace charvar {

/// Fibre data of the forgetful covering over one representation: for each
/// secondary marked point, the boundary monodromy N_i, its Jordan type, and
/// the set J_W(N_i) of shuffled Jordan matrices of that type.  The fibre is
/// canonically the product of those sets, so its cardinality is the product
/// of their sizes; it equals (n!)^r exactly off the branch locus.
template <class F>
struct FibrePointInfo {
    Matrix<F> monodromy;
    JordanType<F> jt;
    std::vector<Matrix<F>> jw;
};

template <class F>
struct FibreDescription {
    std::vector<FibrePointInfo<F>> per_point;
    BigInt cardinality = 1;
    bool generic = false;  // true iff every N_i has all-distinct eigenvalues
};

/// The monodromy around the i-th secondary boundary: in the trivialized
/// model the boundary loop delta_i evaluates to N_i.
template <class F>
const Matrix<F>& boundary_monodromy(const DecoratedRep<F>& rep, int i) {
    rep.validate_shapes();
    require(i >= 1 && i <= rep.surface.r, errc::index_out_of_range,
            "no secondary marked point with index " + std::to_string(i));
    return rep.N[i - 1];
}

template <class F>
FibreDescription<F> fibre_over(const DecoratedRep<F>& rep, std::int64_t budget = 10'000'000) {
    rep.validate_shapes();
    FibreDescription<F> out;
    out.generic = true;
    for (int i = 1; i <= rep.surface.r; ++i) {
        const auto& ni = boundary_monodromy(rep, i);
        auto jt = jordan_type(ni);
        auto jw = jw_set(ni, budget);
        out.cardinality *= BigInt(jw.size());
        if (!jt.has_distinct_eigenvalues()) out.generic = false;
        out.per_point.push_back({ni, std::move(jt), std::move(jw)});
    }
    return out;
}

/// True iff the representation sits on the branch locus: some secondary
/// monodromy has a repeated eigenvalue.
template <class F>
bool is_branch_point(const DecoratedRep<F>& rep) {
    rep.validate_shapes();
    for (int i = 1; i <= rep.surface.r; ++i)
        if (!jordan_type(boundary_monodromy(rep, i)).has_distinct_eigenvalues()) return true;
    return false;
}

}  // namespace charvar
