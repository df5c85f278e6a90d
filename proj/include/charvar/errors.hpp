#pragma once

#include <stdexcept>
#include <string>

namespace charvar {

enum class errc {
    shape_mismatch,
    field_mismatch,
    singular,
    not_composable,
    cannot_eliminate,
    not_in_borel,
    not_invariant,
    eigenvalues_not_in_field,
    type_shape_mismatch,
    no_marked_points,
    no_holes,
    index_out_of_range,
    invalid_segment,
    wrong_subgroup,
    pinning_violated,
    nothing_to_eliminate,
    invalid_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::singular: return "Singular";
        case errc::not_composable: return "NotComposable";
        case errc::cannot_eliminate: return "CannotEliminate";
        case errc::not_in_borel: return "NotInBorel";
        case errc::not_invariant: return "NotInvariant";
        case errc::eigenvalues_not_in_field: return "EigenvaluesNotInField";
        case errc::type_shape_mismatch: return "TypeShapeMismatch";
        case errc::no_marked_points: return "NoMarkedPoints";
        case errc::no_holes: return "NoHoles";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::invalid_segment: return "InvalidSegment";
        case errc::wrong_subgroup: return "WrongSubgroup";
        case errc::pinning_violated: return "PinningViolated";
        case errc::nothing_to_eliminate: return "NothingToEliminate";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Domain-rule violation (bad shapes, singular input, value outside the field, ...).
class domain_error : public std::runtime_error {
  public:
    domain_error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

/// An enumeration or search would exceed its hard budget.  A census that
/// silently truncates is not an oracle, so this is always an error.
class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what)
        : std::runtime_error("EnumerationTooLarge: " + what) {}
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw domain_error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace charvar
