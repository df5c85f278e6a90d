#pragma once

#include <limits>

#include <json.hpp>

#include "charvar/census.hpp"

namespace charvar {

using Json = nlohmann::json;

/// Wire formats:
///   field tag      {"kind":"Q"} or {"kind":"Fp","p":5}
///   rational       string "num/den", "/den" omitted when the denominator is 1
///   prime element  plain integer
///   matrix         array of row arrays
///   flag           array of step bases (each a matrix)
///   permutation    one-line image list, 1-based

inline Json field_to_json(const FieldTag& tag) {
    if (tag.kind == FieldTag::Kind::rationals) return Json{{"kind", "Q"}};
    return Json{{"kind", "Fp"}, {"p", tag.p}};
}

inline FieldTag field_from_json(const Json& j) {
    require(j.is_object() && j.contains("kind"), errc::invalid_argument, "bad field tag");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "Q") return {FieldTag::Kind::rationals, 0};
    require(kind == "Fp", errc::invalid_argument, "field kind must be Q or Fp");
    require(j.contains("p"), errc::invalid_argument, "prime field tag needs p");
    return {FieldTag::Kind::prime, j.at("p").get<std::int64_t>()};
}

/// Calls fn with the live field object for a tag (validating the prime).
template <class Fn>
decltype(auto) visit_field(const FieldTag& tag, Fn&& fn) {
    if (tag.kind == FieldTag::Kind::rationals) return fn(Rationals{});
    return fn(PrimeField(tag.p));
}

inline Json scalar_to_json(const Rationals&, const BigRational& x) {
    if (denominator(x) == 1) return Json(numerator(x).str());
    return Json(numerator(x).str() + "/" + denominator(x).str());
}

inline Json scalar_to_json(const PrimeField&, std::int64_t x) { return Json(x); }

inline BigRational scalar_from_json(const Rationals&, const Json& j) {
    if (j.is_number_integer()) return BigRational(j.get<std::int64_t>());
    require(j.is_string(), errc::invalid_argument, "rational must be a string like \"3/4\"");
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        require(den != 0, errc::invalid_argument, "zero denominator");
        return BigRational(num, den);
    } catch (const std::runtime_error&) {
        fail(errc::invalid_argument, "cannot parse rational " + s);
    }
}

inline std::int64_t scalar_from_json(const PrimeField& k, const Json& j) {
    require(j.is_number_integer(), errc::invalid_argument, "prime-field element must be an integer");
    return k.from_int(j.get<std::int64_t>());
}

template <class F>
Json matrix_to_json(const Matrix<F>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.field(), m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class F>
Matrix<F> matrix_from_json(const F& field, const Json& j) {
    require(j.is_array() && !j.empty(), errc::invalid_argument, "matrix must be a row array");
    std::size_t rows = j.size();
    require(j[0].is_array(), errc::invalid_argument, "matrix rows must be arrays");
    std::size_t cols = j[0].size();
    Matrix<F> m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        require(j[i].is_array() && j[i].size() == cols, errc::invalid_argument, "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar_from_json(field, j[i][c]);
    }
    return m;
}

template <class F>
Json flag_to_json(const Flag<F>& f) {
    Json steps = Json::array();
    for (const auto& s : f.steps()) steps.push_back(matrix_to_json(s.basis()));
    return steps;
}

template <class F>
Flag<F> flag_from_json(const F& field, const Json& j) {
    require(j.is_array() && !j.empty(), errc::invalid_argument, "flag must be a list of bases");
    std::vector<Subspace<F>> steps;
    for (const auto& step : j)
        steps.push_back(Subspace<F>::from_rows(matrix_from_json(field, step)));
    return Flag<F>(std::move(steps));
}

inline Json relpos_to_json(const RelativePosition& p) {
    Json out = Json::array();
    for (auto v : p.image) out.push_back(v);
    return out;
}

inline Json surface_to_json(const SurfaceType& t) {
    return Json{{"g", t.g}, {"l", t.l}, {"r", t.r}, {"d", t.d}, {"m", t.m}};
}

inline SurfaceType surface_from_json(const Json& j) {
    SurfaceType t;
    t.g = j.at("g").get<int>();
    t.l = j.at("l").get<int>();
    t.r = j.at("r").get<int>();
    t.d = j.at("d").get<int>();
    if (j.contains("m")) t.m = j.at("m").get<std::vector<int>>();
    t.validate();
    return t;
}

inline Json marked_point_to_json(const MarkedPoint& p) {
    if (p.kind == MarkedPoint::Kind::secondary) return Json{{"kind", "secondary"}, {"i", p.i}};
    return Json{{"kind", "primary"}, {"i", p.i}, {"j", p.j}};
}

inline MarkedPoint marked_point_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "secondary") return MarkedPoint::secondary(j.at("i").get<int>());
    require(kind == "primary", errc::invalid_argument, "marked point kind");
    return MarkedPoint::primary(j.at("i").get<int>(), j.at("j").get<int>());
}

/// Parses generator names of the form a1, b2, g1, n1, t1_2, c1, d1.
inline GeneratorId generator_from_name(const std::string& name) {
    require(name.size() >= 2, errc::invalid_argument, "bad generator name " + name);
    char c = name[0];
    std::string rest = name.substr(1);
    auto parse_int = [&](const std::string& s) {
        require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos,
                errc::invalid_argument, "bad generator name " + name);
        return std::stoi(s);
    };
    switch (c) {
        case 'a': return {GeneratorId::Kind::alpha, parse_int(rest), 0};
        case 'b': return {GeneratorId::Kind::beta, parse_int(rest), 0};
        case 'g': return {GeneratorId::Kind::gamma, parse_int(rest), 0};
        case 'n': return {GeneratorId::Kind::delta, parse_int(rest), 0};
        case 'c': return {GeneratorId::Kind::c, parse_int(rest), 0};
        case 'd': return {GeneratorId::Kind::d, parse_int(rest), 0};
        case 't': {
            auto sep = rest.find('_');
            require(sep != std::string::npos, errc::invalid_argument,
                    "segment names look like t1_2");
            return {GeneratorId::Kind::delta_seg, parse_int(rest.substr(0, sep)),
                    parse_int(rest.substr(sep + 1))};
        }
        default: fail(errc::invalid_argument, "bad generator name " + name);
    }
}

inline Json presentation_to_json(const Presentation& p) {
    Json gens = Json::array();
    for (const auto& g : p.generators)
        gens.push_back(Json{{"name", g.name()},
                            {"source", marked_point_to_json(
                                           generator_source(g, p.surface, p.basepoint))},
                            {"target", marked_point_to_json(
                                           generator_target(g, p.surface, p.basepoint))}});
    Json relation = Json::array();
    for (const auto& l : p.relation.letters())
        relation.push_back(Json::array({l.gen.name(), l.exp}));
    Json out = surface_to_json(p.surface);
    out["basepoint"] = marked_point_to_json(p.basepoint);
    out["generators"] = std::move(gens);
    out["relation"] = std::move(relation);
    out["pinned"] = p.pinned.name();
    return out;
}

template <class F>
Json rep_to_json(const DecoratedRep<F>& rep) {
    Json out;
    out["surface"] = surface_to_json(rep.surface);
    out["n"] = rep.n;
    out["field"] = field_to_json(rep.field.tag());
    auto encode_list = [](const std::vector<Matrix<F>>& v) {
        Json arr = Json::array();
        for (const auto& m : v) arr.push_back(matrix_to_json(m));
        return arr;
    };
    out["A"] = encode_list(rep.A);
    out["B"] = encode_list(rep.B);
    out["M"] = encode_list(rep.M);
    out["N"] = encode_list(rep.N);
    out["C"] = encode_list(rep.C);
    out["D"] = encode_list(rep.D);
    Json t = Json::array();
    for (const auto& row : rep.T) t.push_back(encode_list(row));
    out["T"] = std::move(t);
    return out;
}

template <class F>
DecoratedRep<F> rep_from_json(const F& field, const Json& j) {
    SurfaceType t = surface_from_json(j.at("surface"));
    std::size_t n = j.at("n").get<std::size_t>();
    auto rep = DecoratedRep<F>::identity_rep(t, n, field);
    auto decode_list = [&](const char* key, std::vector<Matrix<F>>& into) {
        const Json& arr = j.at(key);
        require(arr.is_array() && arr.size() == into.size(), errc::shape_mismatch,
                std::string(key) + " has the wrong number of matrices");
        for (std::size_t i = 0; i < into.size(); ++i)
            into[i] = matrix_from_json(field, arr[i]);
    };
    decode_list("A", rep.A);
    decode_list("B", rep.B);
    decode_list("M", rep.M);
    decode_list("N", rep.N);
    decode_list("C", rep.C);
    decode_list("D", rep.D);
    const Json& tj = j.at("T");
    require(tj.is_array() && tj.size() == rep.T.size(), errc::shape_mismatch, "T shape");
    for (std::size_t i = 0; i < rep.T.size(); ++i) {
        require(tj[i].is_array() && tj[i].size() == rep.T[i].size(), errc::shape_mismatch,
                "T row shape");
        for (std::size_t k = 0; k < rep.T[i].size(); ++k)
            rep.T[i][k] = matrix_from_json(field, tj[i][k]);
    }
    rep.validate_shapes();
    return rep;
}

template <class F>
Json mixed_element_to_json(const MixedGroupElement<F>& x) {
    Json prim = Json::array();
    for (const auto& row : x.primary) {
        Json r = Json::array();
        for (const auto& m : row) r.push_back(matrix_to_json(m));
        prim.push_back(std::move(r));
    }
    Json sec = Json::array();
    for (const auto& m : x.secondary) sec.push_back(matrix_to_json(m));
    return Json{{"primary", std::move(prim)}, {"secondary", std::move(sec)}};
}

template <class F>
MixedGroupElement<F> mixed_element_from_json(const F& field, const SurfaceType& t, std::size_t n,
                                             const Json& j) {
    auto x = MixedGroupElement<F>::identity_element(t, n, field);
    const Json& prim = j.at("primary");
    require(prim.is_array() && prim.size() == x.primary.size(), errc::shape_mismatch,
            "primary factor count");
    for (std::size_t i = 0; i < x.primary.size(); ++i) {
        require(prim[i].is_array() && prim[i].size() == x.primary[i].size(), errc::shape_mismatch,
                "primary factor count");
        for (std::size_t k = 0; k < x.primary[i].size(); ++k)
            x.primary[i][k] = matrix_from_json(field, prim[i][k]);
    }
    const Json& sec = j.at("secondary");
    require(sec.is_array() && sec.size() == x.secondary.size(), errc::shape_mismatch,
            "secondary factor count");
    for (std::size_t i = 0; i < x.secondary.size(); ++i)
        x.secondary[i] = matrix_from_json(field, sec[i]);
    return x;
}

template <class F>
Json jordan_type_to_json(const JordanType<F>& jt, const F& field) {
    Json out = Json::array();
    for (const auto& b : jt.blocks)
        out.push_back(Json{{"eig", scalar_to_json(field, b.eigenvalue)}, {"part", b.partition}});
    return out;
}

inline Json shuffle_to_json(const Shuffle& s) {
    Json out = Json::array();
    for (const auto& b : s.order) out.push_back(b.label());
    return out;
}

inline TableauBox box_from_label(const std::string& label) {
    // labels look like "λ2:1.3"
    static const std::string lambda = "\xce\xbb";
    require(label.rfind(lambda, 0) == 0, errc::invalid_argument, "box label " + label);
    auto colon = label.find(':');
    auto dot = label.find('.', colon);
    require(colon != std::string::npos && dot != std::string::npos, errc::invalid_argument,
            "box label " + label);
    TableauBox b;
    b.eig = std::stoi(label.substr(lambda.size(), colon - lambda.size()));
    b.row = std::stoi(label.substr(colon + 1, dot - colon - 1));
    b.col = std::stoi(label.substr(dot + 1));
    return b;
}

inline Shuffle shuffle_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), errc::invalid_argument, "shuffle must be a label list");
    Shuffle s;
    for (const auto& entry : j) s.order.push_back(box_from_label(entry.get<std::string>()));
    return s;
}

/// The tableau shape is recoverable from any shuffle: row (e, r) has as many
/// boxes as its largest column index.
inline TableauShape shape_of_shuffle(const Shuffle& s) {
    std::map<std::pair<int, int>, int> row_len;
    int eigs = 0;
    for (const auto& b : s.order) {
        auto& len = row_len[{b.eig, b.row}];
        len = std::max(len, b.col);
        eigs = std::max(eigs, b.eig);
    }
    TableauShape shape(eigs);
    for (const auto& [key, len] : row_len) {
        auto [e, r] = key;
        require(r == static_cast<int>(shape[e - 1].size()) + 1, errc::invalid_argument,
                "row indices must be contiguous");
        shape[e - 1].push_back(len);
    }
    validate_shape(shape);
    return shape;
}

inline ShuffledJordanType type_from_json(const Json& j) {
    Shuffle s = shuffle_from_json(j);
    return ShuffledJordanType(shape_of_shuffle(s), s);
}

inline Json type_to_json(const ShuffledJordanType& t) { return shuffle_to_json(t.canonical()); }

template <class F>
Json fibre_to_json(const FibreDescription<F>& fib, const F& field) {
    Json per_point = Json::array();
    for (const auto& info : fib.per_point)
        per_point.push_back(Json{{"jordan_type", jordan_type_to_json(info.jt, field)},
                                 {"jw_count", info.jw.size()}});
    Json out;
    out["per_point"] = std::move(per_point);
    out["cardinality"] = fib.cardinality.str();
    out["generic"] = fib.generic;
    return out;
}

inline Json census_report_to_json(const CensusReport& r) {
    Json out;
    out["surface"] = surface_to_json(r.surface);
    out["n"] = r.n;
    out["q"] = r.q;
    out["class"] = action_name(r.cls);
    out["method"] = method_name(r.method);
    out["points"] = r.points;
    out["orbits"] = r.orbits;
    out["ms"] = r.millis;
    return out;
}

inline Json bigint_to_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return Json(static_cast<std::int64_t>(v));
    return Json(v.str());
}

}  // namespace charvar
