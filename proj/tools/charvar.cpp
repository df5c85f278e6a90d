// charvar - exact computations on decorated surface representations:
// presentations, matrix tuples, relative positions, shuffled Jordan types,
// forgetful fibres, and finite-field censuses.  All input and output is JSON.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "charvar/json_io.hpp"

using namespace charvar;

namespace {

struct CommonIo {
    std::string in_path;
    bool pretty = false;

    Json read() const {
        Json j;
        if (in_path.empty() || in_path == "-") {
            std::cin >> j;
        } else {
            std::ifstream f(in_path);
            if (!f) fail(errc::invalid_argument, "cannot open " + in_path);
            f >> j;
        }
        return j;
    }

    void write(const Json& j) const {
        if (pretty)
            std::cout << j.dump(2) << "\n";
        else
            std::cout << j.dump() << "\n";
    }
};

SurfaceType surface_from_flags(int g, int l, int r, int d, const std::string& m_csv) {
    SurfaceType t{g, l, r, d, {}};
    if (!m_csv.empty()) {
        std::size_t pos = 0;
        while (pos < m_csv.size()) {
            auto comma = m_csv.find(',', pos);
            if (comma == std::string::npos) comma = m_csv.size();
            t.m.push_back(std::stoi(m_csv.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    t.validate();
    return t;
}

SurfaceType surface_from_csv(const std::string& csv) {
    std::vector<int> vals;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        vals.push_back(std::stoi(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    require(vals.size() >= 4, errc::invalid_argument,
            "--surface wants g,l,r,d[,m1,m2,...], e.g. 0,1,1,0");
    SurfaceType t{vals[0], vals[1], vals[2], vals[3],
                  std::vector<int>(vals.begin() + 4, vals.end())};
    t.validate();
    return t;
}

std::vector<int> partition_from_csv(const std::string& csv) {
    std::vector<int> part;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        part.push_back(std::stoi(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return part;
}

MarkedPoint basepoint_from_string(const std::string& s, const SurfaceType& t) {
    if (s.empty()) {
        return t.primary_points() >= 1 ? MarkedPoint::primary(1, 1) : MarkedPoint::secondary(1);
    }
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    if (kind == "secondary") return MarkedPoint::secondary(std::stoi(s.substr(colon + 1)));
    require(kind == "primary", errc::invalid_argument,
            "--basepoint wants primary:i,j or secondary:i");
    auto rest = s.substr(colon + 1);
    auto comma = rest.find(',');
    require(comma != std::string::npos, errc::invalid_argument, "primary basepoint wants i,j");
    return MarkedPoint::primary(std::stoi(rest.substr(0, comma)),
                                std::stoi(rest.substr(comma + 1)));
}

int run(int argc, char** argv) {
    CLI::App app{"exact character-variety computations over Q and F_p"};
    app.require_subcommand(1);
    CommonIo io;

    // present
    auto* present = app.add_subcommand("present", "finite presentation of pi_1(S, P)");
    int pg = 0, pl = 0, pr = 0, pd = 0;
    std::string pm, pbase;
    present->add_option("--g", pg, "genus");
    present->add_option("--l", pl, "simple boundaries");
    present->add_option("--r", pr, "regular boundaries");
    present->add_option("--d", pd, "irregular boundaries");
    present->add_option("--m", pm, "primary points per irregular boundary, e.g. 2 or 2,3");
    present->add_option("--basepoint", pbase, "primary:i,j or secondary:i");
    present->add_flag("--pretty", io.pretty, "indent output");
    present->callback([&] {
        auto t = surface_from_flags(pg, pl, pr, pd, pm);
        auto p = build_presentation(t, basepoint_from_string(pbase, t));
        io.write(presentation_to_json(p));
    });

    // dims
    auto* dims_cmd = app.add_subcommand("dims", "dimension formulas");
    int dg = 0, dl = 0, dr = 0, dd = 0;
    std::string dm, dobject = "rep";
    std::size_t dn = 2;
    dims_cmd->add_option("--g", dg, "genus");
    dims_cmd->add_option("--l", dl, "simple boundaries");
    dims_cmd->add_option("--r", dr, "regular boundaries");
    dims_cmd->add_option("--d", dd, "irregular boundaries");
    dims_cmd->add_option("--m", dm, "primary points per irregular boundary");
    dims_cmd->add_option("--n", dn, "rank");
    dims_cmd->add_option("--object", dobject, "rep | rep-hat | fi | fr | pfr | mon");
    dims_cmd->add_flag("--pretty", io.pretty, "indent output");
    dims_cmd->callback([&] {
        auto t = surface_from_flags(dg, dl, dr, dd, dm);
        SpaceKind kind;
        if (dobject == "rep") kind = SpaceKind::rep_variety;
        else if (dobject == "rep-hat") kind = SpaceKind::rep_variety_hat;
        else if (dobject == "fi") kind = SpaceKind::loc_fi;
        else if (dobject == "fr") kind = SpaceKind::loc_fr;
        else if (dobject == "pfr") kind = SpaceKind::loc_pfr;
        else if (dobject == "mon") kind = SpaceKind::mon_space;
        else fail(errc::invalid_argument, "unknown --object " + dobject);
        auto d = dims(t, dn, kind);
        io.write(Json{{"dim", d.value}, {"stack_caveat", d.stack_caveat}});
    });

    // sample
    auto* sample = app.add_subcommand("sample", "seeded random point of R_G over F_p");
    int sg = 0, sl = 0, sr = 0, sd = 0;
    std::string sm;
    std::size_t sn = 2;
    std::int64_t sp = 5;
    std::uint64_t sseed = 0;
    sample->add_option("--g", sg, "genus");
    sample->add_option("--l", sl, "simple boundaries");
    sample->add_option("--r", sr, "regular boundaries");
    sample->add_option("--d", sd, "irregular boundaries");
    sample->add_option("--m", sm, "primary points per irregular boundary");
    sample->add_option("--n", sn, "rank");
    sample->add_option("--p", sp, "prime modulus");
    sample->add_option("--seed", sseed, "RNG seed");
    sample->add_flag("--pretty", io.pretty, "indent output");
    sample->callback([&] {
        auto t = surface_from_flags(sg, sl, sr, sd, sm);
        PrimeField field(sp);
        io.write(rep_to_json(sample_random(t, sn, field, sseed)));
    });

    // verify
    auto* verify = app.add_subcommand("verify", "check the defining relation of a tuple");
    verify->add_option("--in", io.in_path, "input file (default stdin)");
    verify->add_flag("--pretty", io.pretty, "indent output");
    verify->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        bool ok = visit_field(tag, [&](const auto& field) {
            return verify_relation(rep_from_json(field, j));
        });
        io.write(Json{{"ok", ok}});
    });

    // solve
    auto* solve = app.add_subcommand("solve", "re-solve one M/N/T slot from the relation");
    std::string starget;
    solve->add_option("--target", starget, "generator name, e.g. g1, n1, t1_2")->required();
    solve->add_option("--in", io.in_path, "input file (default stdin)");
    solve->add_flag("--pretty", io.pretty, "indent output");
    solve->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        auto target = generator_from_name(starget);
        Json out = visit_field(tag, [&](const auto& field) {
            return rep_to_json(solve_for(rep_from_json(field, j), target));
        });
        io.write(out);
    });

    // act
    auto* act = app.add_subcommand("act", "mixed conjugation on a tuple");
    std::string acls = "fi";
    std::uint64_t aseed = 0;
    act->add_option("--class", acls, "fi | fr | pfr");
    auto* aseed_opt =
        act->add_option("--seed", aseed, "act by a seeded random element instead of input x");
    act->add_option("--in", io.in_path, "input file (default stdin)");
    act->add_flag("--pretty", io.pretty, "indent output");
    act->callback([&] {
        Json j = io.read();
        DecorationClass cls;
        if (acls == "fi") cls = DecorationClass::Fi;
        else if (acls == "fr") cls = DecorationClass::Fr;
        else if (acls == "pfr") cls = DecorationClass::PFr;
        else fail(errc::invalid_argument, "unknown --class " + acls);
        const Json& repj = j.contains("rep") ? j.at("rep") : j;
        FieldTag tag = field_from_json(repj.at("field"));
        require(tag.kind == FieldTag::Kind::prime || j.contains("x"), errc::invalid_argument,
                "over Q the element x must be supplied");
        Json out = visit_field(tag, [&](const auto& field) -> Json {
            using FieldT = std::decay_t<decltype(field)>;
            auto rep = rep_from_json(field, repj);
            MixedGroupElement<FieldT> x =
                MixedGroupElement<FieldT>::identity_element(rep.surface, rep.n, field);
            if (j.contains("x")) {
                x = mixed_element_from_json(field, rep.surface, rep.n, j.at("x"));
            } else if constexpr (std::is_same_v<FieldT, PrimeField>) {
                require(aseed_opt->count() > 0, errc::invalid_argument, "provide x or --seed");
                std::mt19937_64 rng(aseed);
                x = random_mixed(rep.surface, rep.n, field, cls, rng);
            }
            Json res = rep_to_json(mixed_conjugate(x, rep, cls));
            res["x"] = mixed_element_to_json(x);
            return res;
        });
        io.write(out);
    });

    // relpos
    auto* relpos = app.add_subcommand("relpos", "relative position of two complete flags");
    relpos->add_option("--in", io.in_path, "input file (default stdin)");
    relpos->add_flag("--pretty", io.pretty, "indent output");
    relpos->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto f = flag_from_json(field, j.at("f"));
            auto f2 = flag_from_json(field, j.at("f2"));
            return Json{{"pos", relpos_to_json(relative_position(f, f2))}};
        });
        io.write(out);
    });

    // stratum
    auto* stratum_cmd = app.add_subcommand("stratum", "relative positions over all segments");
    stratum_cmd->add_option("--in", io.in_path, "input file (default stdin)");
    stratum_cmd->add_flag("--pretty", io.pretty, "indent output");
    stratum_cmd->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto rep = rep_from_json(field, j);
            Json sig = Json::array();
            for (const auto& pos : stratum(rep)) sig.push_back(relpos_to_json(pos));
            return Json{{"stratum", std::move(sig)}};
        });
        io.write(out);
    });

    // jordan-type
    auto* jt_cmd = app.add_subcommand("jordan-type", "Jordan type of a square matrix");
    jt_cmd->add_option("--in", io.in_path, "input file (default stdin)");
    jt_cmd->add_flag("--pretty", io.pretty, "indent output");
    jt_cmd->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto m = matrix_from_json(field, j.at("matrix"));
            return jordan_type_to_json(jordan_type(m), field);
        });
        io.write(out);
    });

    // shuffles / types
    auto add_shape_options = [](CLI::App* cmd, std::vector<std::string>& parts) {
        parts.assign(3, "");
        cmd->add_option("--part", parts[0], "partition, e.g. 3,2,2,1");
        cmd->add_option("--part2", parts[1], "second eigenvalue's partition");
        cmd->add_option("--part3", parts[2], "third eigenvalue's partition");
    };
    auto shape_from_parts = [](const std::vector<std::string>& parts) {
        TableauShape shape;
        for (const auto& s : parts)
            if (!s.empty()) shape.push_back(partition_from_csv(s));
        validate_shape(shape);
        return shape;
    };

    auto* shuffles_cmd = app.add_subcommand("shuffles", "count or list shuffles of a shape");
    std::vector<std::string> sh_parts;
    bool sh_list = false;
    add_shape_options(shuffles_cmd, sh_parts);
    shuffles_cmd->add_flag("--list", sh_list, "emit the full lexicographic enumeration");
    shuffles_cmd->add_flag("--pretty", io.pretty, "indent output");
    shuffles_cmd->callback([&] {
        auto shape = shape_from_parts(sh_parts);
        Json out{{"shuffles", bigint_to_json(count_shuffles(shape))}};
        if (sh_list) {
            Json items = Json::array();
            for (const auto& s : enumerate_shuffles(shape, default_budget()))
                items.push_back(shuffle_to_json(s));
            out["items"] = std::move(items);
        }
        io.write(out);
    });

    auto* types_cmd = app.add_subcommand("types", "count or list shuffled Jordan types");
    std::vector<std::string> ty_parts;
    bool ty_list = false;
    add_shape_options(types_cmd, ty_parts);
    types_cmd->add_flag("--list", ty_list, "emit canonical representatives");
    types_cmd->add_flag("--pretty", io.pretty, "indent output");
    types_cmd->callback([&] {
        auto shape = shape_from_parts(ty_parts);
        Json out{{"shuffles", bigint_to_json(count_shuffles(shape))},
                 {"types", bigint_to_json(count_shuffled_jordan_types(shape))}};
        if (ty_list) {
            Json items = Json::array();
            for (const auto& t : enumerate_shuffled_jordan_types(shape, default_budget()))
                items.push_back(type_to_json(t));
            out["items"] = std::move(items);
        }
        io.write(out);
    });

    // jw
    auto* jw_cmd = app.add_subcommand("jw", "all shuffled Jordan matrices with Jt(phi)");
    jw_cmd->add_option("--in", io.in_path, "input file (default stdin)");
    jw_cmd->add_flag("--pretty", io.pretty, "indent output");
    jw_cmd->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto phi = matrix_from_json(field, j.at("matrix"));
            auto jt = jordan_type(phi);
            auto types = enumerate_shuffled_jordan_types(jt.shape(), default_budget());
            Json items = Json::array();
            for (const auto& t : types)
                items.push_back(Json{{"matrix", matrix_to_json(shuffled_matrix(jt, t, field))},
                                     {"type", type_to_json(t)}});
            std::size_t count = items.size();
            return Json{{"jw", std::move(items)}, {"count", count}};
        });
        io.write(out);
    });

    // classify-flag
    auto* classify = app.add_subcommand("classify-flag", "shuffled Jordan type of an invariant flag");
    classify->add_option("--in", io.in_path, "input file (default stdin)");
    classify->add_flag("--pretty", io.pretty, "indent output");
    classify->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto phi = matrix_from_json(field, j.at("matrix"));
            auto f = flag_from_json(field, j.at("flag"));
            return Json{{"type", type_to_json(classify_invariant_flag(phi, f))}};
        });
        io.write(out);
    });

    // flag-from-type
    auto* fft = app.add_subcommand("flag-from-type", "invariant flag realizing a type");
    fft->add_option("--in", io.in_path, "input file (default stdin)");
    fft->add_flag("--pretty", io.pretty, "indent output");
    fft->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto phi = matrix_from_json(field, j.at("matrix"));
            auto t = type_from_json(j.at("type"));
            return Json{{"flag", flag_to_json(flag_from_type(phi, t))}};
        });
        io.write(out);
    });

    // fibre
    auto* fibre_cmd = app.add_subcommand("fibre", "fibre of the forgetful covering over a tuple");
    fibre_cmd->add_option("--in", io.in_path, "input file (default stdin)");
    fibre_cmd->add_flag("--pretty", io.pretty, "indent output");
    fibre_cmd->callback([&] {
        Json j = io.read();
        FieldTag tag = field_from_json(j.at("field"));
        Json out = visit_field(tag, [&](const auto& field) {
            auto rep = rep_from_json(field, j);
            return fibre_to_json(fibre_over(rep, default_budget()), field);
        });
        io.write(out);
    });

    // census
    auto* census_cmd = app.add_subcommand("census", "finite-field brute-force censuses");
    std::string csurface = "0,1,1,0", cclass = "fi", cmethod = "orbits", cmode = "orbits";
    std::string celiminate, cout_path;
    std::size_t cn = 2;
    std::int64_t cq = 2;
    int cjobs = 1;
    census_cmd->add_option("--surface", csurface, "g,l,r,d[,m1,...]");
    census_cmd->add_option("--n", cn, "rank");
    census_cmd->add_option("--q", cq, "prime field size");
    census_cmd->add_option("--class", cclass, "fi | fr | pfr | g");
    census_cmd->add_option("--method", cmethod, "orbits | burnside");
    census_cmd->add_option("--mode", cmode, "orbits | points | bconj | invflag | basepoint");
    census_cmd->add_option("--eliminate", celiminate, "generator to solve for, e.g. t1_2");
    census_cmd->add_option("--jobs", cjobs, "worker threads for the orbit sweep");
    census_cmd->add_option("--out", cout_path, "append the report as a JSON line to this file");
    census_cmd->add_flag("--pretty", io.pretty, "indent output");
    census_cmd->callback([&] {
        Json out;
        if (cmode == "bconj") {
            auto r = b_conjugacy_census(cn, cq, default_budget());
            out = Json{{"n", cn},
                       {"q", cq},
                       {"classes", r.class_count},
                       {"jw_count", r.jw_count},
                       {"match", r.class_count == r.jw_count}};
        } else if (cmode == "invflag") {
            auto r = invariant_flag_census(cn, cq, default_budget());
            out = Json{{"n", cn},
                       {"q", cq},
                       {"checked", r.checked},
                       {"skipped_nonsplit", r.skipped_nonsplit},
                       {"mismatches", r.mismatches},
                       {"match", r.all_match()}};
        } else {
            auto t = surface_from_csv(csurface);
            PrimeField field(cq);
            if (cmode == "basepoint") {
                out = Json{{"surface", surface_to_json(t)},
                           {"n", cn},
                           {"q", cq},
                           {"orbits", single_basepoint_orbit_count(t, cn, field,
                                                                   default_budget())}};
            } else {
                CensusOptions opts;
                opts.budget = default_budget();
                opts.jobs = cjobs;
                if (!celiminate.empty()) opts.eliminate = generator_from_name(celiminate);
                if (cmode == "points") {
                    std::int64_t count = 0;
                    enumerate_points(t, cn, field, opts, cclass == "g",
                                     [&](const DecoratedRep<PrimeField>&) { ++count; });
                    out = Json{{"surface", surface_to_json(t)},
                               {"n", cn},
                               {"q", cq},
                               {"points", count}};
                } else {
                    require(cmode == "orbits", errc::invalid_argument, "unknown --mode " + cmode);
                    ActionClass cls;
                    if (cclass == "fi") cls = ActionClass::fi;
                    else if (cclass == "fr") cls = ActionClass::fr;
                    else if (cclass == "pfr") cls = ActionClass::pfr;
                    else if (cclass == "g") cls = ActionClass::full_g;
                    else fail(errc::invalid_argument, "unknown --class " + cclass);
                    CountMethod method;
                    if (cmethod == "orbits") method = CountMethod::direct_orbits;
                    else if (cmethod == "burnside") method = CountMethod::burnside;
                    else fail(errc::invalid_argument, "unknown --method " + cmethod);
                    out = census_report_to_json(orbit_count(t, cn, field, cls, method, opts));
                }
            }
        }
        if (!cout_path.empty()) {
            std::ofstream f(cout_path, std::ios::app);
            if (!f) fail(errc::invalid_argument, "cannot open " + cout_path);
            f << out.dump() << "\n";
        }
        io.write(out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const budget_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "json: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
