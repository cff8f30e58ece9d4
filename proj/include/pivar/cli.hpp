#pragma once

#include "pivar/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace pivar::cli {

/// Everything a run needs; every budget and seed echoed into the report
/// equals the configured value.
struct RunConfig {
    std::vector<std::string> algebras;
    std::string in, out, presheaf, topology, target;
    std::string pattern, vars, point, kind = "odd";
    int degree = -1;
    int size = 2;
    int nvars = 2, cap = 3, samples = 100;
    int rank = 1;
    bool graded = false;
    long long budget = 100'000'000;
    std::uint64_t seed = 0;

    Budget to_budget() const { return Budget{budget, 6}; }

    Json echo() const {
        Json j;
        if (!algebras.empty()) j["algebra"] = algebras;
        if (!in.empty()) j["in"] = in;
        if (!presheaf.empty()) j["presheaf"] = presheaf;
        if (!topology.empty()) j["topology"] = topology;
        if (!target.empty()) j["target"] = target;
        if (!pattern.empty()) j["pattern"] = pattern;
        if (!vars.empty()) j["vars"] = vars;
        if (!point.empty()) j["point"] = point;
        if (degree >= 0) j["degree"] = degree;
        j["budget"] = budget;
        j["seed"] = seed;
        return j;
    }
};

namespace detail {

inline std::vector<GroupElem> parse_pattern_degrees(const std::string& s) {
    std::vector<GroupElem> out;
    std::stringstream slots(s);
    std::string slot;
    while (std::getline(slots, slot, ';')) {
        GroupElem g;
        if (!slot.empty()) {
            std::stringstream coords(slot);
            std::string c;
            while (std::getline(coords, c, ',')) g.push_back(std::stoll(c));
        }
        out.push_back(std::move(g));
    }
    return out;
}

inline std::vector<GradedVariable> parse_variable_list(const std::string& s) {
    std::vector<GradedVariable> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        pivar::detail::PolyParser p{tok};
        out.push_back(p.parse_variable());
    }
    return out;
}

/// Kernel source from a CLI algebra spec; "E:oo" is the Grassmann oracle
/// (graded when the pattern carries Z_2 degrees, ungraded otherwise).
/// When `graded` is false the algebra's grading is forgotten, so patterns
/// of neutral degree mean classical unrestricted substitution.
struct SourceHolder {
    std::optional<FiniteGradedAlgebra> algebra;
    std::optional<GrassmannOracle> oracle;

    KernelSource source() const {
        if (oracle) return *oracle;
        return &*algebra;
    }
};

inline SourceHolder load_source(const std::string& spec, bool graded) {
    SourceHolder h;
    if (spec == "E:oo") {
        h.oracle = GrassmannOracle{graded};
        return h;
    }
    h.algebra = load_algebra(spec);
    if (!graded) {
        h.algebra->group = GradingGroup::trivial();
        for (auto& g : h.algebra->degrees) g = GroupElem{};
    }
    return h;
}

inline MultilinearPattern pattern_from_config(const RunConfig& cfg, const KernelSource& src) {
    MultilinearPattern pat;
    pat.group = source_group(src);
    if (!cfg.pattern.empty()) {
        for (auto& g : parse_pattern_degrees(cfg.pattern))
            pat.degrees.push_back(pat.group.normalize(g));
    } else {
        if (cfg.degree < 1) throw StructuralError("--degree (or --pattern) required");
        pat.degrees.assign(cfg.degree, pat.group.identity());
    }
    return pat;
}

inline PresheafOfAlgebras load_presheaf(const RunConfig& cfg) {
    if (cfg.presheaf.empty()) throw StructuralError("--presheaf required");
    Json j = read_json_file(cfg.presheaf);
    if (!cfg.topology.empty() && !j.contains("topology"))
        j["topology"] = read_json_file(cfg.topology);
    return presheaf_from_json(j);
}

inline FiniteTopology load_topology(const RunConfig& cfg) {
    if (cfg.topology.empty()) throw StructuralError("--topology required");
    return topology_from_json(read_json_file(cfg.topology));
}

inline MoritaContext load_morita_context(const Json& j, FiniteGradedAlgebra& a_store,
                                         FiniteGradedAlgebra& b_store) {
    MoritaContext ctx;
    a_store = j.at("A").is_string() ? load_algebra(j["A"].get<std::string>())
                                    : algebra_from_json(j["A"]);
    b_store = j.at("B").is_string() ? load_algebra(j["B"].get<std::string>())
                                    : algebra_from_json(j["B"]);
    ctx.A = &a_store;
    ctx.B = &b_store;
    ctx.n = j.at("n").get<int>();
    ctx.e_coords = rat_vec_from_json(j.at("e"));
    if (j.contains("iso") && !j["iso"].is_null()) ctx.iso = matrix_from_json(j["iso"]);
    return ctx;
}

}  // namespace detail

/// Dispatches one parsed command; returns the reports for the document.
inline std::vector<VerificationReport> dispatch(const std::vector<std::string>& path,
                                                const RunConfig& cfg) {
    std::vector<VerificationReport> reports;
    const std::string cmd = path.empty() ? "" : path[0];
    const std::string sub = path.size() > 1 ? path[1] : "";
    const Budget budget = cfg.to_budget();

    if (cmd == "algebra") {
        if (cfg.algebras.empty() && cfg.in.empty())
            throw StructuralError("algebra commands need --algebra or --in");
        auto a = cfg.algebras.empty() ? algebra_from_json(read_json_file(cfg.in))
                                      : load_algebra(cfg.algebras[0]);
        if (sub == "validate" || sub == "build") {
            auto rep = validate_algebra(a);
            if (sub == "build") rep.data["algebra"] = algebra_to_json(a);
            reports.push_back(std::move(rep));
            return reports;
        }
    } else if (cmd == "identities") {
        if (sub == "check") {
            if (cfg.algebras.empty()) throw StructuralError("--algebra required");
            std::string text;
            if (!cfg.in.empty()) {
                std::ifstream f(cfg.in);
                if (!f) throw StructuralError("cannot open " + cfg.in);
                std::stringstream ss;
                ss << f.rdbuf();
                text = ss.str();
            } else {
                throw StructuralError("identities check needs --in <polynomial file>");
            }
            auto poly = parse_polynomial(text);
            bool graded = false;
            for (const auto& v : poly.variables())
                if (!v.degree.empty()) graded = true;
            auto holder = detail::load_source(cfg.algebras[0], graded);
            KernelCache cache(holder.source(), budget);
            auto verdict = is_graded_identity(poly, cache);
            VerificationReport rep{"is_graded_identity",
                                   verdict.holds ? Verdict::Pass : Verdict::Fail,
                                   Json{{"polynomial", text}}};
            if (!verdict.holds) rep.data["witness"] = verdict.witness;
            reports.push_back(std::move(rep));
            return reports;
        }
        if (sub == "kernel") {
            if (cfg.algebras.empty()) throw StructuralError("--algebra required");
            auto holder = detail::load_source(cfg.algebras[0], !cfg.pattern.empty());
            KernelCache cache(holder.source(), budget);
            auto pat = detail::pattern_from_config(cfg, holder.source());
            const auto& k = cache.kernel(pat);
            // kernel elements as {word, coefficient} records
            Json basis = Json::array();
            for (const auto& f : k.polynomials()) {
                Json records = Json::array();
                for (const auto& [w, c] : f.terms)
                    records.push_back(Json{{"word", word_to_string(w)},
                                           {"coefficient", rat_to_string(c)}});
                basis.push_back(records);
            }
            Json degs = Json::array();
            for (const auto& g : pat.degrees) degs.push_back(degree_to_string(g));
            reports.push_back(VerificationReport::pass(
                "identity_kernel", Json{{"pattern", degs},
                                        {"codimension", k.codimension},
                                        {"kernel_dimension", k.kernel_basis.size()},
                                        {"kernel_basis", basis}}));
            return reports;
        }
        if (sub == "codim") {
            if (cfg.algebras.empty() || cfg.degree < 1)
                throw StructuralError("--algebra and --degree required");
            auto holder = detail::load_source(cfg.algebras[0], cfg.graded);
            KernelCache cache(holder.source(), budget);
            Json table = Json::array();
            for (const auto& [n, c] : codimension_table(cache, cfg.degree))
                table.push_back(Json::array({n, c}));
            reports.push_back(
                VerificationReport::pass("codimension_table", Json{{"table", table}}));
            return reports;
        }
        if (sub == "variety") {
            if (cfg.algebras.size() < 2 || cfg.degree < 1)
                throw StructuralError("variety needs two --algebra flags and --degree");
            auto ha = detail::load_source(cfg.algebras[0], true);
            auto hb = detail::load_source(cfg.algebras[1], true);
            KernelCache ca(ha.source(), budget), cb(hb.source(), budget);
            auto rep = variety_contains(ca, cb, cfg.degree);
            reports.push_back(VerificationReport{
                "variety_contains", rep.contained ? Verdict::Pass : Verdict::Fail,
                rep.to_json()});
            return reports;
        }
        if (sub == "relfree") {
            if (cfg.algebras.empty() || cfg.degree < 1 || cfg.vars.empty())
                throw StructuralError("relfree needs --algebra, --vars, --degree");
            auto vars = detail::parse_variable_list(cfg.vars);
            bool graded = false;
            for (const auto& v : vars)
                if (!v.degree.empty()) graded = true;
            auto holder = detail::load_source(cfg.algebras[0], graded);
            KernelCache cache(holder.source(), budget);
            auto t = relatively_free_truncation(cache, vars, cfg.degree);
            Json words = Json::array();
            for (const auto& w : t.basis_words) words.push_back(word_to_string(w));
            reports.push_back(VerificationReport::pass(
                "relatively_free_truncation",
                Json{{"dimension", t.dim()}, {"basis_words", words},
                     {"truncation_degree", cfg.degree}}));
            return reports;
        }
    } else if (cmd == "sheaf") {
        if (sub == "check") {
            auto f = detail::load_presheaf(cfg);
            std::optional<FiniteGradedAlgebra> ref;
            std::optional<KernelCache> ref_cache;
            if (!cfg.algebras.empty()) {
                ref = load_algebra(cfg.algebras[0]);
                ref_cache.emplace(&*ref, budget);
            }
            reports.push_back(check_presheaf(f, ref_cache ? &*ref_cache : nullptr,
                                             cfg.degree > 0 ? cfg.degree : 0));
            if (reports.back().passed()) reports.push_back(check_sheaf(f));
            return reports;
        }
        if (sub == "stalk") {
            auto f = detail::load_presheaf(cfg);
            if (cfg.point.empty()) throw StructuralError("--point required");
            int idx = -1;
            for (int i = 0; i < f.top.npoints(); ++i)
                if (f.top.points[i] == cfg.point) idx = i;
            if (idx < 0) throw StructuralError("unknown point " + cfg.point);
            auto s = stalk_at(f, idx);
            reports.push_back(VerificationReport::pass(
                "stalk", Json{{"point", cfg.point},
                              {"minimal_open", f.top.subset_name(s.minimal_open)},
                              {"stalk_dim", s.algebra->dim}}));
            return reports;
        }
        if (sub == "sheafify") {
            auto f = detail::load_presheaf(cfg);
            auto sff = sheafify(f);
            Json dims = Json::object();
            Json eta = Json::object();
            for (OpenMask u : f.top.opens) {
                dims[f.top.subset_name(u)] = sff.sheaf.at(u).dim;
                if (u != 0) eta[f.top.subset_name(u)] = is_isomorphism_matrix(sff.eta.at(u));
            }
            auto rep = check_sheaf(sff.sheaf);
            reports.push_back(VerificationReport{
                "sheafify", rep.passed() ? Verdict::Pass : Verdict::Fail,
                Json{{"section_dims", dims}, {"eta_invertible", eta}}});
            if (!cfg.out.empty()) {
                std::ofstream outf(cfg.out);
                outf << presheaf_to_json(sff.sheaf).dump(2) << "\n";
            }
            return reports;
        }
        if (sub == "pushforward") {
            auto f = detail::load_presheaf(cfg);
            if (cfg.in.empty()) throw StructuralError("pushforward needs --in <map file>");
            Json mj = read_json_file(cfg.in);
            auto target = topology_from_json(mj.at("target_topology"));
            auto map = mj.at("point_map").get<std::vector<int>>();
            auto g = pushforward(f.top, target, map, f);
            Json dims = Json::object();
            for (OpenMask u : target.opens) dims[target.subset_name(u)] = g.at(u).dim;
            reports.push_back(VerificationReport::pass("pushforward", Json{{"section_dims", dims}}));
            reports.push_back(check_sheaf(g));
            if (!cfg.out.empty()) {
                std::ofstream outf(cfg.out);
                outf << presheaf_to_json(g).dump(2) << "\n";
            }
            return reports;
        }
        if (sub == "locally-ringed") {
            reports.push_back(check_locally_ringed(detail::load_presheaf(cfg)));
            return reports;
        }
        if (sub == "cech") {
            auto t = detail::load_topology(cfg);
            const int h1 = cech_h1(t, constant_vector_sheaf(t, cfg.rank));
            reports.push_back(VerificationReport::pass(
                "cech_h1", Json{{"h1", h1}, {"coefficients", "constant sheaf"},
                                {"rank", cfg.rank}}));
            return reports;
        }
        if (sub == "recover") {
            auto f = detail::load_presheaf(cfg);
            if (cfg.target.empty()) throw StructuralError("recover needs --target <presheaf>");
            Json j = read_json_file(cfg.target);
            auto g = presheaf_from_json(j);
            RecoveringOptions opt;
            opt.truncation_degree = cfg.degree > 0 ? cfg.degree : 3;
            opt.budget = budget;
            auto rec = build_recovering_morphism(f, g, opt);
            reports.push_back(rec.report);
            return reports;
        }
    } else if (cmd == "calculus") {
        if (sub == "omega1" || sub == "der" || sub == "hochschild" || sub == "tangent") {
            if (cfg.algebras.empty()) throw StructuralError("--algebra required");
            auto a = load_algebra(cfg.algebras[0]);
            if (sub == "omega1") {
                auto kf = kaehler_one_forms(a);
                reports.push_back(VerificationReport::pass(
                    "kaehler_one_forms",
                    Json{{"omega1_dim", kf.omega.dim}, {"algebra_dim", a.dim}}));
            } else if (sub == "der") {
                auto der = derivations(a, regular_bimodule(a));
                Json basis = Json::array();
                for (const auto& d : der.basis) basis.push_back(matrix_to_json(d));
                reports.push_back(VerificationReport::pass(
                    "derivations", Json{{"dim", der.dim()}, {"basis_matrices", basis}}));
            } else if (sub == "hochschild") {
                auto hh = hochschild_low(a);
                Json j{{"hh0_dim", hh.hh0.size()},
                       {"inner_dim", hh.inner_basis.size()},
                       {"der_dim", hh.der.dim()},
                       {"hh1", hh.hh1}};
                reports.push_back(VerificationReport{
                    "hochschild_low", hh.certificate.verdict, std::move(j)});
            } else {
                auto kf = kaehler_one_forms(a);
                auto t = tangent_object(a, kf, regular_bimodule(a));
                reports.push_back(VerificationReport{
                    "tangent_object", t.verified ? Verdict::Pass : Verdict::Fail,
                    Json{{"der_dim", t.der.dim()}, {"hom_dim", t.hom_basis.size()}}});
            }
            return reports;
        }
        if (sub == "fedosov") {
            FormsArena arena{cfg.nvars, cfg.cap};
            if (!cfg.in.empty()) {
                Json j = read_json_file(cfg.in);
                PolyForm alpha = parse_form(arena, j.at("alpha").get<std::string>());
                PolyForm beta = parse_form(arena, j.at("beta").get<std::string>());
                PolyForm prod = fedosov_product(arena, alpha, beta);
                PolyForm comm = fedosov_commutator(arena, alpha, beta);
                reports.push_back(VerificationReport::pass(
                    "fedosov_product",
                    Json{{"product", form_to_string(arena, prod)},
                         {"commutator", form_to_string(arena, comm)}}));
                return reports;
            }
            reports.push_back(fedosov_identity_report(arena, cfg.samples, cfg.seed));
            return reports;
        }
        if (sub == "filtration") {
            if (cfg.algebras.empty()) throw StructuralError("--algebra required");
            auto a = load_algebra(cfg.algebras[0]);
            if (cfg.kind == "odd") {
                auto filt = odd_ideal_filtration(a);
                Json dims = Json::array();
                for (const auto& l : filt.chain.levels) dims.push_back(l.size());
                reports.push_back(VerificationReport::pass(
                    "odd_ideal_filtration",
                    Json{{"power_dims", dims}, {"reached_zero", filt.chain.reached_zero},
                         {"gr_dim", filt.gr.algebra.dim}}));
            } else if (cfg.kind == "comm") {
                const int depth = cfg.degree > 0 ? cfg.degree : 4;
                auto filt = commutator_filtration(a, depth);
                Json dims = Json::array();
                for (const auto& l : filt.chain.levels) dims.push_back(l.size());
                Json j{{"level_dims", dims},
                       {"abelianization_dim", filt.abelianization.algebra.dim},
                       {"unit_collapsed", filt.unit_collapsed},
                       {"depth", depth}};
                if (filt.order >= 0) j["nilcommutative_order"] = filt.order;
                else j["nilcommutative_order"] = "order > " + std::to_string(depth);
                reports.push_back(VerificationReport::pass("commutator_filtration", std::move(j)));
            } else {
                throw StructuralError("--kind must be odd or comm");
            }
            return reports;
        }
    } else if (cmd == "morita") {
        if (sub == "matrix") {
            if (cfg.algebras.empty()) throw StructuralError("--algebra required");
            auto b = load_algebra(cfg.algebras[0]);
            auto m = matrix_over(b, cfg.size);
            Json dims = Json::object();
            for (const auto& [g, d] : m.component_dims()) dims[degree_to_string(g)] = d;
            auto rep = validate_algebra(m);
            rep.check = "matrix_over";
            rep.data["dim"] = m.dim;
            rep.data["component_dims"] = dims;
            if (!cfg.out.empty()) {
                std::ofstream outf(cfg.out);
                outf << algebra_to_json(m).dump(2) << "\n";
            }
            reports.push_back(std::move(rep));
            return reports;
        }
        if (sub == "corner" || sub == "certify" || sub == "morphism") {
            if (cfg.in.empty()) throw StructuralError("--in <morita context file> required");
            Json j = read_json_file(cfg.in);
            FiniteGradedAlgebra a_store, b_store;
            MoritaContext ctx = detail::load_morita_context(j, a_store, b_store);
            if (sub == "corner") {
                auto m = matrix_over(*ctx.B, ctx.n);
                auto corner = corner_algebra(
                    m, make_homogeneous(m, ctx.e_coords, m.group.identity()));
                reports.push_back(VerificationReport::pass(
                    "corner_algebra",
                    Json{{"corner_dim", corner.dim}, {"matrix_dim", m.dim}}));
                if (!cfg.out.empty()) {
                    std::ofstream outf(cfg.out);
                    outf << algebra_to_json(corner).dump(2) << "\n";
                }
                return reports;
            }
            const int d = cfg.degree > 0 ? cfg.degree : 3;
            if (sub == "certify") {
                reports.push_back(corner_variety_certificate(ctx, d, budget).report);
                return reports;
            }
            auto f = detail::load_presheaf(cfg);
            if (cfg.target.empty()) throw StructuralError("morphism needs --target <presheaf>");
            auto g = presheaf_from_json(read_json_file(cfg.target));
            reports.push_back(morita_ringed_morphism(f, g, ctx, d, budget).report);
            return reports;
        }
    } else if (cmd == "suite") {
        if (sub.empty()) throw StructuralError("suite needs a name");
        return suite::run_suite_reports(sub);
    }
    throw StructuralError("unknown command");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::vector<std::string> path;

    CLI::App app{"verification engine for geometries modeled by graded PI-algebras"};
    app.require_subcommand(0);
    const std::vector<std::pair<std::string, std::vector<std::string>>> grammar{
        {"algebra", {"validate", "build"}},
        {"identities", {"check", "kernel", "codim", "variety", "relfree"}},
        {"sheaf",
         {"check", "stalk", "sheafify", "pushforward", "locally-ringed", "cech", "recover"}},
        {"calculus", {"omega1", "der", "hochschild", "tangent", "fedosov", "filtration"}},
        {"morita", {"matrix", "corner", "certify", "morphism"}},
        {"suite", {}},
    };
    for (const auto& [name, subs] : grammar) {
        auto* c = app.add_subcommand(name);
        c->callback([&path, name = name] { path.insert(path.begin(), name); });
        auto add_flags = [&cfg](CLI::App* cc) {
            cc->add_option("--in", cfg.in);
            cc->add_option("--algebra", cfg.algebras);
            cc->add_option("--degree", cfg.degree);
            cc->add_option("--budget", cfg.budget);
            cc->add_option("--seed", cfg.seed);
            cc->add_option("--out", cfg.out);
            cc->add_option("--presheaf", cfg.presheaf);
            cc->add_option("--topology", cfg.topology);
            cc->add_option("--target", cfg.target);
            cc->add_option("--pattern", cfg.pattern);
            cc->add_option("--vars", cfg.vars);
            cc->add_option("--point", cfg.point);
            cc->add_option("--kind", cfg.kind);
            cc->add_option("--size", cfg.size);
            cc->add_option("--nvars", cfg.nvars);
            cc->add_option("--cap", cfg.cap);
            cc->add_option("--samples", cfg.samples);
            cc->add_option("--rank", cfg.rank);
            cc->add_flag("--graded", cfg.graded);
        };
        if (name == "suite") {
            static std::string suite_name;
            c->add_option("name", suite_name)->required();
            c->callback([&path, &cfg] {
                path = {"suite", suite_name};
                if (cfg.budget == 100'000'000)
                    cfg.budget = suite::acceptance_budget().elementary_ops;
            });
            add_flags(c);
            continue;
        }
        for (const auto& s : subs) {
            auto* sc = c->add_subcommand(s);
            add_flags(sc);
            sc->callback([&path, s = s] { path.push_back(s); });
        }
    }

    ReportDocument doc;
    doc.tool_version = kToolVersion;
    // a report document is always written; a structural error marks the
    // document and forces exit 2, so the exit status is a pure function of
    // the document
    std::string error_code;
    auto record_error = [&](const std::string& code, const std::string& message) {
        error_code = code;
        err << Json{{"error", code}, {"message", message}}.dump() << "\n";
        VerificationReport rep{"error", Verdict::Fail,
                               Json{{"diagnostic_code", code}, {"message", message}}};
        doc.reports.push_back(std::move(rep));
        doc.config["structural_error"] = code;
    };

    try {
        std::vector<char*> argv;
        std::vector<std::string> storage = args;
        storage.insert(storage.begin(), "pivar");
        for (auto& s : storage) argv.push_back(s.data());
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (path.empty()) throw StructuralError("no command given");
    } catch (const CLI::ParseError& e) {
        record_error("unknown_command", e.what());
    } catch (const StructuralError& e) {
        record_error("unknown_command", e.what());
    }

    if (error_code.empty()) {
        doc.config = cfg.echo();
        doc.config["command"] = path;
        try {
            doc.reports = dispatch(path, cfg);
        } catch (const BudgetError& e) {
            record_error("budget_exceeded", e.what());
        } catch (const StructuralError& e) {
            record_error("malformed_input", e.what());
        } catch (const Json::exception& e) {
            record_error("malformed_input", e.what());
        }
    }

    const std::string rendered = doc.to_json().dump(2) + "\n";
    if (!cfg.out.empty() && error_code.empty()) {
        std::ofstream f(cfg.out);
        if (!f) {
            record_error("malformed_input", "cannot write " + cfg.out);
            out << doc.to_json().dump(2) << "\n";
            return 2;
        }
        f << rendered;
    } else {
        out << rendered;
    }
    for (const auto& r : doc.reports)
        err << r.check << ": "
            << (r.verdict == Verdict::Pass
                    ? "pass"
                    : (r.verdict == Verdict::Fail ? "FAIL" : "inconclusive"))
            << "\n";
    if (!error_code.empty()) return 2;
    return doc.overall() ? 0 : 1;
}

}  // namespace pivar::cli
