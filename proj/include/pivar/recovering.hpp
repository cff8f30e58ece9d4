#pragma once

#include "pivar/cech.hpp"
#include "pivar/presheaf.hpp"
#include "pivar/relfree.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace pivar {

/// The truncated relatively free presheaf H_X(U) = Free_{F(U)}(W) cut at
/// degree d: sections are truncations, restrictions send f + Id(F(U)) to
/// f + Id(F(V)) on the word basis.
struct TruncatedPresheaf {
    FiniteTopology top;
    int degree_bound = 0;
    std::map<OpenMask, RelativelyFreeTruncation> sections;
    std::map<std::pair<OpenMask, OpenMask>, QMat> restriction_maps;
    VerificationReport report{"build_relatively_free_presheaf", Verdict::Pass, Json::object()};
};

inline TruncatedPresheaf build_relatively_free_presheaf(const PresheafOfAlgebras& f,
                                                        const std::vector<GradedVariable>& vars,
                                                        int d, const Budget& budget = {}) {
    TruncatedPresheaf out;
    out.top = f.top;
    out.degree_bound = d;
    std::map<OpenMask, std::unique_ptr<KernelCache>> caches;
    for (OpenMask u : f.top.opens) {
        if (u == 0) continue;
        caches.emplace(u, std::make_unique<KernelCache>(&f.at(u), budget));
        out.sections.emplace(u, relatively_free_truncation(*caches.at(u), vars, d));
    }
    Json detail = Json::object();
    for (OpenMask u : f.top.opens) {
        if (u == 0) continue;
        detail[f.top.subset_name(u)] = out.sections.at(u).dim();
    }
    out.report.data["section_dims"] = detail;
    out.report.data["truncation_degree"] = d;

    // restrictions: identity on words; well-defined iff every class relation
    // of the source section is a relation of the target section
    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v == 0 || v >= u || (v & u) != v) continue;
            const auto& hu = out.sections.at(u);
            const auto& hv = out.sections.at(v);
            for (const auto& cls : hu.classes) {
                if (cls.pattern.degrees.empty()) continue;
                auto relations = class_relations(cls, *caches.at(u));
                EchelonSpan kv = caches.at(v)->kernel(cls.pattern).span();
                for (const QVec& r : relations) {
                    QVec combined(factorial(cls.pattern.n()), Rat(0));
                    for (std::size_t wi = 0; wi < cls.words.size(); ++wi)
                        add_scaled(combined, cls.pvecs[wi], r[wi]);
                    if (!kv.contains(combined)) {
                        Json degs = Json::array();
                        for (const auto& g : cls.pattern.degrees)
                            degs.push_back(degree_to_string(g));
                        out.report = VerificationReport::fail(
                            "build_relatively_free_presheaf",
                            Json{{"reason", "restriction ill-defined: identities do not restrict"},
                                 {"from", f.top.subset_name(u)},
                                 {"to", f.top.subset_name(v)},
                                 {"witness_pattern", degs}});
                        out.report.data["truncation_degree"] = d;
                        return out;
                    }
                }
            }
            QMat m(hv.dim(), hu.dim());
            for (int c = 0; c < hu.dim(); ++c)
                for (const auto& [r, q] : hv.reduce_word(hu.basis_words[c])) m.a[r][c] = q;
            out.restriction_maps[{u, v}] = std::move(m);
        }

    // monopresheaf at truncation level over the maximal irredundant covers
    for (OpenMask u : f.top.opens) {
        if (u == 0) continue;
        for (const auto& cover : detail::irredundant_covers(f.top, u)) {
            int total = 0;
            std::vector<int> offsets;
            for (OpenMask v : cover) {
                offsets.push_back(total);
                total += out.sections.at(v).dim();
            }
            QMat joint(total, out.sections.at(u).dim());
            for (std::size_t i = 0; i < cover.size(); ++i) {
                const QMat& r = out.restriction_maps.at({u, cover[i]});
                for (int rr = 0; rr < r.rows; ++rr)
                    for (int cc = 0; cc < r.cols; ++cc) joint.a[offsets[i] + rr][cc] = r.a[rr][cc];
            }
            if (!nullspace(joint).empty()) {
                out.report = VerificationReport::fail(
                    "build_relatively_free_presheaf",
                    Json{{"reason", "monopresheaf fails at truncation level"},
                         {"open", f.top.subset_name(u)}});
                out.report.data["truncation_degree"] = d;
                return out;
            }
        }
    }
    out.report.data["monopresheaf"] = true;
    return out;
}

/// Options for the recovering-morphism construction. The variety-inclusion
/// hypothesis can come from per-open kernel comparisons (default) or from an
/// externally supplied certificate (the Morita route).
struct RecoveringOptions {
    int truncation_degree = 3;
    Budget budget{};
    bool inclusion_supplied = false;           // certified by the caller
    Json supplied_certificate = Json::object();
    std::map<OpenMask, QMat> embeddings;       // optional explicit j* components
};

struct RecoveringMorphism {
    PresheafMorphism morphism;  // components F(U) -> G(U)
    VerificationReport report{"build_recovering_morphism", Verdict::Pass, Json::object()};
    bool built = false;
};

namespace detail {

/// Canonical section embedding F(U) -> G(U): a supplied matrix, the unit
/// embedding when F(U) is one-dimensional, or basis-label matching.
inline std::optional<QMat> canonical_embedding(const FiniteGradedAlgebra& fu,
                                               const FiniteGradedAlgebra& gu,
                                               const RecoveringOptions& opt, OpenMask u) {
    auto it = opt.embeddings.find(u);
    if (it != opt.embeddings.end()) return it->second;
    if (fu.dim == 1) {
        // scalars to scalars: lambda 1 -> lambda 1
        QMat m(gu.dim, 1);
        const Rat scale = fu.unit[0];
        if (is_zero(scale)) return std::nullopt;
        for (int r = 0; r < gu.dim; ++r) m.a[r][0] = gu.unit[r] / scale;
        return m;
    }
    // label matching
    QMat m(gu.dim, fu.dim);
    for (int i = 0; i < fu.dim; ++i) {
        int hit = -1;
        for (int r = 0; r < gu.dim; ++r)
            if (gu.labels[r] == fu.labels[i]) {
                hit = r;
                break;
            }
        if (hit < 0) return std::nullopt;
        m.a[hit][i] = 1;
    }
    return m;
}

}  // namespace detail

/// Builds the morphism of graded locally ringed spaces (X, G) -> (X, F),
/// assembled and verified hypothesis by hypothesis:
/// same topology, per-open variety inclusion, a valid section embedding
/// j*: F(U) -> G(U), naturality, vanishing H^1 of the Hom presheaf, and
/// radical-to-radical stalk maps.
inline RecoveringMorphism build_recovering_morphism(const PresheafOfAlgebras& f,
                                                    const PresheafOfAlgebras& g,
                                                    const RecoveringOptions& opt = {}) {
    RecoveringMorphism out;
    Json ledger = Json::array();
    auto fail = [&](std::string hypothesis, Json detail) {
        ledger.push_back(Json{{"hypothesis", hypothesis}, {"holds", false}, {"detail", detail}});
        out.report = {"build_recovering_morphism", Verdict::Fail,
                      Json{{"failed_hypothesis", hypothesis},
                           {"hypotheses", ledger},
                           {"truncation_degree", opt.truncation_degree}}};
    };
    auto note = [&](std::string hypothesis, Json detail = Json::object()) {
        ledger.push_back(Json{{"hypothesis", hypothesis}, {"holds", true}, {"detail", detail}});
    };

    if (!(f.top.opens == g.top.opens) || f.top.npoints() != g.top.npoints()) {
        fail("same_topology", Json::object());
        return out;
    }
    note("same_topology");

    if (opt.inclusion_supplied) {
        note("variety_inclusion", Json{{"source", "supplied"},
                                       {"certificate", opt.supplied_certificate}});
    } else {
        for (OpenMask u : f.top.opens) {
            if (u == 0 || f.at(u).dim == 0) continue;
            KernelCache cf(&f.at(u), opt.budget);
            KernelCache cg(&g.at(u), opt.budget);
            auto rep = variety_contains(cf, cg, opt.truncation_degree,
                                        PatternScope::BothSupported);
            if (!rep.contained) {
                fail("variety_inclusion",
                     Json{{"open", f.top.subset_name(u)}, {"detail", rep.to_json()}});
                return out;
            }
        }
        note("variety_inclusion",
             Json{{"source", "computed"},
                  {"scope", "patterns admissible on both sides"},
                  {"truncation_degree", opt.truncation_degree}});
    }

    for (OpenMask u : f.top.opens) {
        if (u == 0) {
            out.morphism.components[u] = QMat(g.at(u).dim, f.at(u).dim);
            continue;
        }
        auto m = detail::canonical_embedding(f.at(u), g.at(u), opt, u);
        if (!m) {
            fail("section_embedding",
                 Json{{"open", f.top.subset_name(u)},
                      {"reason", "no canonical embedding (supply one explicitly)"}});
            return out;
        }
        auto rep = verify_morphism(f.at(u), g.at(u), *m);
        if (!rep.passed()) {
            fail("section_embedding",
                 Json{{"open", f.top.subset_name(u)}, {"detail", rep.to_json()}});
            return out;
        }
        out.morphism.components[u] = std::move(*m);
    }
    note("section_embedding");

    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v >= u || (v & u) != v || v == 0) continue;
            const QMat lhs = matmul(out.morphism.components.at(v), f.restriction(u, v));
            const QMat rhs = matmul(g.restriction(u, v), out.morphism.components.at(u));
            if (!(lhs == rhs)) {
                fail("naturality", Json{{"from", f.top.subset_name(u)},
                                        {"to", f.top.subset_name(v)}});
                return out;
            }
        }
    note("naturality");

    auto hom = hom_presheaf(f, g);
    if (!hom.presheaf) {
        fail("hom_presheaf_h1", Json{{"reason", "Hom presheaf restriction undefined"},
                                     {"detail", hom.undefined_restrictions}});
        return out;
    }
    const int h1 = cech_h1(f.top, *hom.presheaf);
    if (h1 != 0) {
        fail("hom_presheaf_h1", Json{{"h1", h1}});
        return out;
    }
    note("hom_presheaf_h1",
         Json{{"h1", 0}, {"interpretation", "degree-preserving linear maps F(U) -> G(U)"}});

    for (int x = 0; x < f.top.npoints(); ++x) {
        const OpenMask ux = f.top.minimal_open(x);
        const auto rad_f = radical_basis(f.at(ux));
        const auto rad_g = radical_basis(g.at(ux));
        EchelonSpan span(g.at(ux).dim);
        for (const auto& v : rad_g) span.insert(v);
        for (const auto& v : rad_f)
            if (!span.contains(apply_mat(out.morphism.components.at(ux), v))) {
                fail("stalk_locality", Json{{"point", f.top.points[x]}});
                return out;
            }
    }
    note("stalk_locality", Json{{"criterion", "radical mapped into radical"}});

    out.built = true;
    out.report = VerificationReport::pass("build_recovering_morphism",
                                          Json{{"hypotheses", ledger},
                                               {"truncation_degree", opt.truncation_degree}});
    return out;
}

}  // namespace pivar
