#pragma once

#include "pivar/builders.hpp"
#include "pivar/identities.hpp"
#include "pivar/recovering.hpp"

#include <optional>
#include <vector>

namespace pivar {

/// Operational homogeneous Morita data: A together with an idempotent of
/// neutral degree in M_n(B) and (optionally) a verified graded isomorphism
/// A -> e M_n(B) e.
struct MoritaContext {
    const FiniteGradedAlgebra* A = nullptr;
    const FiniteGradedAlgebra* B = nullptr;
    int n = 1;
    QVec e_coords;            // inside matrix_over(B, n)
    std::optional<QMat> iso;  // A -> corner
};

/// Bijective + unital + multiplicative + degree-preserving, with witnesses.
/// A dimension mismatch is an immediate failure.
inline VerificationReport verify_graded_iso(const FiniteGradedAlgebra& src,
                                            const FiniteGradedAlgebra& tgt, const QMat& m) {
    const std::string name = "verify_graded_iso";
    if (src.dim != tgt.dim)
        return VerificationReport::fail(
            name, Json{{"reason", "dimension mismatch"}, {"source_dim", src.dim},
                       {"target_dim", tgt.dim}});
    auto rep = verify_morphism(src, tgt, m);
    if (!rep.passed()) {
        rep.check = name;
        return rep;
    }
    if (rank(m) != src.dim)
        return VerificationReport::fail(name, Json{{"reason", "not bijective"}});
    return VerificationReport::pass(name);
}

/// Brute-force graded-isomorphism search, offered only for dim <= 3: scans
/// matrices with entries in {-1, 0, 1}. Absence of a hit is not a proof of
/// non-isomorphism.
inline std::optional<QMat> search_graded_iso_small(const FiniteGradedAlgebra& a,
                                                   const FiniteGradedAlgebra& b) {
    if (a.dim != b.dim || a.dim > 3)
        throw BudgetError("isomorphism search is offered only for dimension <= 3");
    const int cells = a.dim * a.dim;
    long long total = 1;
    for (int i = 0; i < cells; ++i) total *= 3;
    for (long long code = 0; code < total; ++code) {
        QMat m(a.dim, a.dim);
        long long c = code;
        for (int i = 0; i < cells; ++i) {
            m.a[i / a.dim][i % a.dim] = Rat(static_cast<int>(c % 3) - 1);
            c /= 3;
        }
        if (rank(m) != a.dim) continue;
        if (verify_graded_iso(a, b, m).passed()) return m;
    }
    return std::nullopt;
}

struct CornerCertificate {
    VerificationReport report{"corner_variety_certificate", Verdict::Pass, Json::object()};
    FiniteGradedAlgebra matrix_algebra;  // M_n(B)
    FiniteGradedAlgebra corner;          // e M_n(B) e
};

/// Truncated certificate of Id(M_n(B)) <= Id(e M_n(B) e) (= Id(A) when the
/// isomorphism is supplied and verified), at every pattern of degree <= d.
inline CornerCertificate corner_variety_certificate(const MoritaContext& ctx, int d,
                                                    const Budget& budget = {}) {
    CornerCertificate out;
    out.matrix_algebra = matrix_over(*ctx.B, ctx.n);
    // the idempotent must be homogeneous of neutral degree; make_homogeneous
    // and corner_algebra reject anything else
    HomogeneousElement e =
        make_homogeneous(out.matrix_algebra, ctx.e_coords, out.matrix_algebra.group.identity());
    out.corner = corner_algebra(out.matrix_algebra, e);

    Json data{{"truncation_degree", d},
              {"matrix_dim", out.matrix_algebra.dim},
              {"corner_dim", out.corner.dim}};

    KernelCache cm(&out.matrix_algebra, budget);
    KernelCache cc(&out.corner, budget);
    auto inclusion = variety_contains(cm, cc, d);
    data["matrix_to_corner"] = inclusion.to_json();
    if (!inclusion.contained) {
        out.report = VerificationReport::fail("corner_variety_certificate", data);
        return out;
    }

    if (ctx.iso) {
        auto iso_rep = verify_graded_iso(*ctx.A, out.corner, *ctx.iso);
        data["iso"] = iso_rep.to_json();
        if (!iso_rep.passed()) {
            out.report = VerificationReport::fail("corner_variety_certificate", data);
            return out;
        }
        KernelCache ca(ctx.A, budget);
        auto fwd = variety_contains(cc, ca, d);
        auto bwd = variety_contains(ca, cc, d);
        data["corner_vs_A"] =
            Json{{"corner_in_A", fwd.to_json()}, {"A_in_corner", bwd.to_json()}};
        if (!fwd.contained || !bwd.contained) {
            out.report = VerificationReport::fail("corner_variety_certificate", data);
            return out;
        }
    }
    out.report = VerificationReport::pass("corner_variety_certificate", data);
    return out;
}

struct MoritaMorphism {
    RecoveringMorphism recovering;
    VerificationReport report{"morita_ringed_morphism", Verdict::Pass, Json::object()};
};

/// Full pipeline: the corner certificate feeds the recovering morphism as
/// a supplied variety inclusion; every hypothesis that was checked lands in
/// the emitted ledger. F lives in var(A), G in
/// var(M_n(B)); the result is the morphism (X, G) -> (X, F).
inline MoritaMorphism morita_ringed_morphism(const PresheafOfAlgebras& f,
                                             const PresheafOfAlgebras& g, const MoritaContext& ctx,
                                             int d, const Budget& budget = {}) {
    MoritaMorphism out;
    // grading groups in this engine are finitely generated abelian by
    // construction; the pipeline needs nothing weaker
    auto cert = corner_variety_certificate(ctx, d, budget);
    out.report.data["corner_certificate"] = cert.report.to_json();
    out.report.data["grading_group"] = "finitely generated abelian (by representation)";
    out.report.data["truncation_degree"] = d;
    if (!cert.report.passed()) {
        out.report.verdict = Verdict::Fail;
        out.report.data["failed_hypothesis"] = "corner_variety_certificate";
        return out;
    }
    RecoveringOptions opt;
    opt.truncation_degree = d;
    opt.budget = budget;
    opt.inclusion_supplied = true;
    opt.supplied_certificate = cert.report.to_json();
    out.recovering = build_recovering_morphism(f, g, opt);
    out.report.data["recovering"] = out.recovering.report.to_json();
    if (!out.recovering.built) {
        out.report.verdict = Verdict::Fail;
        out.report.data["failed_hypothesis"] =
            out.recovering.report.data.value("failed_hypothesis", "build_recovering_morphism");
    }
    return out;
}

}  // namespace pivar
