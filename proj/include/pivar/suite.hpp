#pragma once

#include "pivar/calculus.hpp"
#include "pivar/filtrations.hpp"
#include "pivar/forms.hpp"
#include "pivar/io.hpp"
#include "pivar/morita.hpp"
#include "pivar/recovering.hpp"
#include "pivar/relfree.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pivar::suite {

// Acceptance runs are exact; the budget covers the E_8 degree-4 kernel,
// the largest computation in the suite.
inline Budget acceptance_budget() { return Budget{200'000'000'000LL, 6}; }
inline constexpr std::uint64_t kSheafCorpusSeed = 2026;

namespace detail {

inline FiniteGradedAlgebra ungraded_grassmann(int k) {
    auto e = build_grassmann_truncated(k);
    e.group = GradingGroup::trivial();
    for (auto& g : e.degrees) g = GroupElem{};
    return e;
}

inline MultilinearPattern trivial_pattern(int n) {
    return {GradingGroup::trivial(), std::vector<GroupElem>(n, GroupElem{})};
}

}  // namespace detail

/// Criterion 1: both supercommutativity families (even-anything commutators
/// and odd-odd anticommutators) and all their multilinear consequences of
/// degree <= 4 pass is_graded_identity on E_6 with the canonical grading.
inline VerificationReport criterion_grassmann_graded_identities() {
    const std::string name = "criterion_01_grassmann_graded_identities";
    auto e6 = build_grassmann_truncated(6);
    KernelCache cache(&e6, acceptance_budget());

    // the two generating families at degree 2
    for (std::int64_t g : {0, 1}) {
        auto even = GradedPolynomial::variable(1, {0});
        auto other = GradedPolynomial::variable(2, {g});
        if (!is_graded_identity(commutator(even, other), cache).holds)
            return VerificationReport::fail(name, Json{{"family", "[x^0, x^g]"}, {"g", g}});
    }
    {
        auto o1 = GradedPolynomial::variable(1, {1});
        auto o2 = GradedPolynomial::variable(2, {1});
        if (!is_graded_identity(o1 * o2 + o2 * o1, cache).holds)
            return VerificationReport::fail(name, Json{{"family", "odd-odd anticommutator"}});
    }

    int checked = 0;
    for (int n = 1; n <= 4; ++n)
        for (auto& seq : degree_sequences({GroupElem{0}, GroupElem{1}}, n)) {
            MultilinearPattern pat{GradingGroup::z2(), seq};
            for (const QVec& gen : supercommutator_consequences(pat)) {
                auto verdict =
                    is_graded_identity(pattern_vector_to_polynomial(pat, gen), cache);
                ++checked;
                if (!verdict.holds)
                    return VerificationReport::fail(
                        name, Json{{"pattern_degree", n}, {"witness", verdict.witness}});
            }
        }
    return VerificationReport::pass(name, Json{{"consequences_checked", checked},
                                               {"max_degree", 4}});
}

/// Criterion 2: at every Z_2-pattern of degree <= 4, the S_n-closed span of
/// the two families' consequences equals the grassmann_oracle kernel.
inline VerificationReport criterion_grassmann_generation() {
    const std::string name = "criterion_02_identity_generation";
    int patterns = 0;
    for (int n = 1; n <= 4; ++n)
        for (auto& seq : degree_sequences({GroupElem{0}, GroupElem{1}}, n)) {
            MultilinearPattern pat{GradingGroup::z2(), seq};
            auto oracle = grassmann_oracle(pat, acceptance_budget());
            EchelonSpan gen_span(factorial(n));
            for (const QVec& g : supercommutator_consequences(pat)) gen_span.insert(g);
            if (!same_span(gen_span, oracle.span())) {
                Json degs = Json::array();
                for (const auto& g : seq) degs.push_back(degree_to_string(g));
                return VerificationReport::fail(
                    name, Json{{"pattern", degs},
                               {"consequence_rank", gen_span.rank()},
                               {"oracle_kernel_dim", oracle.span().rank()}});
            }
            ++patterns;
        }
    return VerificationReport::pass(name, Json{{"patterns_compared", patterns}});
}

/// Criterion 3: grassmann_oracle and identity_kernel on E_{2n} agree for
/// all ungraded patterns n <= 4; the codimension sequence is 1, 2, 4, 8.
inline VerificationReport criterion_codimension_oracle_equivalence() {
    const std::string name = "criterion_03_codimension_oracle_equivalence";
    const std::vector<long long> expected{1, 2, 4, 8};
    Json table = Json::array();
    for (int n = 1; n <= 4; ++n) {
        auto e = detail::ungraded_grassmann(2 * n);
        auto truncated = identity_kernel(e, detail::trivial_pattern(n), acceptance_budget());
        auto oracle = grassmann_oracle(detail::trivial_pattern(n), acceptance_budget());
        const bool same = truncated.codimension == oracle.codimension &&
                          same_span(truncated.span(), oracle.span());
        table.push_back(Json{{"n", n},
                             {"c_n_truncated", truncated.codimension},
                             {"c_n_oracle", oracle.codimension}});
        if (!same || truncated.codimension != expected[n - 1])
            return VerificationReport::fail(name, Json{{"table", table}});
    }
    return VerificationReport::pass(name, Json{{"table", table}});
}

/// Criterion 4: for r = 2, 3: HH^1(M_r) = 0, dim Der = r^2 - 1, and the
/// bracket structure constants of Der match sl_r through the computed
/// traceless preimages of the inner derivations.
inline VerificationReport criterion_matrix_tangent_sl() {
    const std::string name = "criterion_04_matrix_tangent_sl";
    for (int r = 2; r <= 3; ++r) {
        auto m = build_matrix_algebra(r);
        auto hh = hochschild_low(m);
        if (hh.hh1 != 0 || hh.der.dim() != r * r - 1 || !hh.certificate.passed())
            return VerificationReport::fail(
                name, Json{{"r", r}, {"hh1", hh.hh1}, {"dim_der", hh.der.dim()}});

        // ad as a linear map a -> flatten(L_a - R_a)
        QMat ad_map(m.dim * m.dim, m.dim);
        for (int i = 0; i < m.dim; ++i) {
            QMat l = m.left_mult_matrix(m.basis_vec(i));
            QMat rr = m.right_mult_matrix(m.basis_vec(i));
            for (int x = 0; x < m.dim; ++x)
                for (int y = 0; y < m.dim; ++y) ad_map.a[x * m.dim + y][i] = l.a[x][y] - rr.a[x][y];
        }
        std::vector<QVec> preimages;
        EchelonSpan span(m.dim);
        for (const auto& d : hh.der.basis) {
            auto a = solve(ad_map, flatten(d));
            if (!a)
                return VerificationReport::fail(name,
                                                Json{{"r", r}, {"reason", "derivation not inner"}});
            // normalize to the traceless representative (subtract the scalar part)
            Rat tr(0);
            for (int i = 0; i < r; ++i) tr += (*a)[i * r + i];
            for (int i = 0; i < r; ++i) (*a)[i * r + i] -= tr / r;
            span.insert(*a);
            preimages.push_back(std::move(*a));
        }
        if (span.rank() != r * r - 1)
            return VerificationReport::fail(name,
                                            Json{{"r", r}, {"reason", "preimages not sl_r"}});
        // bracket match: [D_i, D_j] = ad([a_i, a_j]) exactly
        for (std::size_t i = 0; i < preimages.size(); ++i)
            for (std::size_t j = 0; j < preimages.size(); ++j) {
                QMat lhs = matmul(hh.der.basis[i], hh.der.basis[j]);
                QMat rhs = matmul(hh.der.basis[j], hh.der.basis[i]);
                for (int x = 0; x < m.dim; ++x)
                    for (int y = 0; y < m.dim; ++y) lhs.a[x][y] -= rhs.a[x][y];
                QVec bracket = m.multiply(preimages[i], preimages[j]);
                QVec rev = m.multiply(preimages[j], preimages[i]);
                for (int t = 0; t < m.dim; ++t) bracket[t] -= rev[t];
                QMat ad_bracket(m.dim, m.dim);
                QMat l = m.left_mult_matrix(bracket);
                QMat rr = m.right_mult_matrix(bracket);
                for (int x = 0; x < m.dim; ++x)
                    for (int y = 0; y < m.dim; ++y) ad_bracket.a[x][y] = l.a[x][y] - rr.a[x][y];
                if (!(lhs == ad_bracket))
                    return VerificationReport::fail(
                        name, Json{{"r", r},
                                   {"reason", "bracket structure constants differ"},
                                   {"pair", Json::array({i, j})}});
            }
    }
    return VerificationReport::pass(name, Json{{"ranks", Json::array({2, 3})}});
}

/// Criterion 5: every derivation of UT_l is inner for l = 2, 3, 4.
inline VerificationReport criterion_triangular_inner_derivations() {
    const std::string name = "criterion_05_triangular_inner_derivations";
    Json dims = Json::array();
    for (int l = 2; l <= 4; ++l) {
        auto ut = build_upper_triangular(l);
        auto hh = hochschild_low(ut);
        dims.push_back(Json{{"l", l}, {"dim_der", hh.der.dim()}, {"hh1", hh.hh1}});
        if (hh.hh1 != 0 || hh.der.dim() != l * (l + 1) / 2 - 1 || !hh.certificate.passed())
            return VerificationReport::fail(name, Json{{"table", dims}});
    }
    return VerificationReport::pass(name, Json{{"table", dims}});
}

/// Criterion 6: tangent duality Hom_{A-bimod}(Omega^1, A) = Der(A, A) with a
/// verified explicit isomorphism, across the whole corpus.
inline VerificationReport criterion_tangent_duality() {
    const std::string name = "criterion_06_tangent_duality";
    std::vector<std::pair<std::string, FiniteGradedAlgebra>> corpus;
    corpus.emplace_back("F", build_base_field());
    corpus.emplace_back("F[t]/(t^2)", build_truncated_polynomial(2));
    corpus.emplace_back("E2", build_grassmann_truncated(2));
    corpus.emplace_back("E3", build_grassmann_truncated(3));
    corpus.emplace_back("UT2", build_upper_triangular(2));
    corpus.emplace_back("UT3", build_upper_triangular(3));
    corpus.emplace_back("M2", build_matrix_algebra(2));
    corpus.emplace_back("quaternions", build_clifford({Rat(-1), Rat(-1)}));
    Json dims = Json::array();
    for (const auto& [label, a] : corpus) {
        auto kf = kaehler_one_forms(a);
        auto reg = regular_bimodule(a);
        auto t = tangent_object(a, kf, reg);
        dims.push_back(Json{{"algebra", label},
                            {"dim_der", t.der.dim()},
                            {"dim_hom", t.hom_basis.size()},
                            {"omega1_dim", kf.omega.dim}});
        if (!t.verified || kf.omega.dim != a.dim * a.dim - a.dim)
            return VerificationReport::fail(name, Json{{"algebra", label}, {"table", dims}});
    }
    return VerificationReport::pass(name, Json{{"table", dims}});
}

/// Criterion 7: Fedosov arena (n=2, p=3), seed 0, 100 samples: exact
/// associativity, even closure, commutator identity, triple-commutator
/// vanishing, and the degree-3 kernel membership of [[x1,x2],x3] for the
/// sampled evaluation map.
inline VerificationReport criterion_fedosov() {
    auto rep = fedosov_identity_report(FormsArena{2, 3}, 100, 0);
    rep.check = "criterion_07_fedosov";
    return rep;
}

/// Criterion 8: over every homeomorphism class of topologies on <= 4 points
/// with seeded random presheaves: sheafify lands in sheaves, eta is an
/// isomorphism exactly on sheaves, and stalks are preserved.
inline VerificationReport criterion_sheafification() {
    const std::string name = "criterion_08_sheafification";
    auto field = build_base_field();
    auto jets = build_truncated_polynomial(2);
    auto e1 = detail::ungraded_grassmann(1);
    const std::vector<const FiniteGradedAlgebra*> pool{&field, &jets, &e1};
    SplitMix64 rng(kSheafCorpusSeed);
    int presheaves = 0, non_sheaves = 0;
    for (int n = 1; n <= 4; ++n) {
        for (const auto& opens : topology_classes(n)) {
            FiniteTopology t;
            for (int i = 0; i < n; ++i) t.points.push_back(std::string(1, char('a' + i)));
            t.opens = opens;

            std::vector<PresheafOfAlgebras> corpus;
            std::vector<const FiniteGradedAlgebra*> fibers;
            for (int i = 0; i < n; ++i) fibers.push_back(pool[rng.below(pool.size())]);
            corpus.push_back(product_sheaf(t, fibers));
            corpus.push_back(constant_presheaf(t, *pool[rng.below(pool.size())]));
            {
                // junk-extended product: an extra top-level factor that the
                // restrictions ignore (breaks monopresheaf when covers exist)
                auto junk = product_sheaf(t, fibers);
                const OpenMask full = t.full_mask();
                auto top_alg = junk.at(full);
                auto extended = direct_product({&top_alg, &field});
                for (OpenMask v : t.opens) {
                    if (v == full || (v & full) != v) continue;
                    QMat old = junk.restriction(full, v);
                    QMat wide(old.rows, extended.dim);
                    for (int r = 0; r < old.rows; ++r)
                        for (int c = 0; c < old.cols; ++c) wide.a[r][c] = old.a[r][c];
                    junk.set_restriction(full, v, std::move(wide));
                }
                junk.sections.erase(full);
                junk.sections.emplace(full, std::move(extended));
                corpus.push_back(std::move(junk));
            }

            for (const auto& f : corpus) {
                ++presheaves;
                if (!check_presheaf(f).passed())
                    return VerificationReport::fail(
                        name, Json{{"stage", "corpus presheaf invalid"}, {"points", n}});
                const bool was_sheaf = check_sheaf(f).passed();
                if (!was_sheaf) ++non_sheaves;
                auto sff = sheafify(f);
                if (!check_sheaf(sff.sheaf).passed())
                    return VerificationReport::fail(
                        name, Json{{"stage", "sheafified object fails check_sheaf"},
                                   {"points", n}});
                bool eta_iso = true;
                for (OpenMask u : t.opens)
                    if (u != 0 && !is_isomorphism_matrix(sff.eta.at(u))) eta_iso = false;
                if (eta_iso != was_sheaf)
                    return VerificationReport::fail(
                        name,
                        Json{{"stage", "eta invertibility does not match the sheaf verdict"},
                             {"points", n}});
                for (int x = 0; x < n; ++x)
                    if (!is_isomorphism_matrix(sff.eta.at(t.minimal_open(x))))
                        return VerificationReport::fail(
                            name, Json{{"stage", "stalk not preserved"}, {"points", n}});
            }
        }
    }
    return VerificationReport::pass(name, Json{{"presheaves_checked", presheaves},
                                               {"non_sheaves_among_them", non_sheaves},
                                               {"seed", kSheafCorpusSeed}});
}

/// Criterion 9: Id^G(A) = Id^G(A x Fun(U)) at all patterns of degree <= 3
/// for A in {M2, E4, UT3} and |U| in {2, 3}.
inline VerificationReport criterion_function_sheaf_identities() {
    const std::string name = "criterion_09_function_sheaf_identities";
    std::vector<std::pair<std::string, FiniteGradedAlgebra>> corpus;
    corpus.emplace_back("M2", build_matrix_algebra(2));
    corpus.emplace_back("E4", build_grassmann_truncated(4));
    corpus.emplace_back("UT3", build_upper_triangular(3));
    int compared = 0;
    for (const auto& [label, a] : corpus)
        for (int points = 2; points <= 3; ++points) {
            std::vector<std::string> names;
            for (int i = 0; i < points; ++i) names.push_back("p" + std::to_string(i));
            auto t = tensor_with_commutative(a, build_function_algebra(names));
            KernelCache ca(&a, acceptance_budget());
            KernelCache ct(&t, acceptance_budget());
            for (int n = 1; n <= 3; ++n)
                for (auto& seq : degree_sequences(a.degree_support(), n)) {
                    MultilinearPattern pat{a.group, seq};
                    const auto& ka = ca.kernel(pat);
                    const auto& kt = ct.kernel(pat);
                    if (!(ka.codimension == kt.codimension &&
                          same_span(ka.span(), kt.span())))
                        return VerificationReport::fail(
                            name, Json{{"algebra", label}, {"points", points}, {"degree", n}});
                    ++compared;
                }
        }
    return VerificationReport::pass(name, Json{{"kernels_compared", compared}});
}

/// Criterion 10: constant sheaf of E4 is locally ringed, of M2 is not.
inline VerificationReport criterion_locally_ringed() {
    const std::string name = "criterion_10_locally_ringed";
    auto s = FiniteTopology::sierpinski();
    auto e4 = build_grassmann_truncated(4);
    auto m2 = build_matrix_algebra(2);
    auto good = check_locally_ringed(constant_presheaf(s, e4));
    auto bad = check_locally_ringed(constant_presheaf(s, m2));
    if (good.verdict != Verdict::Pass || bad.verdict != Verdict::Fail)
        return VerificationReport::fail(name, Json{{"E4", good.to_json()}, {"M2", bad.to_json()}});
    return VerificationReport::pass(name, Json{{"E4", "locally ringed"},
                                               {"M2", "not locally ringed"}});
}

/// Criterion 11: Cech H^1 of the rank-1 constant sheaf: pseudocircle 1,
/// Sierpinski 0.
inline VerificationReport criterion_cech_h1() {
    const std::string name = "criterion_11_cech_h1";
    auto p = FiniteTopology::pseudocircle();
    auto s = FiniteTopology::sierpinski();
    const int h1p = cech_h1(p, constant_vector_sheaf(p, 1));
    const int h1s = cech_h1(s, constant_vector_sheaf(s, 1));
    const int h1s_pre = cech_h1(s, constant_vector_presheaf(s, 1));
    if (h1p != 1 || h1s != 0 || h1s_pre != 0)
        return VerificationReport::fail(
            name, Json{{"pseudocircle", h1p}, {"sierpinski", h1s},
                       {"sierpinski_presheaf", h1s_pre}});
    return VerificationReport::pass(name, Json{{"pseudocircle", 1}, {"sierpinski", 0}});
}

/// Criterion 12: the (F, F, n=2, e=e11) Morita context certifies at d = 4
/// with s_4 detected in the kernel of M_2, and the ringed morphism then
/// succeeds on Sierpinski constant sheaves.
inline VerificationReport criterion_morita_pipeline() {
    const std::string name = "criterion_12_morita_pipeline";
    auto field = build_base_field();
    MoritaContext ctx;
    ctx.A = &field;
    ctx.B = &field;
    ctx.n = 2;
    ctx.e_coords = QVec(4, Rat(0));
    ctx.e_coords[0] = 1;
    ctx.iso = QMat::identity(1);
    auto cert = corner_variety_certificate(ctx, 4, acceptance_budget());
    if (!cert.report.passed())
        return VerificationReport::fail(name, Json{{"stage", "corner certificate"},
                                                   {"detail", cert.report.to_json()}});
    // s_4 is in the degree-4 kernel of M_2(F)
    KernelCache cm(&cert.matrix_algebra, acceptance_budget());
    auto s4vec =
        polynomial_to_pattern_vector(detail::trivial_pattern(4), standard_polynomial(4));
    if (!cm.kernel(detail::trivial_pattern(4)).span().contains(s4vec))
        return VerificationReport::fail(name, Json{{"stage", "s4 not detected in Id(M_2)"}});

    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, field);
    auto g = constant_presheaf(s, cert.matrix_algebra);
    auto mm = morita_ringed_morphism(f, g, ctx, 4, acceptance_budget());
    if (!mm.report.passed() || !mm.recovering.built)
        return VerificationReport::fail(name, Json{{"stage", "ringed morphism"},
                                                   {"detail", mm.report.to_json()}});
    return VerificationReport::pass(name, Json{{"truncation_degree", 4},
                                               {"s4_detected", true}});
}

/// Criterion 13: odd-ideal filtration of E3 has power dimensions (7,4,1,0)
/// with Gr of total dimension 8; the commutator filtration of UT_2 is the
/// order-1 chain span{e12} > 0.
inline VerificationReport criterion_filtrations() {
    const std::string name = "criterion_13_filtrations";
    auto e3 = build_grassmann_truncated(3);
    auto odd = odd_ideal_filtration(e3);
    const bool e3_ok = odd.chain.levels.size() == 3 && odd.chain.levels[0].size() == 7 &&
                       odd.chain.levels[1].size() == 4 && odd.chain.levels[2].size() == 1 &&
                       odd.chain.reached_zero && odd.gr.algebra.dim == 8;
    auto ut2 = build_upper_triangular(2);
    auto comm = commutator_filtration(ut2, 4);
    const QVec e12{Rat(0), Rat(1), Rat(0)};
    const bool ut_ok = comm.order == 1 && comm.chain.levels.size() == 2 &&
                       comm.chain.levels[0].size() == 1 && comm.chain.levels[0][0] == e12 &&
                       comm.chain.levels[1].empty();
    if (!e3_ok || !ut_ok) {
        Json dims = Json::array();
        for (const auto& l : odd.chain.levels) dims.push_back(l.size());
        return VerificationReport::fail(name, Json{{"E3_power_dims", dims},
                                                   {"gr_dim", odd.gr.algebra.dim},
                                                   {"UT2_order", comm.order}});
    }
    return VerificationReport::pass(
        name, Json{{"E3_power_dims", Json::array({7, 4, 1, 0})}, {"gr_dim", 8},
                   {"UT2_chain", "span{e12} > 0, order 1"}});
}

struct SuiteItem {
    std::string module;
    std::function<VerificationReport()> run;
};

inline const std::vector<SuiteItem>& acceptance_items() {
    static const std::vector<SuiteItem> items{
        {"pi_identities", criterion_grassmann_graded_identities},
        {"pi_identities", criterion_grassmann_generation},
        {"pi_identities", criterion_codimension_oracle_equivalence},
        {"nc_calculus", criterion_matrix_tangent_sl},
        {"nc_calculus", criterion_triangular_inner_derivations},
        {"nc_calculus", criterion_tangent_duality},
        {"nc_calculus", criterion_fedosov},
        {"finite_sheaves", criterion_sheafification},
        {"finite_sheaves", criterion_function_sheaf_identities},
        {"finite_sheaves", criterion_locally_ringed},
        {"finite_sheaves", criterion_cech_h1},
        {"morita_varieties", criterion_morita_pipeline},
        {"nc_calculus", criterion_filtrations},
    };
    return items;
}

/// A quick structural check exposed as the grading_core suite: every
/// builder output validates and the corner-at-unit property holds.
inline VerificationReport grading_core_builders_check() {
    const std::string name = "grading_core_builders";
    std::vector<FiniteGradedAlgebra> corpus;
    corpus.push_back(build_base_field());
    corpus.push_back(build_matrix_algebra(3));
    corpus.push_back(build_upper_triangular(4));
    corpus.push_back(build_grassmann_truncated(4));
    corpus.push_back(build_clifford({Rat(-1), Rat(-1)}));
    corpus.push_back(build_truncated_polynomial(3));
    auto m2 = build_matrix_algebra(2);
    corpus.push_back(matrix_over(build_grassmann_truncated(1), 2));
    corpus.push_back(tensor_with_commutative(m2, build_function_algebra({"p", "q"})));
    for (const auto& a : corpus) {
        if (!validate_algebra(a).passed())
            return VerificationReport::fail(name, Json{{"dim", a.dim}});
        auto corner = corner_algebra(a, make_homogeneous(a, a.unit, a.group.identity()));
        if (!verify_morphism(corner, a, QMat::identity(a.dim)).passed())
            return VerificationReport::fail(name, Json{{"corner_at_unit", a.dim}});
    }
    return VerificationReport::pass(name, Json{{"builders_checked", corpus.size()}});
}

inline std::vector<VerificationReport> run_suite_reports(const std::string& scope) {
    std::vector<VerificationReport> out;
    if (scope == "grading_core") {
        out.push_back(grading_core_builders_check());
        return out;
    }
    bool known = scope == "acceptance";
    for (const auto& item : acceptance_items())
        if (scope == "acceptance" || item.module == scope) {
            known = known || item.module == scope;
            out.push_back(item.run());
        }
    if (!known || (out.empty() && scope != "acceptance"))
        throw StructuralError("unknown suite " + scope);
    return out;
}

}  // namespace pivar::suite
