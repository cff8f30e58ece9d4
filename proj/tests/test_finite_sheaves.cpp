#include "pivar/builders.hpp"
#include "pivar/cech.hpp"
#include "pivar/presheaf.hpp"
#include "pivar/recovering.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pivar;

namespace {

FiniteGradedAlgebra ungraded_grassmann(int k) {
    auto e = build_grassmann_truncated(k);
    e.group = GradingGroup::trivial();
    for (auto& g : e.degrees) g = GroupElem{};
    return e;
}

// Independent oracle for the stalk: the literal colimit as a vector space,
// sum of F(U) over U containing x modulo (U, s) ~ (V, s|_V).
int germ_colimit_dimension(const PresheafOfAlgebras& f, int x) {
    std::vector<OpenMask> around;
    for (OpenMask u : f.top.opens)
        if (u & (1u << x)) around.push_back(u);
    std::map<OpenMask, int> offset;
    int total = 0;
    for (OpenMask u : around) {
        offset[u] = total;
        total += f.at(u).dim;
    }
    EchelonSpan relations(total);
    for (OpenMask u : around)
        for (OpenMask v : around) {
            if (v >= u || (v & u) != v) continue;
            QMat r = f.restriction(u, v);
            for (int c = 0; c < f.at(u).dim; ++c) {
                QVec rel(total, Rat(0));
                rel[offset[u] + c] += 1;
                for (int rr = 0; rr < f.at(v).dim; ++rr) rel[offset[v] + rr] -= r.a[rr][c];
                relations.insert(rel);
            }
        }
    return total - relations.rank();
}

PresheafOfAlgebras defective_two_point_presheaf() {
    // discrete {a,b}; F(X) = F(a) x F(b) x F with projections that ignore
    // the extra factor: the monopresheaf axiom fails
    auto t = FiniteTopology::discrete({"a", "b"});
    auto field = build_base_field();
    PresheafOfAlgebras f;
    f.top = t;
    f.sections.emplace(0u, FiniteGradedAlgebra::zero(GradingGroup::trivial()));
    f.sections.emplace(1u, field);
    f.sections.emplace(2u, field);
    auto fff = direct_product({&field, &field, &field});
    f.sections.emplace(3u, fff);
    QMat pa(1, 3), pb(1, 3);
    pa.a[0][0] = 1;
    pb.a[0][1] = 1;
    f.set_restriction(3u, 1u, pa);
    f.set_restriction(3u, 2u, pb);
    f.set_restriction(3u, 0u, QMat(0, 3));
    f.set_restriction(1u, 0u, QMat(0, 1));
    f.set_restriction(2u, 0u, QMat(0, 1));
    return f;
}

}  // namespace

TEST_CASE("topology validation and minimal opens") {
    auto s = FiniteTopology::sierpinski();
    auto rep = validate_topology(s);
    CHECK(rep.passed());
    CHECK(s.minimal_open(0) == 1u);
    CHECK(s.minimal_open(1) == 3u);

    FiniteTopology bad;
    bad.points = {"a", "b", "c"};
    bad.opens = {0u, 1u, 2u, 7u};  // {a} u {b} = {a,b} missing
    CHECK(!validate_topology(bad).passed());

    auto d3 = FiniteTopology::discrete({"x", "y", "z"});
    CHECK(validate_topology(d3).passed());
    for (int i = 0; i < 3; ++i) CHECK(d3.minimal_open(i) == (1u << i));
}

TEST_CASE("topology enumeration matches the known labeled counts") {
    CHECK(enumerate_topologies(1).size() == 1);
    CHECK(enumerate_topologies(2).size() == 4);
    CHECK(enumerate_topologies(3).size() == 29);
    CHECK(enumerate_topologies(4).size() == 355);
    CHECK(topology_classes(2).size() == 3);
    CHECK(topology_classes(3).size() == 9);
    CHECK(topology_classes(4).size() == 33);
}

TEST_CASE("constant presheaf of M2 is a valid presheaf") {
    auto m2 = build_matrix_algebra(2);
    auto f = constant_presheaf(FiniteTopology::sierpinski(), m2);
    CHECK(check_presheaf(f).passed());
}

TEST_CASE("grading-dropping restriction is reported with a witness") {
    auto e2 = build_grassmann_truncated(2);
    auto f = constant_presheaf(FiniteTopology::sierpinski(), e2);
    // overwrite one restriction with a degree-violating map: e1 -> 1
    QMat bad = QMat::identity(4);
    bad.a[0][1] = 1;
    bad.a[1][1] = 0;
    f.set_restriction(3u, 1u, bad);
    auto rep = check_presheaf(f);
    CHECK(!rep.passed());
    CHECK(rep.data["witness"]["detail"]["witness"]["reason"] == "degree violation");
}

TEST_CASE("variety flag: M2 section is not in var(E4)") {
    // Sierpinski, F({a,b}) = E4 ungraded, F({a}) = M2, augmentation restriction
    auto e4 = ungraded_grassmann(4);
    auto m2 = build_matrix_algebra(2);
    PresheafOfAlgebras f;
    f.top = FiniteTopology::sierpinski();
    f.sections.emplace(0u, FiniteGradedAlgebra::zero(GradingGroup::trivial()));
    f.sections.emplace(1u, m2);
    f.sections.emplace(3u, e4);
    QMat aug(4, 16);  // scalars through the augmentation, everything else to 0
    aug.a[0][0] = 1;
    aug.a[3][0] = 1;
    f.set_restriction(3u, 1u, aug);
    f.set_restriction(3u, 0u, QMat(0, 16));
    f.set_restriction(1u, 0u, QMat(0, 4));
    CHECK(check_presheaf(f).passed());

    KernelCache ref(&e4, Budget{2'000'000'000, 6});
    auto rep = check_presheaf(f, &ref, 3);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK(rep.data["variety_membership"]["{a}"]["contained"] == false);
}

TEST_CASE("product sheaf passes check_sheaf, junk factor breaks monopresheaf") {
    auto field = build_base_field();
    auto t = FiniteTopology::discrete({"a", "b"});
    auto good = product_sheaf(t, {&field, &field});
    CHECK(check_presheaf(good).passed());
    CHECK(check_sheaf(good).passed());

    auto bad = defective_two_point_presheaf();
    CHECK(check_presheaf(bad).passed());
    auto rep = check_sheaf(bad);
    CHECK(!rep.passed());
    CHECK(rep.data["witness"]["reason"] == "monopresheaf fails");
}

TEST_CASE("Sierpinski space has no nontrivial covers: every presheaf is a sheaf") {
    auto m2 = build_matrix_algebra(2);
    auto f = constant_presheaf(FiniteTopology::sierpinski(), m2);
    auto rep = check_sheaf(f);
    CHECK(rep.passed());
    CHECK(rep.data["covers_checked"] == 0);
}

TEST_CASE("stalks are the minimal-open sections and match the germ oracle") {
    auto m2 = build_matrix_algebra(2);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, m2);
    auto stalk_a = stalk_at(f, 0);
    auto stalk_b = stalk_at(f, 1);
    CHECK(stalk_a.minimal_open == 1u);
    CHECK(stalk_b.minimal_open == 3u);
    CHECK(stalk_a.algebra->dim == 4);
    CHECK(germ_colimit_dimension(f, 0) == stalk_a.algebra->dim);
    CHECK(germ_colimit_dimension(f, 1) == stalk_b.algebra->dim);

    auto fun = build_function_sheaf(FiniteTopology::pseudocircle(), m2);
    for (int x = 0; x < 4; ++x)
        CHECK(germ_colimit_dimension(fun, x) == stalk_at(fun, x).algebra->dim);

    // universal property against a shifted cocone
    std::map<OpenMask, QMat> cocone;
    for (OpenMask u : s.opens)
        if (u & 1u) cocone.emplace(u, f.restriction(u, 1u));
    CHECK(check_stalk_universal(f, stalk_a, cocone).passed());
}

TEST_CASE("germ arithmetic factors through restrictions") {
    auto m2 = build_matrix_algebra(2);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, m2);
    auto stalk = stalk_at(f, 0);
    // [s]_x + 2 [t]_x computed in F(U_x) equals pi(s|_{U cap V} + 2 t|_{U cap V})
    QVec sv = m2.basis_vec(1);
    QVec tv = m2.basis_vec(2);
    QVec lhs = apply_mat(stalk.projections.at(3u), sv);
    add_scaled(lhs, apply_mat(stalk.projections.at(1u), tv), Rat(2));
    QVec meet = apply_mat(f.restriction(3u, 1u), sv);
    add_scaled(meet, tv, Rat(2));
    QVec rhs = apply_mat(stalk.projections.at(1u), meet);
    CHECK(lhs == rhs);
}

TEST_CASE("sheafification fixes the defective presheaf and is idempotent") {
    auto bad = defective_two_point_presheaf();
    auto sff = sheafify(bad);
    CHECK(check_presheaf(sff.sheaf).passed());
    CHECK(check_sheaf(sff.sheaf).passed());
    CHECK(sff.sheaf.at(3u).dim == 2);  // F(a) x F(b)
    // eta on the full open cannot be invertible (3 -> 2)
    CHECK(!is_isomorphism_matrix(sff.eta.at(3u)));

    // stalk preservation: eta on minimal opens is an isomorphism
    for (int x = 0; x < 2; ++x)
        CHECK(is_isomorphism_matrix(sff.eta.at(bad.top.minimal_open(x))));

    auto again = sheafify(sff.sheaf);
    for (OpenMask u : bad.top.opens) {
        CHECK(again.sheaf.at(u).dim == sff.sheaf.at(u).dim);
        if (u != 0) CHECK(is_isomorphism_matrix(again.eta.at(u)));
    }
}

TEST_CASE("eta is an isomorphism exactly on sheaves") {
    auto field = build_base_field();
    auto m2 = build_matrix_algebra(2);
    const auto t = FiniteTopology::discrete({"a", "b"});
    // a sheaf: eta invertible everywhere
    auto good = product_sheaf(t, {&m2, &field});
    REQUIRE(check_sheaf(good).passed());
    auto sff = sheafify(good);
    for (OpenMask u : t.opens)
        if (u != 0) CHECK(is_isomorphism_matrix(sff.eta.at(u)));
    // constant presheaf on a disconnected space: gluing fails, eta not iso
    auto flat = constant_presheaf(t, m2);
    auto rep = check_sheaf(flat);
    CHECK(!rep.passed());
    CHECK(rep.data["witness"]["reason"] == "gluing fails");
    auto sff2 = sheafify(flat);
    bool all_iso = true;
    for (OpenMask u : t.opens)
        if (u != 0 && !is_isomorphism_matrix(sff2.eta.at(u))) all_iso = false;
    CHECK(!all_iso);
    CHECK(check_sheaf(sff2.sheaf).passed());
}

TEST_CASE("pushforward: identity, collapse to a point, discontinuous rejection") {
    auto m2 = build_matrix_algebra(2);
    auto s = FiniteTopology::sierpinski();
    auto f = build_function_sheaf(s, m2);

    auto id = pushforward(s, s, {0, 1}, f);
    for (OpenMask u : s.opens) CHECK(id.at(u).dim == f.at(u).dim);
    CHECK(check_sheaf(id).passed());

    auto pt = FiniteTopology::point();
    auto collapsed = pushforward(s, pt, {0, 0}, f);
    CHECK(collapsed.at(1u).dim == f.at(3u).dim);
    CHECK(check_sheaf(collapsed).passed());

    auto d2 = FiniteTopology::discrete({"p", "q"});
    CHECK_THROWS_AS(pushforward(s, d2, {0, 1}, f), StructuralError);
}

TEST_CASE("pushforward preserves the sheaf property") {
    auto e2 = build_grassmann_truncated(2);
    auto t = FiniteTopology::pseudocircle();
    auto f = build_function_sheaf(t, e2);
    REQUIRE(check_sheaf(f).passed());
    // collapse x and y: a,b,x,y -> a,b,c (continuous: checked first)
    FiniteTopology t3;
    t3.points = {"a", "b", "c"};
    t3.opens = {0u, 1u, 2u, 3u, 7u};
    REQUIRE(check_continuity(t, t3, {0, 1, 2, 2}).passed());
    auto g = pushforward(t, t3, {0, 1, 2, 2}, f);
    CHECK(check_presheaf(g).passed());
    CHECK(check_sheaf(g).passed());
}

TEST_CASE("function sheaf: dimensions, surjective unital restrictions, sheaf axioms") {
    auto m2 = build_matrix_algebra(2);
    for (const auto& t : {FiniteTopology::sierpinski(), FiniteTopology::discrete({"a", "b"})}) {
        auto f = build_function_sheaf(t, m2);
        CHECK(check_presheaf(f).passed());
        CHECK(check_sheaf(f).passed());
        for (OpenMask u : t.opens)
            CHECK(f.at(u).dim == m2.dim * __builtin_popcount(u));
        for (OpenMask u : t.opens)
            for (OpenMask v : t.opens) {
                if (v >= u || (v & u) != v || v == 0) continue;
                CHECK(rank(f.restriction(u, v)) == f.at(v).dim);
            }
    }
    // global sections over 2 discrete points = M2 x M2
    auto f = build_function_sheaf(FiniteTopology::discrete({"a", "b"}), m2);
    CHECK(f.at(3u).dim == 8);
    CHECK(center_basis(f.at(3u)).size() == 2);
}

TEST_CASE("locally ringed verdicts for constant sheaves") {
    auto s = FiniteTopology::sierpinski();
    auto e4 = build_grassmann_truncated(4);
    CHECK(check_locally_ringed(constant_presheaf(s, e4)).verdict == Verdict::Pass);
    auto m2 = build_matrix_algebra(2);
    CHECK(check_locally_ringed(constant_presheaf(s, m2)).verdict == Verdict::Fail);
    auto jets = build_truncated_polynomial(3);
    CHECK(check_locally_ringed(constant_presheaf(s, jets)).verdict == Verdict::Pass);
}

TEST_CASE("hom presheaf restrictions flag maps that do not factor") {
    // over a disconnected space the sections see both points, but the
    // restriction to one point forgets the other: a coordinate swap cannot
    // factor through it
    auto field = build_base_field();
    auto t = FiniteTopology::discrete({"a", "b"});
    auto f = product_sheaf(t, {&field, &field});
    auto hom = hom_presheaf(f, f);
    CHECK(!hom.presheaf.has_value());
    CHECK(!hom.undefined_restrictions.empty());

    // constant presheaves restrict by the identity: always defined
    auto c = constant_presheaf(t, field);
    auto homc = hom_presheaf(c, c);
    CHECK(homc.presheaf.has_value());
}

TEST_CASE("cech h1: sierpinski 0, pseudocircle 1, zero presheaf 0") {
    auto s = FiniteTopology::sierpinski();
    CHECK(cech_h1(s, constant_vector_presheaf(s, 1)) == 0);
    CHECK(cech_h1(s, constant_vector_sheaf(s, 1)) == 0);

    auto p = FiniteTopology::pseudocircle();
    CHECK(cech_h1(p, constant_vector_sheaf(p, 1)) == 1);
    CHECK(cech_h1(p, constant_vector_presheaf(p, 0)) == 0);
}

TEST_CASE("cech h1 vanishes when some minimal open is the whole space") {
    for (const auto& opens : enumerate_topologies(3)) {
        FiniteTopology t;
        t.points = {"a", "b", "c"};
        t.opens = opens;
        bool has_max = false;
        for (int x = 0; x < 3; ++x)
            if (t.minimal_open(x) == t.full_mask()) has_max = true;
        if (!has_max) continue;
        CHECK(cech_h1(t, constant_vector_presheaf(t, 1)) == 0);
        CHECK(cech_h1(t, constant_vector_sheaf(t, 2)) == 0);
    }
}

TEST_CASE("sheafification across all small topologies (seeded presheaf corpus)") {
    auto field = build_base_field();
    auto e1 = build_grassmann_truncated(1);
    e1.group = GradingGroup::trivial();
    for (auto& g : e1.degrees) g = GroupElem{};
    SplitMix64 rng(42);
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        for (const auto& opens : topology_classes(n)) {
            FiniteTopology t;
            for (int i = 0; i < n; ++i) t.points.push_back(std::string(1, char('a' + i)));
            t.opens = opens;
            std::vector<PresheafOfAlgebras> corpus;
            std::vector<const FiniteGradedAlgebra*> fibers;
            for (int i = 0; i < n; ++i) fibers.push_back(rng.below(2) ? &field : &e1);
            corpus.push_back(product_sheaf(t, fibers));
            corpus.push_back(constant_presheaf(t, rng.below(2) ? field : e1));
            for (const auto& f : corpus) {
                REQUIRE(check_presheaf(f).passed());
                auto sff = sheafify(f);
                CHECK(check_sheaf(sff.sheaf).passed());
                const bool was_sheaf = check_sheaf(f).passed();
                bool eta_iso = true;
                for (OpenMask u : t.opens)
                    if (u != 0 && !is_isomorphism_matrix(sff.eta.at(u))) eta_iso = false;
                CHECK(eta_iso == was_sheaf);
                for (int x = 0; x < n; ++x)
                    CHECK(is_isomorphism_matrix(sff.eta.at(t.minimal_open(x))));
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("relatively free presheaf over the constant field sheaf") {
    auto field = build_base_field();
    auto f = constant_presheaf(FiniteTopology::sierpinski(), field);
    std::vector<GradedVariable> vars{{1, {}}, {2, {}}};
    auto h = build_relatively_free_presheaf(f, vars, 2);
    CHECK(h.report.passed());
    CHECK(h.sections.at(1u).dim() == 6);
    CHECK(h.sections.at(3u).dim() == 6);
    CHECK(h.restriction_maps.at({3u, 1u}) == QMat::identity(6));
}

TEST_CASE("relatively free presheaf rejects identity-dropping restrictions") {
    auto e4 = ungraded_grassmann(4);
    auto m2 = build_matrix_algebra(2);
    PresheafOfAlgebras f;
    f.top = FiniteTopology::sierpinski();
    f.sections.emplace(0u, FiniteGradedAlgebra::zero(GradingGroup::trivial()));
    f.sections.emplace(1u, m2);
    f.sections.emplace(3u, e4);
    QMat aug(4, 16);
    aug.a[0][0] = 1;
    aug.a[3][0] = 1;
    f.set_restriction(3u, 1u, aug);
    f.set_restriction(3u, 0u, QMat(0, 16));
    f.set_restriction(1u, 0u, QMat(0, 4));

    std::vector<GradedVariable> vars{{1, {}}, {2, {}}, {3, {}}};
    auto h = build_relatively_free_presheaf(f, vars, 3, Budget{2'000'000'000, 6});
    CHECK(!h.report.passed());
    CHECK(h.report.data["witness"]["reason"] ==
          "restriction ill-defined: identities do not restrict");
}

TEST_CASE("relatively free presheaf over the E4 -> E2 quotient sheaf") {
    auto e4 = build_grassmann_truncated(4);
    auto e2 = build_grassmann_truncated(2);
    PresheafOfAlgebras f;
    f.top = FiniteTopology::sierpinski();
    f.sections.emplace(0u, FiniteGradedAlgebra::zero(GradingGroup::z2()));
    f.sections.emplace(1u, e2);
    f.sections.emplace(3u, e4);
    // quotient by the ideal (e3, e4): subset monomials touching 3,4 die
    QMat q(4, 16);
    for (unsigned mask = 0; mask < 16; ++mask)
        if (!(mask & 0b1100u)) q.a[mask][mask] = 1;
    f.set_restriction(3u, 1u, q);
    f.set_restriction(3u, 0u, QMat(0, 16));
    f.set_restriction(1u, 0u, QMat(0, 4));
    REQUIRE(check_presheaf(f).passed());

    std::vector<GradedVariable> vars{{1, {1}}, {2, {1}}};
    auto h = build_relatively_free_presheaf(f, vars, 3, Budget{2'000'000'000, 6});
    CHECK(h.report.passed());
    // restriction is surjective
    auto r = h.restriction_maps.at({3u, 1u});
    CHECK(rank(r) == h.sections.at(1u).dim());
}

TEST_CASE("recovering morphism: field sheaf into E4 sheaf on Sierpinski") {
    auto base = build_matrix_algebra(1, GradingGroup::z2());
    auto e4 = build_grassmann_truncated(4);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, base);
    auto g = constant_presheaf(s, e4);
    RecoveringOptions opt;
    opt.truncation_degree = 3;
    opt.budget = Budget{2'000'000'000, 6};
    auto rec = build_recovering_morphism(f, g, opt);
    INFO(rec.report.to_json().dump(2));
    CHECK(rec.built);
    CHECK(rec.report.passed());
    CHECK(check_presheaf_morphism(f, g, rec.morphism).passed());
}

TEST_CASE("recovering morphism rejects E4 -> M2 with a separating identity") {
    auto e4 = ungraded_grassmann(4);
    auto m2 = build_matrix_algebra(2);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, e4);
    auto g = constant_presheaf(s, m2);
    RecoveringOptions opt;
    opt.truncation_degree = 3;
    opt.budget = Budget{2'000'000'000, 6};
    auto rec = build_recovering_morphism(f, g, opt);
    CHECK(!rec.built);
    CHECK(rec.report.data["failed_hypothesis"] == "variety_inclusion");
}

TEST_CASE("one-point topology: morphism exists iff the section inclusion holds") {
    auto pt = FiniteTopology::point();
    auto field = build_base_field();
    auto jets = build_truncated_polynomial(2);
    auto m2 = build_matrix_algebra(2);
    auto e4 = ungraded_grassmann(4);

    // commutative target: every identity of the field restricts
    auto ok = build_recovering_morphism(constant_presheaf(pt, field), constant_presheaf(pt, jets),
                                        RecoveringOptions{3, Budget{2'000'000'000, 6}});
    CHECK(ok.built);

    auto nope = build_recovering_morphism(constant_presheaf(pt, e4), constant_presheaf(pt, m2),
                                          RecoveringOptions{3, Budget{2'000'000'000, 6}});
    CHECK(!nope.built);

    // a noncommutative target drops the commutator identity: rejected when
    // computed, accepted when the inclusion is certified externally
    auto computed =
        build_recovering_morphism(constant_presheaf(pt, field), constant_presheaf(pt, m2),
                                  RecoveringOptions{2, Budget{2'000'000'000, 6}});
    CHECK(!computed.built);
    RecoveringOptions supplied{2, Budget{2'000'000'000, 6}};
    supplied.inclusion_supplied = true;
    supplied.supplied_certificate = Json{{"source", "test"}};
    auto via_cert =
        build_recovering_morphism(constant_presheaf(pt, field), constant_presheaf(pt, m2), supplied);
    CHECK(via_cert.built);
}
