#include "pivar/morita.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pivar;

TEST_CASE("matrix_over dimensions and gradings") {
    auto field = build_base_field();
    auto m1 = matrix_over(field, 1);
    CHECK(m1.dim == 1);
    CHECK(verify_graded_iso(m1, field, QMat::identity(1)).passed());

    auto m2 = matrix_over(field, 2);
    CHECK(m2.dim == 4);
    CHECK(validate_algebra(m2).passed());
    CHECK(verify_graded_iso(m2, build_matrix_algebra(2), QMat::identity(4)).passed());

    auto e2 = build_grassmann_truncated(2);
    auto m2e = matrix_over(e2, 2);
    CHECK(m2e.dim == 16);
    CHECK(validate_algebra(m2e).passed());
    auto dims = m2e.component_dims();
    CHECK(dims[GroupElem{0}] == 8);
    CHECK(dims[GroupElem{1}] == 8);
}

TEST_CASE("verify_graded_iso verdicts") {
    auto m2 = build_matrix_algebra(2);
    CHECK(verify_graded_iso(m2, m2, QMat::identity(4)).passed());

    // corner(M2, e11) -> base field
    QVec e11(4, Rat(0));
    e11[0] = 1;
    auto corner = corner_algebra(m2, make_homogeneous(m2, e11, m2.group.identity()));
    QMat one = QMat::identity(1);
    CHECK(verify_graded_iso(corner, build_base_field(), one).passed());

    // grading-forgetting map on E2: identity onto the all-neutral regrade
    auto e2 = build_grassmann_truncated(2);
    auto flat = e2;
    for (auto& g : flat.degrees) g = GroupElem{0};
    auto rep = verify_graded_iso(e2, flat, QMat::identity(4));
    CHECK(!rep.passed());
    CHECK(rep.data["witness"]["reason"] == "degree violation");
    CHECK(rep.data["witness"]["basis_index"] == 1);  // e1

    // dimension mismatch is immediate
    auto bad = verify_graded_iso(m2, build_base_field(), QMat(1, 4));
    CHECK(!bad.passed());
    CHECK(bad.data["witness"]["reason"] == "dimension mismatch");
}

TEST_CASE("small isomorphism search finds the split quadratic") {
    // Q[t]/(t^2 - 1) is isomorphic to Q x Q
    FiniteGradedAlgebra sq(GradingGroup::trivial(), 2);
    sq.add_structure_constant(0, 0, 0, Rat(1));
    sq.add_structure_constant(0, 1, 1, Rat(1));
    sq.add_structure_constant(1, 0, 1, Rat(1));
    sq.add_structure_constant(1, 1, 0, Rat(1));
    sq.unit[0] = 1;
    auto field = build_base_field();
    auto qq = direct_product({&field, &field});
    auto iso = search_graded_iso_small(sq, qq);
    REQUIRE(iso.has_value());
    CHECK(verify_graded_iso(sq, qq, *iso).passed());

    // and refuses the over-budget case
    auto m2 = build_matrix_algebra(2);
    CHECK_THROWS_AS(search_graded_iso_small(m2, m2), BudgetError);
}

TEST_CASE("corner certificate for the scalar Morita context") {
    auto field = build_base_field();
    MoritaContext ctx;
    ctx.A = &field;
    ctx.B = &field;
    ctx.n = 2;
    ctx.e_coords = QVec(4, Rat(0));
    ctx.e_coords[0] = 1;  // e11
    ctx.iso = QMat::identity(1);
    auto cert = corner_variety_certificate(ctx, 4, Budget{2'000'000'000, 6});
    CHECK(cert.report.passed());
    CHECK(cert.corner.dim == 1);

    // s4 is detected inside the degree-4 kernel of M2 = M_2(F)
    auto s4vec = polynomial_to_pattern_vector(
        MultilinearPattern{GradingGroup::trivial(), std::vector<GroupElem>(4)},
        standard_polynomial(4));
    KernelCache cm(&cert.matrix_algebra, Budget{2'000'000'000, 6});
    CHECK(cm.kernel(MultilinearPattern{GradingGroup::trivial(), std::vector<GroupElem>(4)})
              .span()
              .contains(s4vec));
}

TEST_CASE("full idempotent gives kernel equality at every pattern") {
    auto e2 = build_grassmann_truncated(2);
    MoritaContext ctx;
    ctx.A = &e2;
    ctx.B = &e2;
    ctx.n = 1;
    ctx.e_coords = e2.unit;
    ctx.iso = QMat::identity(4);
    auto cert = corner_variety_certificate(ctx, 3, Budget{2'000'000'000, 6});
    CHECK(cert.report.passed());
    CHECK(cert.corner.dim == e2.dim);
    CHECK(cert.report.data["corner_vs_A"]["corner_in_A"]["contained"] == true);
    CHECK(cert.report.data["corner_vs_A"]["A_in_corner"]["contained"] == true);
}

TEST_CASE("invalid idempotents are rejected") {
    auto field = build_base_field();
    MoritaContext ctx;
    ctx.A = &field;
    ctx.B = &field;
    ctx.n = 2;
    ctx.e_coords = QVec(4, Rat(0));
    ctx.e_coords[1] = 1;  // e12: nilpotent, not an idempotent
    CHECK_THROWS_AS(corner_variety_certificate(ctx, 2), StructuralError);

    // odd-degree element rejected before any corner work
    auto e2 = build_grassmann_truncated(2);
    MoritaContext ctx2;
    ctx2.A = &e2;
    ctx2.B = &e2;
    ctx2.n = 1;
    ctx2.e_coords = e2.basis_vec(1);  // e1 is odd
    CHECK_THROWS_AS(corner_variety_certificate(ctx2, 2), StructuralError);
}

TEST_CASE("corner of M_n(B) at the (1,1) idempotent recovers B") {
    std::vector<FiniteGradedAlgebra> bs;
    bs.push_back(build_base_field());
    bs.push_back(build_grassmann_truncated(1));
    bs.push_back(build_grassmann_truncated(2));
    for (const auto& b : bs)
        for (int n = 2; n <= 3; ++n) {
            auto m = matrix_over(b, n);
            QVec e(m.dim, Rat(0));
            for (int t = 0; t < b.dim; ++t) e[t] = b.unit[t];  // e11 (x) 1_B
            auto corner = corner_algebra(m, make_homogeneous(m, e, m.group.identity()));
            REQUIRE(corner.dim == b.dim);
            CHECK(verify_graded_iso(corner, b, QMat::identity(b.dim)).passed());
        }
}

TEST_CASE("kernel of M_n(B) is contained in kernel of B at low degrees") {
    std::vector<FiniteGradedAlgebra> bs;
    bs.push_back(build_base_field());
    bs.push_back(build_grassmann_truncated(2));
    for (const auto& b : bs) {
        auto m = matrix_over(b, 2);
        KernelCache cm(&m, Budget{10'000'000'000, 6});
        KernelCache cb(&b, Budget{10'000'000'000, 6});
        CHECK(variety_contains(cm, cb, 3).contained);
    }
}

TEST_CASE("morita ringed morphism on Sierpinski constant sheaves") {
    auto field = build_base_field();
    auto m2mat = matrix_over(field, 2);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, field);
    auto g = constant_presheaf(s, m2mat);

    MoritaContext ctx;
    ctx.A = &field;
    ctx.B = &field;
    ctx.n = 2;
    ctx.e_coords = QVec(4, Rat(0));
    ctx.e_coords[0] = 1;
    ctx.iso = QMat::identity(1);

    auto mm = morita_ringed_morphism(f, g, ctx, 4, Budget{2'000'000'000, 6});
    INFO(mm.report.to_json().dump(2));
    CHECK(mm.report.passed());
    CHECK(mm.recovering.built);
    CHECK(check_presheaf_morphism(f, g, mm.recovering.morphism).passed());

    // morita succeeds exactly when its two sub-certificates succeed
    CHECK(mm.report.data["corner_certificate"]["verdict"] == true);
    CHECK(mm.report.data["recovering"]["verdict"] == true);
}

TEST_CASE("morita pipeline rejects before sheaf work on a bad idempotent") {
    auto e2 = build_grassmann_truncated(2);
    auto s = FiniteTopology::sierpinski();
    auto f = constant_presheaf(s, e2);
    auto g = constant_presheaf(s, e2);
    MoritaContext ctx;
    ctx.A = &e2;
    ctx.B = &e2;
    ctx.n = 1;
    ctx.e_coords = e2.basis_vec(1);  // odd
    CHECK_THROWS_AS(morita_ringed_morphism(f, g, ctx, 2), StructuralError);
}
