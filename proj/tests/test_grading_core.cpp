#include "pivar/algebra.hpp"
#include "pivar/builders.hpp"
#include "pivar/structure.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <optional>

using namespace pivar;

namespace {

// Independent brute-force associativity oracle: first violating triple in
// lex order, via dense products.
std::optional<std::array<int, 3>> first_assoc_violation(const FiniteGradedAlgebra& a) {
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
            for (int k = 0; k < a.dim; ++k) {
                QVec lhs = a.multiply(a.multiply(a.basis_vec(i), a.basis_vec(j)), a.basis_vec(k));
                QVec rhs = a.multiply(a.basis_vec(i), a.multiply(a.basis_vec(j), a.basis_vec(k)));
                if (lhs != rhs) return std::array<int, 3>{i, j, k};
            }
    return std::nullopt;
}

}  // namespace

TEST_CASE("matrix algebra validates") {
    auto m2 = build_matrix_algebra(2);
    CHECK(m2.dim == 4);
    CHECK(validate_algebra(m2).passed());
    CHECK(build_matrix_algebra(1).dim == 1);
}

TEST_CASE("grassmann E3 canonical grading") {
    auto e3 = build_grassmann_truncated(3);
    auto rep = validate_algebra(e3);
    CHECK(rep.passed());
    auto dims = e3.component_dims();
    CHECK(dims[GroupElem{0}] == 4);
    CHECK(dims[GroupElem{1}] == 4);
}

TEST_CASE("broken M2 constants yield associativity violation with derived witness") {
    auto m2 = build_matrix_algebra(2);
    // force e12 * e21 = e22 (true product is e11); indices: e12 = 1, e21 = 2.
    m2.add_structure_constant(1, 2, 0, Rat(-1));
    m2.add_structure_constant(1, 2, 3, Rat(1));
    auto rep = validate_algebra(m2);
    REQUIRE(rep.verdict == Verdict::Fail);
    CHECK(rep.data["witness"]["axiom"] == "AssociativityViolation");
    auto oracle = first_assoc_violation(m2);
    REQUIRE(oracle.has_value());
    auto w = rep.data["witness"]["witness"];
    CHECK(w[0].get<int>() == (*oracle)[0]);
    CHECK(w[1].get<int>() == (*oracle)[1]);
    CHECK(w[2].get<int>() == (*oracle)[2]);
}

TEST_CASE("elementary Z2 grading on M2") {
    GradingGroup z2 = GradingGroup::z2();
    std::vector<GroupElem> degs{{0}, {1}, {1}, {0}};  // e11,e12,e21,e22
    auto m2 = build_matrix_algebra(2, z2, degs);
    CHECK(validate_algebra(m2).passed());
    auto dims = m2.component_dims();
    CHECK(dims[GroupElem{0}] == 2);
    CHECK(dims[GroupElem{1}] == 2);

    std::vector<GroupElem> bad{{1}, {1}, {1}, {1}};
    CHECK_THROWS_AS(build_matrix_algebra(2, z2, bad), GradingError);
}

TEST_CASE("upper triangular algebras") {
    CHECK(build_upper_triangular(1).dim == 1);
    auto ut2 = build_upper_triangular(2);
    CHECK(ut2.dim == 3);
    CHECK(validate_algebra(ut2).passed());
    auto rad = radical_basis(ut2);
    REQUIRE(rad.size() == 1);
    // e12 is basis index 1 in the (e11, e12, e22) ordering
    CHECK(rad[0] == QVec{Rat(0), Rat(1), Rat(0)});

    auto ut3 = build_upper_triangular(3);
    CHECK(ut3.dim == 6);
    CHECK(commutator_span(ut3).size() == 3);
}

TEST_CASE("grassmann defining relations") {
    CHECK(build_grassmann_truncated(0).dim == 1);
    auto e2 = build_grassmann_truncated(2);
    CHECK(e2.dim == 4);
    // e1 = mask 1, e2 = mask 2, e1e2 = mask 3
    QVec p = e2.multiply(e2.basis_vec(1), e2.basis_vec(2));
    QVec q = e2.multiply(e2.basis_vec(2), e2.basis_vec(1));
    for (int k = 0; k < 4; ++k) CHECK(p[k] == -q[k]);
    CHECK(p[3] == Rat(1));
}

TEST_CASE("clifford algebras") {
    auto quat = build_clifford({Rat(-1), Rat(-1)});
    CHECK(quat.dim == 4);
    CHECK(validate_algebra(quat).passed());
    // i = v1 (mask 1), j = v2 (mask 2), k = v1v2 (mask 3)
    CHECK(quat.multiply(quat.basis_vec(1), quat.basis_vec(1)) ==
          QVec{Rat(-1), Rat(0), Rat(0), Rat(0)});
    QVec ij = quat.multiply(quat.basis_vec(1), quat.basis_vec(2));
    QVec ji = quat.multiply(quat.basis_vec(2), quat.basis_vec(1));
    CHECK(ij[3] == Rat(1));
    CHECK(ji[3] == Rat(-1));

    auto split = build_clifford({Rat(1)});
    CHECK(split.dim == 2);
    QVec idem{Rat(1, 2), Rat(1, 2)};  // (1+v)/2
    CHECK(split.multiply(idem, idem) == idem);

    auto c3 = build_clifford({Rat(-1), Rat(-1), Rat(-1)});
    CHECK(c3.dim == 8);
    CHECK(c3.component_dims()[GroupElem{0}] == 4);

    CHECK_THROWS_AS(build_clifford({Rat(0)}), StructuralError);
}

TEST_CASE("clifford even component has dimension 2^{k-1}") {
    std::vector<Rat> q;
    for (int k = 1; k <= 4; ++k) {
        q.push_back(Rat(2 * k - 3));  // odd, hence nonzero; mixed signs
        auto c = build_clifford(q);
        CHECK(c.component_dims()[GroupElem{0}] == (1 << (k - 1)));
    }
}

TEST_CASE("tensor with commutative factor") {
    auto m2 = build_matrix_algebra(2);
    auto f = build_base_field();
    auto t = tensor_with_commutative(m2, f);
    CHECK(t.dim == 4);
    CHECK(validate_algebra(t).passed());

    auto fun2 = build_function_algebra({"x", "y"});
    auto t2 = tensor_with_commutative(m2, fun2);
    CHECK(t2.dim == 8);
    CHECK(validate_algebra(t2).passed());
    // split idempotents: a x d_x and a x d_y give M2 x M2
    auto prod = direct_product({&m2, &m2});
    QMat iso(8, 8);
    // basis of t2: e_ij x d_u at 2*(matrix unit index) + u; factor u gets block u*4
    for (int unit = 0; unit < 4; ++unit)
        for (int u = 0; u < 2; ++u) iso.a[u * 4 + unit][unit * 2 + u] = 1;
    CHECK(verify_morphism(t2, prod, iso).passed());
    CHECK(is_isomorphism_matrix(iso));

    auto e2 = build_grassmann_truncated(2);
    auto jets = build_truncated_polynomial(2);
    auto t3 = tensor_with_commutative(e2, jets);
    CHECK(t3.dim == 8);
    CHECK(validate_algebra(t3).passed());
    CHECK(t3.component_dims()[GroupElem{1}] == 4);

    CHECK_THROWS_AS(tensor_with_commutative(m2, m2), StructuralError);
}

TEST_CASE("embedding a -> a x 1 is an injective graded morphism") {
    auto e2 = build_grassmann_truncated(2);
    auto jets = build_truncated_polynomial(2);
    auto t = tensor_with_commutative(e2, jets);
    QMat emb(t.dim, e2.dim);
    for (int i = 0; i < e2.dim; ++i) emb.a[i * jets.dim + 0][i] = 1;
    CHECK(verify_morphism(e2, t, emb).passed());
    CHECK(rank(emb) == e2.dim);
}

TEST_CASE("direct products") {
    auto f = build_base_field();
    auto p = direct_product({&f, &f});
    CHECK(p.dim == 2);
    CHECK(validate_algebra(p).passed());
    CHECK(p.multiply(p.basis_vec(0), p.basis_vec(1)) == QVec{Rat(0), Rat(0)});
    CHECK(p.multiply(p.basis_vec(0), p.basis_vec(0)) == p.basis_vec(0));

    auto e2 = build_grassmann_truncated(2);
    auto single = direct_product({&e2});
    CHECK(single.dim == e2.dim);

    // E2 x E2 with the Z2 x Z2 grading (parity of factor 1, parity of factor 2)
    GradingGroup z22 = GradingGroup::z2_pow(2);
    std::vector<std::vector<GroupElem>> regrade(2);
    for (int i = 0; i < e2.dim; ++i) {
        regrade[0].push_back(GroupElem{e2.degrees[i][0], 0});
        regrade[1].push_back(GroupElem{0, e2.degrees[i][0]});
    }
    auto pg = direct_product({&e2, &e2}, z22, regrade);
    CHECK(pg.dim == 8);
    CHECK(validate_algebra(pg).passed());
}

TEST_CASE("corner algebras") {
    auto m2 = build_matrix_algebra(2);
    QVec e11(4, Rat(0));
    e11[0] = 1;
    auto corner = corner_algebra(m2, make_homogeneous(m2, e11, m2.group.identity()));
    CHECK(corner.dim == 1);
    CHECK(validate_algebra(corner).passed());

    auto m3 = build_matrix_algebra(3);
    QVec e(9, Rat(0));
    e[0] = 1;  // e11
    e[4] = 1;  // e22
    auto c = corner_algebra(m3, make_homogeneous(m3, e, m3.group.identity()));
    CHECK(c.dim == 4);
    auto themat = build_matrix_algebra(2);
    // corner basis is {e11, e12, e21, e22} of the top-left block in RREF order
    QMat iso = QMat::identity(4);
    CHECK(verify_morphism(c, themat, iso).passed());

    QVec e12(4, Rat(0));
    e12[1] = 1;
    CHECK_THROWS_AS(corner_algebra(m2, make_homogeneous(m2, e12, m2.group.identity())),
                    StructuralError);
}

TEST_CASE("corner at the unit is isomorphic to A") {
    for (const auto& a : {build_matrix_algebra(2), build_upper_triangular(3),
                          build_grassmann_truncated(2)}) {
        auto corner = corner_algebra(a, make_homogeneous(a, a.unit, a.group.identity()));
        REQUIRE(corner.dim == a.dim);
        // eAe with e = 1 reproduces A on the standard basis
        QMat iso = QMat::identity(a.dim);
        CHECK(verify_morphism(corner, a, iso).passed());
    }
}

TEST_CASE("center radical local verdicts") {
    auto m2 = build_matrix_algebra(2);
    auto r1 = center_radical_local(m2);
    CHECK(r1.center.size() == 1);
    CHECK(r1.radical.empty());
    CHECK(r1.is_local.verdict == Verdict::Fail);

    auto ut2 = build_upper_triangular(2);
    auto r2 = center_radical_local(ut2);
    CHECK(r2.radical.size() == 1);
    CHECK(r2.is_local.verdict == Verdict::Fail);

    auto e4 = build_grassmann_truncated(4);
    auto r3 = center_radical_local(e4);
    CHECK(r3.radical.size() == 15);
    CHECK(r3.is_local.verdict == Verdict::Pass);

    auto jets3 = build_truncated_polynomial(3);
    auto r4 = center_radical_local(jets3);
    CHECK(r4.radical.size() == 2);
    CHECK(r4.is_local.verdict == Verdict::Pass);

    auto quat = build_clifford({Rat(-1), Rat(-1)});
    auto r5 = center_radical_local(quat);
    CHECK(r5.radical.empty());
    CHECK(r5.is_local.verdict == Verdict::Inconclusive);

    // split center: Q[t]/(t^2 - 1) = Q x Q must be detected as non-local
    FiniteGradedAlgebra sq(GradingGroup::trivial(), 2);
    sq.add_structure_constant(0, 0, 0, Rat(1));
    sq.add_structure_constant(0, 1, 1, Rat(1));
    sq.add_structure_constant(1, 0, 1, Rat(1));
    sq.add_structure_constant(1, 1, 0, Rat(1));
    sq.unit[0] = 1;
    REQUIRE(validate_algebra(sq).passed());
    CHECK(center_radical_local(sq).is_local.verdict == Verdict::Fail);

    // Q[t]/(t^2 - 2) is a field: local
    FiniteGradedAlgebra fld(GradingGroup::trivial(), 2);
    fld.add_structure_constant(0, 0, 0, Rat(1));
    fld.add_structure_constant(0, 1, 1, Rat(1));
    fld.add_structure_constant(1, 0, 1, Rat(1));
    fld.add_structure_constant(1, 1, 0, Rat(2));
    fld.unit[0] = 1;
    REQUIRE(validate_algebra(fld).passed());
    CHECK(center_radical_local(fld).is_local.verdict == Verdict::Pass);
}

TEST_CASE("rank nullity of ad: dim A - dim Z(A) = dim Inn(A)") {
    for (const auto& a :
         {build_matrix_algebra(2), build_upper_triangular(3), build_grassmann_truncated(3),
          build_clifford({Rat(-1), Rat(-1)})}) {
        const int dz = static_cast<int>(center_basis(a).size());
        // image of a |-> (b |-> ab - ba)
        EchelonSpan image(a.dim * a.dim);
        for (int i = 0; i < a.dim; ++i) {
            QMat ad(a.dim, a.dim);
            QMat l = a.left_mult_matrix(a.basis_vec(i));
            QMat r = a.right_mult_matrix(a.basis_vec(i));
            QVec flat;
            flat.reserve(a.dim * a.dim);
            for (int x = 0; x < a.dim; ++x)
                for (int y = 0; y < a.dim; ++y) flat.push_back(l.a[x][y] - r.a[x][y]);
            image.insert(flat);
        }
        CHECK(a.dim - dz == image.rank());
    }
}

TEST_CASE("every builder output validates") {
    std::vector<FiniteGradedAlgebra> corpus;
    corpus.push_back(build_base_field());
    corpus.push_back(build_matrix_algebra(3));
    corpus.push_back(build_upper_triangular(4));
    corpus.push_back(build_grassmann_truncated(4));
    corpus.push_back(build_clifford({Rat(2), Rat(-3, 7)}));
    corpus.push_back(build_truncated_polynomial(4));
    corpus.push_back(build_function_algebra({"a", "b", "c"}));
    auto m2 = build_matrix_algebra(2);
    corpus.push_back(matrix_over(build_grassmann_truncated(1), 2));
    corpus.push_back(tensor_with_commutative(m2, build_function_algebra({"p", "q"})));
    corpus.push_back(direct_product({&m2, &m2}));
    for (const auto& a : corpus) CHECK(validate_algebra(a).passed());
}

TEST_CASE("zero algebra is permitted and validates") {
    auto z = FiniteGradedAlgebra::zero(GradingGroup::z2());
    CHECK(validate_algebra(z).passed());
}

TEST_CASE("structural errors are distinct from axiom failures") {
    FiniteGradedAlgebra a(GradingGroup::trivial(), 2);
    CHECK_THROWS_AS(a.add_structure_constant(0, 0, 5, Rat(1)), StructuralError);
    CHECK_THROWS_AS(GradingGroup(0, {0}), StructuralError);
    // axiom failure (no unit axiom satisfied) is a report, not a throw
    auto rep = validate_algebra(a);
    CHECK(rep.verdict == Verdict::Fail);
}
