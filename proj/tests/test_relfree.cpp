#include "pivar/builders.hpp"
#include "pivar/relfree.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pivar;

namespace {

std::vector<GradedVariable> vars(std::initializer_list<std::pair<int, GroupElem>> spec) {
    std::vector<GradedVariable> out;
    for (const auto& [i, g] : spec) out.push_back(GradedVariable{i, g});
    return out;
}

}  // namespace

TEST_CASE("commutative truncation: 2 variables, degree 2 has dimension 6") {
    auto field = build_base_field();
    KernelCache cache(&field);
    auto t = relatively_free_truncation(cache, vars({{1, {}}, {2, {}}}), 2);
    CHECK(t.dim() == 6);
    // basis contains 1, x1, x2, x1^2, x1x2, x2^2
    Word x1{GradedVariable{1, {}}};
    Word x1x2{GradedVariable{1, {}}, GradedVariable{2, {}}};
    Word x2x1{GradedVariable{2, {}}, GradedVariable{1, {}}};
    CHECK(t.basis_index(Word{}) >= 0);
    CHECK(t.basis_index(x1) >= 0);
    CHECK(t.basis_index(x1x2) >= 0);
    CHECK(t.basis_index(x2x1) == -1);
    // x2 x1 reduces to x1 x2
    auto red = t.reduce_word(x2x1);
    REQUIRE(red.size() == 1);
    CHECK(red[0].first == t.basis_index(x1x2));
    CHECK(red[0].second == Rat(1));
}

TEST_CASE("E with two ungraded variables at degree 2 keeps all 7 words") {
    KernelCache cache(GrassmannOracle{false});
    auto t = relatively_free_truncation(cache, vars({{1, {}}, {2, {}}}), 2);
    CHECK(t.dim() == 7);
}

TEST_CASE("odd variables of E anticommute in the quotient") {
    KernelCache cache(GrassmannOracle{true});
    auto t = relatively_free_truncation(cache, vars({{1, {1}}, {2, {1}}}), 2);
    Word x1x2{GradedVariable{1, {1}}, GradedVariable{2, {1}}};
    Word x2x1{GradedVariable{2, {1}}, GradedVariable{1, {1}}};
    auto red = t.reduce_word(x2x1);
    REQUIRE(red.size() == 1);
    CHECK(red[0].first == t.basis_index(x1x2));
    CHECK(red[0].second == Rat(-1));
    // odd squares vanish
    Word sq{GradedVariable{1, {1}}, GradedVariable{1, {1}}};
    CHECK(t.reduce_word(sq).empty());
    // basis: 1, x1, x2, x1x2
    CHECK(t.dim() == 4);
}

TEST_CASE("partial multiplication respects the degree bound") {
    auto field = build_base_field();
    KernelCache cache(&field);
    auto t = relatively_free_truncation(cache, vars({{1, {}}, {2, {}}}), 2);
    QVec x1(t.dim(), Rat(0)), x2(t.dim(), Rat(0));
    x1[t.basis_index(Word{GradedVariable{1, {}}})] = 1;
    x2[t.basis_index(Word{GradedVariable{2, {}}})] = 1;
    auto prod = t.multiply(x1, x2);
    REQUIRE(prod.has_value());
    Word x1x2{GradedVariable{1, {}}, GradedVariable{2, {}}};
    CHECK((*prod)[t.basis_index(x1x2)] == Rat(1));
    // x1 * (x1 x2) needs degree 3: undefined at bound 2
    QVec q(t.dim(), Rat(0));
    q[t.basis_index(x1x2)] = 1;
    CHECK(!t.multiply(x1, q).has_value());
}

TEST_CASE("truncation closes into an algebra for odd grassmann variables") {
    KernelCache cache(GrassmannOracle{true});
    auto t = relatively_free_truncation(cache, vars({{1, {1}}, {2, {1}}}), 2);
    auto a = truncation_as_algebra(t, cache);
    CHECK(a.dim == 4);
    CHECK(validate_algebra(a).passed());
    // and the closed algebra stays inside the variety of the source
    KernelCache ta(&a);
    CHECK(variety_contains(cache, ta, 2).contained);
}

TEST_CASE("commutative truncation does not close at low bounds") {
    auto field = build_base_field();
    KernelCache cache(&field);
    auto t = relatively_free_truncation(cache, vars({{1, {}}}), 2);
    CHECK_THROWS_AS(truncation_as_algebra(t, cache), StructuralError);
}

TEST_CASE("class relations match the kernel dimensions") {
    auto field = build_base_field();
    KernelCache cache(&field);
    auto t = relatively_free_truncation(cache, vars({{1, {}}, {2, {}}}), 2);
    int total_relations = 0;
    int total_words = 0;
    for (const auto& cls : t.classes) {
        total_relations += static_cast<int>(class_relations(cls, cache).size());
        total_words += static_cast<int>(cls.words.size());
    }
    CHECK(total_words - total_relations == t.dim());
}

TEST_CASE("arena budget guards the combinatorial blow-up") {
    auto field = build_base_field();
    KernelCache cache(&field);
    std::vector<GradedVariable> many;
    for (int i = 1; i <= 8; ++i) many.push_back(GradedVariable{i, {}});
    CHECK_THROWS_AS(relatively_free_truncation(cache, many, 8), BudgetError);
}
