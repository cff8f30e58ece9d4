#include "pivar/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pivar;

static QMat from_ints(std::vector<std::vector<int>> rows) {
    QMat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.a[i][j] = rows[i][j];
    return m;
}

TEST_CASE("rref and rank") {
    QMat m = from_ints({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(m) == 2);
    QMat id = QMat::identity(3);
    CHECK(rank(id) == 3);
}

TEST_CASE("nullspace is canonical and correct") {
    QMat m = from_ints({{1, 1, 0}, {0, 0, 1}});
    auto ns = nullspace(m);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0] == QVec{Rat(-1), Rat(1), Rat(0)});
    // every basis vector is in the kernel
    for (const auto& v : ns) CHECK(is_zero_vec(apply_mat(m, v)));
}

TEST_CASE("solve and inverse") {
    QMat m = from_ints({{2, 1}, {1, 1}});
    auto x = solve(m, QVec{Rat(3), Rat(2)});
    REQUIRE(x.has_value());
    CHECK(apply_mat(m, *x) == QVec{Rat(3), Rat(2)});
    auto inv = inverse(m);
    REQUIRE(inv.has_value());
    CHECK(matmul(m, *inv) == QMat::identity(2));

    QMat sing = from_ints({{1, 2}, {2, 4}});
    CHECK(!inverse(sing).has_value());
    CHECK(!solve(sing, QVec{Rat(1), Rat(0)}).has_value());
}

TEST_CASE("echelon span dedupes and tracks rank") {
    EchelonSpan span(4);
    CHECK(span.insert(QVec{Rat(1), Rat(2), Rat(0), Rat(0)}));
    CHECK(!span.insert(QVec{Rat(2), Rat(4), Rat(0), Rat(0)}));
    CHECK(span.insert(QVec{Rat(0), Rat(1), Rat(1), Rat(0)}));
    CHECK(span.rank() == 2);
    CHECK(span.contains(QVec{Rat(1), Rat(3), Rat(1), Rat(0)}));
    CHECK(!span.contains(QVec{Rat(0), Rat(0), Rat(0), Rat(1)}));

    EchelonSpan other(4);
    other.insert(QVec{Rat(1), Rat(3), Rat(1), Rat(0)});
    CHECK(span.contains_span(other));
    CHECK(!other.contains_span(span));
}

TEST_CASE("rref basis of echelon span matches dense rref") {
    EchelonSpan span(3);
    span.insert(QVec{Rat(0), Rat(2), Rat(2)});
    span.insert(QVec{Rat(1), Rat(1), Rat(0)});
    auto basis = span.rref_basis();
    REQUIRE(basis.size() == 2);
    CHECK(basis[0] == QVec{Rat(1), Rat(0), Rat(-1)});
    CHECK(basis[1] == QVec{Rat(0), Rat(1), Rat(1)});
}

TEST_CASE("coordinates in basis") {
    std::vector<QVec> basis{{Rat(1), Rat(0), Rat(1)}, {Rat(0), Rat(1), Rat(1)}};
    auto c = coordinates_in_basis(basis, QVec{Rat(2), Rat(3), Rat(5)});
    REQUIRE(c.has_value());
    CHECK(*c == QVec{Rat(2), Rat(3)});
    CHECK(!coordinates_in_basis(basis, QVec{Rat(0), Rat(0), Rat(1)}).has_value());
}

TEST_CASE("rational parsing round trip") {
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("-7") == Rat(-7));
    CHECK(rat_to_string(Rat(-2, 6)) == "-1/3");
    CHECK_THROWS_AS(rat_from_string("1/0"), StructuralError);
    CHECK_THROWS_AS(rat_from_string("x"), StructuralError);
}
