#pragma once

#include "pivar/grading.hpp"
#include "pivar/linalg.hpp"
#include "pivar/report.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pivar {

/// Finite-dimensional G-graded unital algebra over Q, given by exact sparse
/// structure constants b_i b_j = sum_k c_{ij}^k b_k and a homogeneous degree
/// per basis vector. dim 0 is the zero algebra (the terminal object; it shows
/// up as the section algebra over the empty open).
struct FiniteGradedAlgebra {
    GradingGroup group;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<GroupElem> degrees;
    QVec unit;

    FiniteGradedAlgebra() = default;
    FiniteGradedAlgebra(GradingGroup g, int n)
        : group(std::move(g)),
          dim(n),
          labels(n),
          degrees(n, group.identity()),
          unit(n, Rat(0)),
          mul_(static_cast<std::size_t>(n) * n) {
        if (n < 0) throw StructuralError("negative dimension");
        for (int i = 0; i < n; ++i) labels[i] = "b" + std::to_string(i);
    }

    static FiniteGradedAlgebra zero(const GradingGroup& g) { return FiniteGradedAlgebra(g, 0); }

    const SparseRow& basis_product(int i, int j) const {
        return mul_[static_cast<std::size_t>(i) * dim + j];
    }

    void add_structure_constant(int i, int j, int k, const Rat& c) {
        if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim)
            throw StructuralError("structure constant index out of range");
        if (is_zero(c)) return;
        auto& row = mul_[static_cast<std::size_t>(i) * dim + j];
        for (auto& [kk, q] : row) {
            if (kk == k) {
                q += c;
                if (is_zero(q)) {
                    row.erase(std::find_if(row.begin(), row.end(),
                                           [&](const auto& p) { return p.first == k; }));
                }
                return;
            }
        }
        row.emplace_back(k, c);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    void set_degree(int i, GroupElem g) { degrees[i] = group.normalize(std::move(g)); }

    QVec basis_vec(int i) const {
        QVec v(dim, Rat(0));
        v[i] = 1;
        return v;
    }

    /// x * b_j for a coordinate vector x.
    QVec multiply_vec_basis(const QVec& x, int j) const {
        QVec out(dim, Rat(0));
        for (int i = 0; i < dim; ++i) {
            if (is_zero(x[i])) continue;
            for (const auto& [k, c] : basis_product(i, j)) out[k] += x[i] * c;
        }
        return out;
    }

    QVec multiply_basis_vec(int i, const QVec& y) const {
        QVec out(dim, Rat(0));
        for (int j = 0; j < dim; ++j) {
            if (is_zero(y[j])) continue;
            for (const auto& [k, c] : basis_product(i, j)) out[k] += y[j] * c;
        }
        return out;
    }

    QVec multiply(const QVec& x, const QVec& y) const {
        QVec out(dim, Rat(0));
        for (int i = 0; i < dim; ++i) {
            if (is_zero(x[i])) continue;
            for (int j = 0; j < dim; ++j) {
                if (is_zero(y[j])) continue;
                for (const auto& [k, c] : basis_product(i, j)) out[k] += x[i] * y[j] * c;
            }
        }
        return out;
    }

    QMat left_mult_matrix(const QVec& x) const {
        QMat m(dim, dim);
        for (int j = 0; j < dim; ++j) {
            QVec col = multiply_vec_basis(x, j);
            for (int k = 0; k < dim; ++k) m.a[k][j] = col[k];
        }
        return m;
    }

    QMat right_mult_matrix(const QVec& y) const {
        QMat m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            QVec col = multiply_basis_vec(i, y);
            for (int k = 0; k < dim; ++k) m.a[k][i] = col[k];
        }
        return m;
    }

    Rat trace_left_mult_basis(int i) const {
        Rat t(0);
        for (int j = 0; j < dim; ++j)
            for (const auto& [k, c] : basis_product(i, j))
                if (k == j) t += c;
        return t;
    }

    /// Degrees actually carried by basis vectors, sorted, deduplicated.
    std::vector<GroupElem> degree_support() const {
        std::vector<GroupElem> s(degrees);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    std::vector<int> component_indices(const GroupElem& g) const {
        std::vector<int> idx;
        for (int i = 0; i < dim; ++i)
            if (degrees[i] == g) idx.push_back(i);
        return idx;
    }

    std::map<GroupElem, int> component_dims() const {
        std::map<GroupElem, int> d;
        for (const auto& g : degrees) d[g]++;
        return d;
    }

    bool vector_supported_on_degree(const QVec& v, const GroupElem& g) const {
        for (int i = 0; i < dim; ++i)
            if (!is_zero(v[i]) && degrees[i] != g) return false;
        return true;
    }

  private:
    std::vector<SparseRow> mul_;  // row (i*dim + j) lists b_i b_j
};

/// A coordinate vector known to live in a single homogeneous component.
struct HomogeneousElement {
    const FiniteGradedAlgebra* algebra = nullptr;
    QVec coords;
    GroupElem degree;
};

inline HomogeneousElement make_homogeneous(const FiniteGradedAlgebra& a, QVec coords,
                                           GroupElem degree) {
    degree = a.group.normalize(std::move(degree));
    if (static_cast<int>(coords.size()) != a.dim)
        throw StructuralError("homogeneous element coordinate length mismatch");
    if (!a.vector_supported_on_degree(coords, degree))
        throw StructuralError("element not supported on the stated degree component");
    return {&a, std::move(coords), std::move(degree)};
}

/// Splits a vector into its homogeneous pieces (zero pieces dropped).
inline std::vector<HomogeneousElement> homogeneous_components(const FiniteGradedAlgebra& a,
                                                              const QVec& v) {
    std::map<GroupElem, QVec> parts;
    for (int i = 0; i < a.dim; ++i) {
        if (is_zero(v[i])) continue;
        auto [it, fresh] = parts.try_emplace(a.degrees[i], QVec(a.dim, Rat(0)));
        it->second[i] = v[i];
    }
    std::vector<HomogeneousElement> out;
    for (auto& [g, coords] : parts) out.push_back({&a, std::move(coords), g});
    return out;
}

struct GradedAlgebraMorphism {
    const FiniteGradedAlgebra* source = nullptr;
    const FiniteGradedAlgebra* target = nullptr;
    QMat matrix;  // target_dim x source_dim

    QVec operator()(const QVec& v) const { return apply_mat(matrix, v); }
};

/// Checks unitality, multiplicativity on all basis pairs, and degree
/// preservation; reports the first violation with a witness.
inline VerificationReport verify_morphism(const FiniteGradedAlgebra& src,
                                          const FiniteGradedAlgebra& tgt, const QMat& m) {
    const std::string name = "morphism";
    if (m.rows != tgt.dim || m.cols != src.dim)
        throw StructuralError("morphism matrix shape mismatch");
    if (src.group.length() != tgt.group.length() || !(src.group == tgt.group))
        return VerificationReport::fail(name, Json{{"reason", "grading group mismatch"}});

    for (int i = 0; i < src.dim; ++i) {
        QVec img(tgt.dim, Rat(0));
        for (int k = 0; k < tgt.dim; ++k) img[k] = m.a[k][i];
        if (!tgt.vector_supported_on_degree(img, src.degrees[i]))
            return VerificationReport::fail(
                name, Json{{"reason", "degree violation"}, {"basis_index", i},
                           {"degree", degree_to_string(src.degrees[i])}});
    }

    QVec unit_img = apply_mat(m, src.unit);
    if (unit_img != tgt.unit)
        return VerificationReport::fail(name, Json{{"reason", "not unital"}});

    for (int i = 0; i < src.dim; ++i) {
        for (int j = 0; j < src.dim; ++j) {
            QVec prod_img(tgt.dim, Rat(0));
            for (const auto& [k, c] : src.basis_product(i, j)) {
                for (int t = 0; t < tgt.dim; ++t) prod_img[t] += c * m.a[t][k];
            }
            QVec img_i(tgt.dim, Rat(0)), img_j(tgt.dim, Rat(0));
            for (int t = 0; t < tgt.dim; ++t) {
                img_i[t] = m.a[t][i];
                img_j[t] = m.a[t][j];
            }
            if (tgt.multiply(img_i, img_j) != prod_img)
                return VerificationReport::fail(
                    name, Json{{"reason", "not multiplicative"}, {"pair", Json::array({i, j})}});
        }
    }
    return VerificationReport::pass(name);
}

inline bool is_isomorphism_matrix(const QMat& m) {
    return m.rows == m.cols && rank(m) == m.rows;
}

/// Validates every FiniteGradedAlgebra invariant. Axiom failures come back as
/// a failed report; malformed input throws StructuralError instead.
inline VerificationReport validate_algebra(const FiniteGradedAlgebra& a) {
    const std::string name = "validate_algebra";
    if (static_cast<int>(a.labels.size()) != a.dim ||
        static_cast<int>(a.degrees.size()) != a.dim || static_cast<int>(a.unit.size()) != a.dim)
        throw StructuralError("algebra field sizes inconsistent with dim");
    for (const auto& g : a.degrees)
        if (static_cast<int>(g.size()) != a.group.length())
            throw StructuralError("basis degree of wrong length");

    if (a.dim == 0) return VerificationReport::pass(name, Json{{"dim", 0}});

    const GroupElem one = a.group.identity();
    if (!a.vector_supported_on_degree(a.unit, one))
        return VerificationReport::fail(name, Json{{"axiom", "UnitNotNeutralDegree"}});
    for (int i = 0; i < a.dim; ++i) {
        if (a.multiply_vec_basis(a.unit, i) != a.basis_vec(i))
            return VerificationReport::fail(name,
                                            Json{{"axiom", "UnitViolation"}, {"side", "left"},
                                                 {"basis_index", i}});
        if (a.multiply_basis_vec(i, a.unit) != a.basis_vec(i))
            return VerificationReport::fail(name,
                                            Json{{"axiom", "UnitViolation"}, {"side", "right"},
                                                 {"basis_index", i}});
    }

    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            const GroupElem expect = a.group.mul(a.degrees[i], a.degrees[j]);
            for (const auto& [k, c] : a.basis_product(i, j))
                if (a.degrees[k] != expect)
                    return VerificationReport::fail(
                        name, Json{{"axiom", "GradingViolation"},
                                   {"witness", Json::array({i, j, k})}});
        }

    // (b_i b_j) b_k == b_i (b_j b_k), first violating triple in lex order.
    std::vector<Rat> acc(a.dim, Rat(0));
    std::vector<int> touched;
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            const auto& ij = a.basis_product(i, j);
            for (int k = 0; k < a.dim; ++k) {
                for (const auto& [p, c] : ij)
                    for (const auto& [q, c2] : a.basis_product(p, k)) {
                        if (is_zero(acc[q])) touched.push_back(q);
                        acc[q] += c * c2;
                    }
                for (const auto& [p, c] : a.basis_product(j, k))
                    for (const auto& [q, c2] : a.basis_product(i, p)) {
                        if (is_zero(acc[q])) touched.push_back(q);
                        acc[q] -= c * c2;
                    }
                bool bad = false;
                for (int q : touched) {
                    if (!is_zero(acc[q])) bad = true;
                    acc[q] = 0;
                }
                touched.clear();
                if (bad)
                    return VerificationReport::fail(
                        name, Json{{"axiom", "AssociativityViolation"},
                                   {"witness", Json::array({i, j, k})}});
            }
        }

    Json dims = Json::object();
    for (const auto& [g, d] : a.component_dims()) dims[degree_to_string(g)] = d;
    return VerificationReport::pass(name, Json{{"dim", a.dim}, {"component_dims", dims}});
}

}  // namespace pivar
