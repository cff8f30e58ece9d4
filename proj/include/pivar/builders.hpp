#pragma once

#include "pivar/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pivar {

struct GradingError : StructuralError {
    using StructuralError::StructuralError;
};

/// The base field Q as a trivially graded one-dimensional algebra.
inline FiniteGradedAlgebra build_base_field() {
    FiniteGradedAlgebra a(GradingGroup::trivial(), 1);
    a.labels[0] = "1";
    a.add_structure_constant(0, 0, 0, Rat(1));
    a.unit[0] = 1;
    return a;
}

/// Full matrix algebra M_n with matrix-unit basis e_{ij} (row-major order).
/// A degree assignment, when given, must already satisfy grading
/// compatibility (an elementary grading); otherwise GradingError.
inline FiniteGradedAlgebra build_matrix_algebra(
    int n, const GradingGroup& group = GradingGroup::trivial(),
    const std::optional<std::vector<GroupElem>>& degree_assignment = std::nullopt) {
    if (n < 1) throw StructuralError("matrix algebra needs n >= 1");
    FiniteGradedAlgebra a(group, n * n);
    auto idx = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a.labels[idx(i, j)] = "e" + std::to_string(i + 1) + std::to_string(j + 1);
            for (int k = 0; k < n; ++k)
                a.add_structure_constant(idx(i, j), idx(j, k), idx(i, k), Rat(1));
        }
    for (int i = 0; i < n; ++i) a.unit[idx(i, i)] = 1;
    if (degree_assignment) {
        if (static_cast<int>(degree_assignment->size()) != n * n)
            throw StructuralError("degree assignment size mismatch");
        for (int i = 0; i < n * n; ++i) a.set_degree(i, (*degree_assignment)[i]);
        auto rep = validate_algebra(a);
        if (!rep.passed()) throw GradingError("incompatible matrix degree assignment");
    }
    return a;
}

/// Upper triangular matrices UT_l, trivially graded, basis e_{ij} for i <= j.
inline FiniteGradedAlgebra build_upper_triangular(int l) {
    if (l < 1) throw StructuralError("upper triangular algebra needs l >= 1");
    std::vector<std::pair<int, int>> basis;
    for (int i = 0; i < l; ++i)
        for (int j = i; j < l; ++j) basis.emplace_back(i, j);
    FiniteGradedAlgebra a(GradingGroup::trivial(), static_cast<int>(basis.size()));
    auto find = [&](int i, int j) {
        for (std::size_t t = 0; t < basis.size(); ++t)
            if (basis[t] == std::make_pair(i, j)) return static_cast<int>(t);
        return -1;
    };
    for (std::size_t s = 0; s < basis.size(); ++s) {
        auto [i, j] = basis[s];
        a.labels[s] = "e" + std::to_string(i + 1) + std::to_string(j + 1);
        for (std::size_t t = 0; t < basis.size(); ++t) {
            auto [k, m] = basis[t];
            if (j == k) a.add_structure_constant(static_cast<int>(s), static_cast<int>(t),
                                                 find(i, m), Rat(1));
        }
        if (i == j) a.unit[s] = 1;
    }
    return a;
}

namespace detail {

/// Normalizes a concatenated generator word of a Clifford-type algebra with
/// v_i v_j = -v_j v_i (i != j) and v_i^2 = squares[i]. Returns the sorted
/// basis mask and the accumulated coefficient (0 kills the term).
inline std::pair<unsigned, Rat> clifford_normalize(const std::vector<Rat>& squares,
                                                   std::vector<int> word) {
    Rat coeff(1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < word.size(); ++i) {
            if (word[i] > word[i + 1]) {
                std::swap(word[i], word[i + 1]);
                coeff = -coeff;
                changed = true;
            } else if (word[i] == word[i + 1]) {
                coeff *= squares[word[i]];
                word.erase(word.begin() + i, word.begin() + i + 2);
                changed = true;
                if (is_zero(coeff)) return {0u, Rat(0)};
                break;
            }
        }
    }
    unsigned mask = 0;
    for (int g : word) mask |= 1u << g;
    return {mask, coeff};
}

inline std::string subset_label(unsigned mask, const char* gen) {
    if (mask == 0) return "1";
    std::string s;
    for (int i = 0; i < 32; ++i)
        if (mask & (1u << i)) s += std::string(gen) + std::to_string(i + 1);
    return s;
}

inline std::vector<int> mask_word(unsigned mask) {
    std::vector<int> w;
    for (int i = 0; i < 32; ++i)
        if (mask & (1u << i)) w.push_back(i);
    return w;
}

inline FiniteGradedAlgebra build_generator_algebra(const std::vector<Rat>& squares,
                                                   const char* gen) {
    const int k = static_cast<int>(squares.size());
    if (k > 16) throw BudgetError("too many anticommuting generators");
    const int n = 1 << k;
    FiniteGradedAlgebra a(GradingGroup::z2(), n);
    for (unsigned s = 0; s < static_cast<unsigned>(n); ++s) {
        a.labels[s] = subset_label(s, gen);
        a.set_degree(s, GroupElem{__builtin_popcount(s) % 2});
        for (unsigned t = 0; t < static_cast<unsigned>(n); ++t) {
            std::vector<int> word = mask_word(s);
            for (int g : mask_word(t)) word.push_back(g);
            auto [mask, coeff] = clifford_normalize(squares, std::move(word));
            if (!is_zero(coeff)) a.add_structure_constant(s, t, static_cast<int>(mask), coeff);
        }
    }
    a.unit[0] = 1;
    return a;
}

}  // namespace detail

/// Truncated Grassmann algebra E_k: anticommuting generators e_i with
/// e_i^2 = 0, subset-monomial basis, canonical Z_2-grading by word parity.
inline FiniteGradedAlgebra build_grassmann_truncated(int k) {
    if (k < 0) throw StructuralError("grassmann truncation needs k >= 0");
    return detail::build_generator_algebra(std::vector<Rat>(k, Rat(0)), "e");
}

/// Clifford algebra on generators v_i with v_i^2 = q_i, v_i v_j = -v_j v_i,
/// Z_2-graded by word parity. All q_i must be nonzero.
inline FiniteGradedAlgebra build_clifford(const std::vector<Rat>& q) {
    for (const auto& qi : q)
        if (is_zero(qi)) throw StructuralError("degenerate quadratic form coefficient");
    return detail::build_generator_algebra(q, "v");
}

/// F[t]/(t^k), trivially graded, basis 1, t, ..., t^{k-1}.
inline FiniteGradedAlgebra build_truncated_polynomial(int k) {
    if (k < 1) throw StructuralError("truncated polynomial algebra needs k >= 1");
    FiniteGradedAlgebra a(GradingGroup::trivial(), k);
    for (int i = 0; i < k; ++i) {
        a.labels[i] = i == 0 ? "1" : "t^" + std::to_string(i);
        for (int j = 0; j < k; ++j)
            if (i + j < k) a.add_structure_constant(i, j, i + j, Rat(1));
    }
    a.unit[0] = 1;
    return a;
}

/// Pointwise-function algebra on a finite set: orthogonal idempotents d_x.
inline FiniteGradedAlgebra build_function_algebra(const std::vector<std::string>& point_names) {
    const int m = static_cast<int>(point_names.size());
    FiniteGradedAlgebra a(GradingGroup::trivial(), m);
    for (int i = 0; i < m; ++i) {
        a.labels[i] = "d[" + point_names[i] + "]";
        a.add_structure_constant(i, i, i, Rat(1));
        a.unit[i] = 1;
    }
    return a;
}

inline bool is_commutative(const FiniteGradedAlgebra& a) {
    for (int i = 0; i < a.dim; ++i)
        for (int j = i + 1; j < a.dim; ++j)
            if (a.basis_product(i, j) != a.basis_product(j, i)) return false;
    return true;
}

inline bool is_trivially_graded(const FiniteGradedAlgebra& a) {
    const GroupElem one = a.group.identity();
    for (const auto& g : a.degrees)
        if (g != one) return false;
    return true;
}

/// A tensor C with C commutative, trivially graded, unital; the grading is
/// carried entirely by the A factor. Basis order: a_i x c_u at i*dimC + u.
inline FiniteGradedAlgebra tensor_with_commutative(const FiniteGradedAlgebra& A,
                                                   const FiniteGradedAlgebra& C) {
    if (!is_commutative(C)) throw StructuralError("tensor factor must be commutative");
    if (!is_trivially_graded(C)) throw StructuralError("tensor factor must be trivially graded");
    FiniteGradedAlgebra out(A.group, A.dim * C.dim);
    auto idx = [&](int i, int u) { return i * C.dim + u; };
    for (int i = 0; i < A.dim; ++i)
        for (int u = 0; u < C.dim; ++u) {
            out.labels[idx(i, u)] = A.labels[i] + "(x)" + C.labels[u];
            out.set_degree(idx(i, u), A.degrees[i]);
        }
    for (int i = 0; i < A.dim; ++i)
        for (int j = 0; j < A.dim; ++j) {
            const auto& pa = A.basis_product(i, j);
            if (pa.empty()) continue;
            for (int u = 0; u < C.dim; ++u)
                for (int v = 0; v < C.dim; ++v)
                    for (const auto& [w, cw] : C.basis_product(u, v))
                        for (const auto& [k, ck] : pa)
                            out.add_structure_constant(idx(i, u), idx(j, v), idx(k, w), ck * cw);
        }
    for (int i = 0; i < A.dim; ++i)
        for (int u = 0; u < C.dim; ++u) out.unit[idx(i, u)] = A.unit[i] * C.unit[u];
    return out;
}

/// Componentwise direct product of algebras over one grading group. When
/// `regrade` is present it supplies new degrees (one list per factor) into
/// `common_group`; the assignment must stay grading compatible.
inline FiniteGradedAlgebra direct_product(
    const std::vector<const FiniteGradedAlgebra*>& factors,
    const std::optional<GradingGroup>& common_group = std::nullopt,
    const std::optional<std::vector<std::vector<GroupElem>>>& regrade = std::nullopt) {
    if (factors.empty()) throw StructuralError("direct product of zero factors");
    GradingGroup group = common_group ? *common_group : factors.front()->group;
    if (!regrade)
        for (const auto* f : factors)
            if (!(f->group == group)) throw StructuralError("direct product group mismatch");
    int total = 0;
    for (const auto* f : factors) total += f->dim;
    FiniteGradedAlgebra out(group, total);
    int off = 0;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        const auto& f = *factors[fi];
        for (int i = 0; i < f.dim; ++i) {
            out.labels[off + i] = "f" + std::to_string(fi + 1) + ":" + f.labels[i];
            out.set_degree(off + i, regrade ? (*regrade)[fi][i] : f.degrees[i]);
            out.unit[off + i] = f.unit[i];
            for (int j = 0; j < f.dim; ++j)
                for (const auto& [k, c] : f.basis_product(i, j))
                    out.add_structure_constant(off + i, off + j, off + k, c);
        }
        off += f.dim;
    }
    if (regrade) {
        auto rep = validate_algebra(out);
        if (!rep.passed()) throw GradingError("incompatible regrade for direct product");
    }
    return out;
}

/// Canonical homogeneous basis of a graded subspace: per-degree reduced
/// echelon bases concatenated in degree order. All spanning vectors must be
/// homogeneous for this to be exact.
inline std::vector<QVec> graded_subspace_basis(const FiniteGradedAlgebra& a,
                                               const std::vector<QVec>& spanning) {
    std::map<GroupElem, EchelonSpan> per_degree;
    for (const QVec& v : spanning) {
        auto comps = homogeneous_components(a, v);
        for (auto& h : comps) {
            auto [it, fresh] = per_degree.try_emplace(h.degree, a.dim);
            it->second.insert(h.coords);
        }
    }
    std::vector<QVec> basis;
    for (auto& [g, span] : per_degree)
        for (auto& row : span.rref_basis()) basis.push_back(std::move(row));
    auto leading = [](const QVec& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!is_zero(v[i])) return i;
        return v.size();
    };
    std::sort(basis.begin(), basis.end(),
              [&](const QVec& x, const QVec& y) { return leading(x) < leading(y); });
    return basis;
}

/// Corner algebra eAe for a homogeneous idempotent e of neutral degree,
/// with unit e and the inherited grading.
inline FiniteGradedAlgebra corner_algebra(const FiniteGradedAlgebra& A,
                                          const HomogeneousElement& e) {
    if (e.algebra != &A) throw StructuralError("idempotent from a different algebra");
    if (e.degree != A.group.identity())
        throw StructuralError("corner idempotent must have neutral degree");
    if (A.multiply(e.coords, e.coords) != e.coords)
        throw StructuralError("corner element is not idempotent");

    std::vector<QVec> spanning;
    for (int i = 0; i < A.dim; ++i)
        spanning.push_back(A.multiply(A.multiply(e.coords, A.basis_vec(i)), e.coords));
    std::vector<QVec> basis = graded_subspace_basis(A, spanning);

    const int m = static_cast<int>(basis.size());
    FiniteGradedAlgebra out(A.group, m);
    for (int i = 0; i < m; ++i) {
        out.labels[i] = "c" + std::to_string(i);
        for (int t = 0; t < A.dim; ++t)
            if (!is_zero(basis[i][t])) {
                out.set_degree(i, A.degrees[t]);
                break;
            }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            QVec prod = A.multiply(basis[i], basis[j]);
            auto coords = coordinates_in_basis(basis, prod);
            if (!coords) throw StructuralError("corner subspace not closed under product");
            for (int k = 0; k < m; ++k)
                if (!is_zero((*coords)[k])) out.add_structure_constant(i, j, k, (*coords)[k]);
        }
    auto unit_coords = coordinates_in_basis(basis, e.coords);
    if (!unit_coords) throw StructuralError("corner idempotent outside its own corner");
    out.unit = *unit_coords;
    return out;
}

/// Returns the corner's defining basis inside A (same order as the corner's
/// own basis); useful for building the inclusion morphism.
inline std::vector<QVec> corner_basis_in_ambient(const FiniteGradedAlgebra& A,
                                                 const HomogeneousElement& e) {
    std::vector<QVec> spanning;
    for (int i = 0; i < A.dim; ++i)
        spanning.push_back(A.multiply(A.multiply(e.coords, A.basis_vec(i)), e.coords));
    return graded_subspace_basis(A, spanning);
}

/// M_n(B) with the grading induced by B: deg(e_{ij} x b) = deg(b).
/// Basis order: (i, j, t) at (i*n + j)*dimB + t.
inline FiniteGradedAlgebra matrix_over(const FiniteGradedAlgebra& B, int n) {
    if (n < 1) throw StructuralError("matrix_over needs n >= 1");
    FiniteGradedAlgebra out(B.group, n * n * B.dim);
    auto idx = [&](int i, int j, int t) { return (i * n + j) * B.dim + t; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int t = 0; t < B.dim; ++t) {
                out.labels[idx(i, j, t)] =
                    "E" + std::to_string(i + 1) + std::to_string(j + 1) + "*" + B.labels[t];
                out.set_degree(idx(i, j, t), B.degrees[t]);
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                for (int t = 0; t < B.dim; ++t)
                    for (int u = 0; u < B.dim; ++u)
                        for (const auto& [k, c] : B.basis_product(t, u))
                            out.add_structure_constant(idx(i, j, t), idx(j, l, u), idx(i, l, k), c);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < B.dim; ++t) out.unit[idx(i, i, t)] = B.unit[t];
    return out;
}

}  // namespace pivar
