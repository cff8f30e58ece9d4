#pragma once

#include "pivar/structure.hpp"

#include <string>
#include <vector>

namespace pivar {

/// Descending chain of two-sided ideals F^1 >= F^2 >= ... below A = F^0,
/// with the termination mode (hit zero, or went stationary at a nonzero
/// ideal, or was cut off by a depth limit).
struct FiltrationChain {
    std::string label;
    std::vector<std::vector<QVec>> levels;  // levels[i] = basis of F^{i+1}; zero levels omitted
    bool reached_zero = false;
    bool stabilized = false;
};

namespace detail {

inline std::vector<QVec> complement_basis(int dim, const std::vector<QVec>& outer,
                                          const std::vector<QVec>& inner) {
    EchelonSpan span(dim);
    for (const auto& v : inner) span.insert(v);
    std::vector<QVec> comp;
    for (const auto& v : outer)
        if (span.insert(v)) comp.push_back(v);
    return comp;
}

}  // namespace detail

/// Associated graded algebra Gr = sum_i F^i/F^{i+1} of a multiplicative
/// ideal chain, Z-graded by filtration level. For a chain that went
/// stationary, the quotients vanish from the stable level on and products
/// landing there are zero classes.
struct AssociatedGraded {
    FiniteGradedAlgebra algebra;
    std::vector<QVec> representatives;  // in A-coordinates, level blocks
    std::vector<int> level_of_basis;
};

inline AssociatedGraded associated_graded(const FiniteGradedAlgebra& a,
                                          const FiltrationChain& chain) {
    std::vector<std::vector<QVec>> filt;
    {
        std::vector<QVec> full;
        for (int i = 0; i < a.dim; ++i) full.push_back(a.basis_vec(i));
        filt.push_back(std::move(full));
    }
    for (const auto& l : chain.levels) filt.push_back(l);
    // stable_level: products at or beyond it are zero classes
    const int stable_level = static_cast<int>(filt.size()) - (chain.stabilized ? 1 : 0);
    if (!chain.stabilized) filt.push_back({});

    AssociatedGraded out;
    std::vector<std::pair<int, QVec>> reps;
    for (std::size_t i = 0; i + 1 < filt.size(); ++i)
        for (auto& v : detail::complement_basis(a.dim, filt[i], filt[i + 1]))
            reps.emplace_back(static_cast<int>(i), std::move(v));

    const int m = static_cast<int>(reps.size());
    out.algebra = FiniteGradedAlgebra(GradingGroup::z(), m);
    for (int i = 0; i < m; ++i) {
        out.representatives.push_back(reps[i].second);
        out.level_of_basis.push_back(reps[i].first);
        out.algebra.set_degree(i, GroupElem{reps[i].first});
        out.algebra.labels[i] = "gr" + std::to_string(reps[i].first) + "." + std::to_string(i);
    }

    EchelonSpan stable_span(a.dim);
    if (chain.stabilized)
        for (const auto& v : filt.back()) stable_span.insert(v);

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int lvl = reps[i].first + reps[j].first;
            QVec prod = a.multiply(reps[i].second, reps[j].second);
            if (lvl >= stable_level) {
                // zero class: F^{lvl}/F^{lvl+1} vanishes beyond the chain;
                // exactness still pins the product to the tail ideal
                const bool in_tail = chain.stabilized ? stable_span.contains(prod)
                                                      : is_zero_vec(prod);
                if (!in_tail)
                    throw StructuralError("filtration is not multiplicative");
                continue;
            }
            std::vector<QVec> basis;
            std::vector<int> which;
            for (int k = 0; k < m; ++k)
                if (reps[k].first == lvl) {
                    basis.push_back(reps[k].second);
                    which.push_back(k);
                }
            const std::size_t ncomp = basis.size();
            for (const auto& v : filt[lvl + 1]) basis.push_back(v);
            auto coords = coordinates_in_basis(basis, prod);
            if (!coords)
                throw StructuralError("filtration is not multiplicative: product escapes its level");
            for (std::size_t k = 0; k < ncomp; ++k)
                if (!is_zero((*coords)[k]))
                    out.algebra.add_structure_constant(i, j, which[k], (*coords)[k]);
        }
    {
        std::vector<QVec> basis;
        std::vector<int> which;
        for (int k = 0; k < m; ++k)
            if (reps[k].first == 0) {
                basis.push_back(reps[k].second);
                which.push_back(k);
            }
        const std::size_t ncomp = basis.size();
        for (const auto& v : filt[1]) basis.push_back(v);
        auto coords = coordinates_in_basis(basis, a.unit);
        if (!coords) throw StructuralError("unit escapes level zero");
        out.algebra.unit = QVec(m, Rat(0));
        for (std::size_t k = 0; k < ncomp; ++k) out.algebra.unit[which[k]] = (*coords)[k];
    }
    return out;
}

/// J = two-sided ideal generated by the odd component; powers until zero or
/// stabilization. Gr(A) = sum J^i/J^{i+1}, Z-graded by level.
struct OddIdealFiltration {
    FiltrationChain chain;
    AssociatedGraded gr;
};

inline OddIdealFiltration odd_ideal_filtration(const FiniteGradedAlgebra& a) {
    if (!(a.group == GradingGroup::z2()))
        throw StructuralError("odd ideal filtration needs a Z_2-graded algebra");
    OddIdealFiltration out;
    out.chain.label = "odd-ideal";
    std::vector<QVec> odd;
    for (int i = 0; i < a.dim; ++i)
        if (a.degrees[i] == GroupElem{1}) odd.push_back(a.basis_vec(i));
    std::vector<QVec> j = ideal_closure(a, odd);
    while (!j.empty()) {
        out.chain.levels.push_back(j);
        std::vector<QVec> next = subspace_product(a, j, out.chain.levels.front());
        if (next.size() == j.size()) {  // J^{k+1} <= J^k, so equal dims = equal
            out.chain.stabilized = true;
            break;
        }
        j = std::move(next);
    }
    out.chain.reached_zero = !out.chain.stabilized;
    out.gr = associated_graded(a, out.chain);
    return out;
}

/// Commutator filtration: F^{-1} = ideal generated by [A, A], and
/// F^{-k} = sum_{i+j=k} F^{-i} F^{-j} (the multiplicative powers of the
/// commutator ideal). A^{ab} = A / F^{-1}. The nilcommutative order is the
/// smallest l with F^{-(l+1)} = 0, when reached within the depth limit.
struct CommutatorFiltration {
    FiltrationChain chain;  // levels[k-1] = F^{-k}, including the first zero level
    QuotientAlgebra abelianization;
    bool unit_collapsed = false;
    int order = -1;  // -1: chain not exhausted within the depth limit
};

inline CommutatorFiltration commutator_filtration(const FiniteGradedAlgebra& a, int depth) {
    if (depth < 1) throw StructuralError("commutator filtration depth must be >= 1");
    CommutatorFiltration out;
    out.chain.label = "commutator";
    std::vector<QVec> f1 = ideal_closure(a, commutator_span(a));
    std::vector<QVec> cur = f1;
    for (int k = 1; k <= depth; ++k) {
        out.chain.levels.push_back(cur);
        if (cur.empty()) {
            out.chain.reached_zero = true;
            out.order = k - 1;
            break;
        }
        std::vector<QVec> next = subspace_product(a, cur, f1);
        if (next.size() == cur.size()) {
            out.chain.stabilized = true;
            break;
        }
        cur = std::move(next);
    }
    out.abelianization = quotient_by_ideal(a, f1);
    out.unit_collapsed = out.abelianization.algebra.dim == 0 ||
                         is_zero_vec(out.abelianization.algebra.unit);
    return out;
}

}  // namespace pivar
