#pragma once

#include "pivar/identities.hpp"

#include <optional>
#include <vector>

namespace pivar {

/// Truncation of the relatively free algebra F<X_V|G> / Id^G(A) at words of
/// length <= d: a canonical basis of surviving words plus a reduction of
/// every word of length <= d into that basis. Multiplication is partial
/// (defined when the concatenation stays within the bound).
struct RelativelyFreeTruncation {
    GradingGroup group;
    std::vector<GradedVariable> variables;
    int degree_bound = 0;
    // canonical order: by word length, then multidegree class, then lex
    std::vector<Word> basis_words;
    std::map<Word, int> basis_lookup;

    struct MultidegreeClass {
        std::vector<Word> words;          // lex order within the class
        std::vector<QVec> pvecs;          // full polarization in the class pattern
        MultilinearPattern pattern;
        std::vector<SparseRow> reduction;  // per word: combo over global basis indices
    };
    std::vector<MultidegreeClass> classes;
    std::map<Word, std::pair<int, int>> word_locator;  // word -> (class, position)

    int dim() const { return static_cast<int>(basis_words.size()); }

    int basis_index(const Word& w) const {
        auto it = basis_lookup.find(w);
        return it == basis_lookup.end() ? -1 : it->second;
    }

    /// Image of an arbitrary word of length <= d in the basis.
    const SparseRow& reduce_word(const Word& w) const {
        auto it = word_locator.find(w);
        if (it == word_locator.end()) throw StructuralError("word outside the truncation arena");
        return classes[it->second.first].reduction[it->second.second];
    }

    /// Product of two basis elements; nullopt when the degree bound is hit.
    std::optional<QVec> multiply(const QVec& x, const QVec& y) const {
        QVec out(dim(), Rat(0));
        for (int i = 0; i < dim(); ++i) {
            if (is_zero(x[i])) continue;
            for (int j = 0; j < dim(); ++j) {
                if (is_zero(y[j])) continue;
                Word w = basis_words[i];
                w.insert(w.end(), basis_words[j].begin(), basis_words[j].end());
                if (static_cast<int>(w.size()) > degree_bound) return std::nullopt;
                for (const auto& [k, c] : reduce_word(w)) out[k] += x[i] * y[j] * c;
            }
        }
        return out;
    }

    GroupElem word_degree(const Word& w) const {
        GroupElem g = group.identity();
        for (const auto& v : w) g = group.mul(g, v.degree);
        return g;
    }
};

namespace detail {

/// Full polarization of a word with repeated variables, as a vector in the
/// pattern whose slots are the occurrence copies (grouped by variable).
inline QVec polarize_word(const Word& w, const std::vector<GradedVariable>& vars,
                          const std::vector<int>& counts, int fact) {
    const int n = static_cast<int>(w.size());
    std::vector<int> offset(vars.size(), 0);
    for (std::size_t i = 1; i < vars.size(); ++i) offset[i] = offset[i - 1] + counts[i - 1];

    // positions of each variable inside w
    std::vector<std::vector<int>> positions(vars.size());
    for (int p = 0; p < n; ++p) {
        const auto it = std::lower_bound(vars.begin(), vars.end(), w[p]);
        positions[it - vars.begin()].push_back(p);
    }

    QVec vec(fact, Rat(0));
    // sum over independent bijections copy -> position per variable
    std::vector<std::vector<int>> assigns(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        assigns[i].resize(counts[i]);
        for (int c = 0; c < counts[i]; ++c) assigns[i][c] = c;
    }
    std::vector<int> slot_of_position(n);
    while (true) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (int c = 0; c < counts[i]; ++c)
                slot_of_position[positions[i][assigns[i][c]]] = offset[i] + c;
        vec[permutation_index(slot_of_position)] += 1;
        // advance the product of permutations
        std::size_t level = 0;
        while (level < vars.size() &&
               !std::next_permutation(assigns[level].begin(), assigns[level].end()))
            ++level;
        if (level == vars.size()) break;
    }
    return vec;
}

}  // namespace detail

/// Builds the truncation by spanning word images under all evaluations: a
/// word survives into the basis iff its polarization is independent of the
/// earlier words modulo the identity kernel of its multidegree class.
inline RelativelyFreeTruncation relatively_free_truncation(
    KernelCache& source, const std::vector<GradedVariable>& variables_in, int degree_bound) {
    RelativelyFreeTruncation out;
    out.group = source_group(source.source());
    out.variables = variables_in;
    std::sort(out.variables.begin(), out.variables.end());
    out.variables.erase(std::unique(out.variables.begin(), out.variables.end()),
                        out.variables.end());
    out.degree_bound = degree_bound;
    for (const auto& v : out.variables)
        if (static_cast<int>(v.degree.size()) != out.group.length())
            throw StructuralError("variable degree incompatible with the source grading group");

    const int k = static_cast<int>(out.variables.size());
    long long word_count = 1, total = 1;
    for (int m = 1; m <= degree_bound; ++m) {
        word_count *= k;
        total += word_count;
        if (total > 2'000'000) throw BudgetError("truncation arena too large");
    }

    // enumerate words by length then lex, grouped by multidegree class
    std::map<std::vector<int>, std::vector<Word>> class_words;  // counts vector -> words
    std::vector<Word> frontier{Word{}};
    class_words[std::vector<int>(k, 0)] = {Word{}};
    for (int m = 1; m <= degree_bound; ++m) {
        std::vector<Word> next;
        for (const Word& w : frontier)
            for (int vi = 0; vi < k; ++vi) {
                Word nw = w;
                nw.push_back(out.variables[vi]);
                next.push_back(nw);
            }
        std::sort(next.begin(), next.end());
        for (const Word& w : next) {
            std::vector<int> counts(k, 0);
            for (const auto& v : w) {
                const auto it = std::lower_bound(out.variables.begin(), out.variables.end(), v);
                counts[it - out.variables.begin()]++;
            }
            class_words[counts].push_back(w);
        }
        frontier = std::move(next);
    }

    // process classes in (length, counts) order so the basis is graded-lex
    std::vector<std::pair<std::vector<int>, std::vector<Word>>> ordered(class_words.begin(),
                                                                        class_words.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        int la = 0, lb = 0;
        for (int x : a.first) la += x;
        for (int x : b.first) lb += x;
        if (la != lb) return la < lb;
        return a.first < b.first;
    });

    for (auto& [counts, words] : ordered) {
        RelativelyFreeTruncation::MultidegreeClass cls;
        cls.words = words;
        int n = 0;
        for (int c : counts) n += c;

        if (n == 0) {
            cls.pvecs = {QVec{}};
            cls.reduction.push_back({{static_cast<int>(out.basis_words.size()), Rat(1)}});
            out.word_locator[Word{}] = {static_cast<int>(out.classes.size()), 0};
            out.basis_lookup[Word{}] = static_cast<int>(out.basis_words.size());
            out.basis_words.push_back(Word{});
            out.classes.push_back(std::move(cls));
            continue;
        }

        cls.pattern.group = out.group;
        for (int vi = 0; vi < k; ++vi)
            for (int c = 0; c < counts[vi]; ++c)
                cls.pattern.degrees.push_back(out.variables[vi].degree);

        const int fact = factorial(n);
        const IdentityKernel& kernel = source.kernel(cls.pattern);
        EchelonSpan kernel_span = kernel.span();

        std::vector<QVec> kept_residues;
        std::vector<int> kept_global;
        for (std::size_t wi = 0; wi < cls.words.size(); ++wi) {
            QVec p = detail::polarize_word(cls.words[wi], out.variables, counts, fact);
            cls.pvecs.push_back(p);
            // residue modulo the identity kernel
            SparseRow sp = to_sparse(p);
            QVec residue = to_dense(reduce_against(kernel_span, std::move(sp)), fact);
            auto combo = coordinates_in_basis(kept_residues, residue);
            if (combo) {
                SparseRow red;
                for (std::size_t j = 0; j < combo->size(); ++j)
                    if (!is_zero((*combo)[j])) red.emplace_back(kept_global[j], (*combo)[j]);
                cls.reduction.push_back(std::move(red));
            } else {
                const int gidx = static_cast<int>(out.basis_words.size());
                kept_residues.push_back(std::move(residue));
                kept_global.push_back(gidx);
                cls.reduction.push_back({{gidx, Rat(1)}});
                out.basis_lookup[cls.words[wi]] = gidx;
                out.basis_words.push_back(cls.words[wi]);
            }
            out.word_locator[cls.words[wi]] = {static_cast<int>(out.classes.size()),
                                               static_cast<int>(wi)};
        }
        out.classes.push_back(std::move(cls));
    }
    return out;
}

/// Relation space of one multidegree class: coefficient vectors over the
/// class words whose combination is an identity of the source.
inline std::vector<QVec> class_relations(const RelativelyFreeTruncation::MultidegreeClass& cls,
                                         KernelCache& source) {
    if (cls.pattern.degrees.empty()) return {};
    EchelonSpan kernel_span = source.kernel(cls.pattern).span();
    const int fact = factorial(cls.pattern.n());
    QMat m(fact, static_cast<int>(cls.words.size()));
    for (std::size_t wi = 0; wi < cls.words.size(); ++wi) {
        QVec residue = to_dense(reduce_against(kernel_span, to_sparse(cls.pvecs[wi])), fact);
        for (int r = 0; r < fact; ++r) m.a[r][wi] = residue[r];
    }
    return nullspace(std::move(m));
}

/// Closes the truncation into an honest algebra when every overflowing
/// product reduces to zero modulo the identities (checked exactly); throws
/// otherwise.
inline FiniteGradedAlgebra truncation_as_algebra(const RelativelyFreeTruncation& t,
                                                 KernelCache& source) {
    FiniteGradedAlgebra a(t.group, t.dim());
    for (int i = 0; i < t.dim(); ++i) {
        a.labels[i] = word_to_string(t.basis_words[i]);
        a.set_degree(i, t.word_degree(t.basis_words[i]));
    }
    const int k = static_cast<int>(t.variables.size());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            Word w = t.basis_words[i];
            w.insert(w.end(), t.basis_words[j].begin(), t.basis_words[j].end());
            if (static_cast<int>(w.size()) <= t.degree_bound) {
                for (const auto& [kk, c] : t.reduce_word(w)) a.add_structure_constant(i, j, kk, c);
            } else {
                // closure requires the overflow product to vanish mod Id
                std::vector<int> counts(k, 0);
                for (const auto& v : w) {
                    const auto it = std::lower_bound(t.variables.begin(), t.variables.end(), v);
                    counts[it - t.variables.begin()]++;
                }
                MultilinearPattern pat;
                pat.group = t.group;
                for (int vi = 0; vi < k; ++vi)
                    for (int c = 0; c < counts[vi]; ++c) pat.degrees.push_back(t.variables[vi].degree);
                QVec p = detail::polarize_word(w, t.variables, counts, factorial(pat.n()));
                if (!source.kernel(pat).span().contains(p))
                    throw StructuralError(
                        "truncation does not close under multiplication at degree " +
                        std::to_string(w.size()));
            }
        }
    a.unit = QVec(t.dim(), Rat(0));
    const int unit_idx = t.basis_index(Word{});
    if (unit_idx < 0) throw StructuralError("truncation lost the empty word");
    a.unit[unit_idx] = 1;
    return a;
}

}  // namespace pivar
