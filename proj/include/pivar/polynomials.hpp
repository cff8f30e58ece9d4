#pragma once

#include "pivar/algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace pivar {

struct DegreeMismatchError : StructuralError {
    using StructuralError::StructuralError;
};

/// A variable x_i^g of the free graded algebra; (index, degree) pairs
/// identify variables uniquely.
struct GradedVariable {
    int index = 0;
    GroupElem degree;

    auto operator<=>(const GradedVariable&) const = default;
};

using Word = std::vector<GradedVariable>;  // empty word = the unit

/// Element of the free G-graded algebra: rational combination of words in
/// degree-labeled variables. Zero coefficients are never stored.
struct GradedPolynomial {
    std::map<Word, Rat> terms;

    static GradedPolynomial zero() { return {}; }
    static GradedPolynomial one() {
        GradedPolynomial p;
        p.terms[Word{}] = 1;
        return p;
    }
    static GradedPolynomial variable(int index, GroupElem degree = {}) {
        GradedPolynomial p;
        p.terms[Word{GradedVariable{index, std::move(degree)}}] = 1;
        return p;
    }
    static GradedPolynomial monomial(Word w, Rat c = Rat(1)) {
        GradedPolynomial p;
        if (!is_zero(c)) p.terms[std::move(w)] = std::move(c);
        return p;
    }

    bool is_zero_poly() const { return terms.empty(); }

    void add_term(const Word& w, const Rat& c) {
        if (is_zero(c)) return;
        auto [it, fresh] = terms.try_emplace(w, Rat(0));
        it->second += c;
        if (is_zero(it->second)) terms.erase(it);
    }

    GradedPolynomial operator+(const GradedPolynomial& o) const {
        GradedPolynomial out = *this;
        for (const auto& [w, c] : o.terms) out.add_term(w, c);
        return out;
    }
    GradedPolynomial operator-(const GradedPolynomial& o) const {
        GradedPolynomial out = *this;
        for (const auto& [w, c] : o.terms) out.add_term(w, -c);
        return out;
    }
    GradedPolynomial operator*(const GradedPolynomial& o) const {
        GradedPolynomial out;
        for (const auto& [w1, c1] : terms)
            for (const auto& [w2, c2] : o.terms) {
                Word w = w1;
                w.insert(w.end(), w2.begin(), w2.end());
                out.add_term(w, c1 * c2);
            }
        return out;
    }
    GradedPolynomial scaled(const Rat& c) const {
        GradedPolynomial out;
        if (is_zero(c)) return out;
        for (const auto& [w, q] : terms) out.terms[w] = q * c;
        return out;
    }
    bool operator==(const GradedPolynomial& o) const { return terms == o.terms; }

    /// Sorted list of the distinct variables occurring.
    std::vector<GradedVariable> variables() const {
        std::vector<GradedVariable> vars;
        for (const auto& [w, c] : terms)
            for (const auto& v : w) vars.push_back(v);
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        return vars;
    }

    /// Multilinear of degree n: every word is a permutation of the same n
    /// distinct variables.
    bool is_multilinear() const {
        if (terms.empty()) return true;
        std::vector<GradedVariable> vars = variables();
        for (const auto& [w, c] : terms) {
            if (w.size() != vars.size()) return false;
            Word sorted = w;
            std::sort(sorted.begin(), sorted.end());
            if (std::unique(sorted.begin(), sorted.end()) != sorted.end()) return false;
            if (!std::equal(sorted.begin(), sorted.end(), vars.begin())) return false;
        }
        return true;
    }
};

inline GradedPolynomial commutator(const GradedPolynomial& f, const GradedPolynomial& g) {
    return f * g - g * f;
}

/// Standard polynomial s_n = sum_sigma sgn(sigma) x_{sigma(1)} ... x_{sigma(n)}.
inline GradedPolynomial standard_polynomial(int n, GroupElem degree = {}) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    GradedPolynomial out;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Word w;
        for (int i = 0; i < n; ++i) w.push_back(GradedVariable{perm[i] + 1, degree});
        out.add_term(w, inversions % 2 == 0 ? Rat(1) : Rat(-1));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += "*";
        s += "x" + std::to_string(w[i].index);
        if (!w[i].degree.empty()) {
            s += "@";
            for (std::size_t j = 0; j < w[i].degree.size(); ++j) {
                if (j) s += ",";
                s += std::to_string(w[i].degree[j]);
            }
        }
    }
    return s;
}

inline std::string poly_to_string(const GradedPolynomial& f) {
    if (f.terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : f.terms) {
        s += first ? "" : " + ";
        s += rat_to_string(c) + " " + word_to_string(w);
        first = false;
    }
    return s;
}

/// Splits into multihomogeneous components (fixed occurrence count per
/// variable). Over an infinite field, f is a graded identity iff every
/// component is.
inline std::vector<GradedPolynomial> multihomogeneous_components(const GradedPolynomial& f) {
    std::map<std::map<GradedVariable, int>, GradedPolynomial> comps;
    for (const auto& [w, c] : f.terms) {
        std::map<GradedVariable, int> deg;
        for (const auto& v : w) deg[v]++;
        comps[deg].add_term(w, c);
    }
    std::vector<GradedPolynomial> out;
    for (auto& [deg, p] : comps) out.push_back(std::move(p));
    return out;
}

/// Full polarization: one multilinear polynomial per multihomogeneous
/// component, whose simultaneous vanishing on an algebra is equivalent to
/// f being a graded identity (characteristic 0). A variable of multidegree
/// m is split into itself plus m-1 fresh variables of the same degree, and
/// the occurrences are summed over all assignments of the copies.
inline std::vector<GradedPolynomial> multilinearize(const GradedPolynomial& f) {
    std::vector<GradedPolynomial> out;
    for (const GradedPolynomial& comp : multihomogeneous_components(f)) {
        if (comp.is_zero_poly()) continue;
        int next_fresh = 0;
        for (const auto& v : comp.variables()) next_fresh = std::max(next_fresh, v.index);
        ++next_fresh;

        GradedPolynomial cur = comp;
        // repeatedly polarize the first variable that still repeats
        while (true) {
            const auto& [w0, c0] = *cur.terms.begin();
            std::map<GradedVariable, int> mult;
            for (const auto& v : w0) mult[v]++;
            const GradedVariable* repeat = nullptr;
            for (const auto& [v, m] : mult)
                if (m >= 2) { repeat = &v; break; }
            if (!repeat) break;

            const GradedVariable rep = *repeat;
            const int m = mult[rep];
            std::vector<GradedVariable> copies{rep};
            for (int i = 1; i < m; ++i) copies.push_back(GradedVariable{next_fresh++, rep.degree});

            GradedPolynomial next;
            std::vector<int> assign(m);
            for (int i = 0; i < m; ++i) assign[i] = i;
            for (const auto& [w, c] : cur.terms) {
                std::vector<std::size_t> positions;
                for (std::size_t p = 0; p < w.size(); ++p)
                    if (w[p] == rep) positions.push_back(p);
                std::vector<int> a = assign;
                do {
                    Word nw = w;
                    for (std::size_t p = 0; p < positions.size(); ++p)
                        nw[positions[p]] = copies[a[p]];
                    next.add_term(nw, c);
                } while (std::next_permutation(a.begin(), a.end()));
            }
            cur = std::move(next);
        }
        out.push_back(std::move(cur));
    }
    return out;
}

using Assignment = std::map<GradedVariable, QVec>;

/// Exact evaluation by word-by-word structure-constant contraction. Every
/// assigned vector must be homogeneous of its variable's degree.
inline QVec evaluate(const GradedPolynomial& f, const FiniteGradedAlgebra& a,
                     const Assignment& assignment) {
    for (const auto& [v, coords] : assignment) {
        if (static_cast<int>(coords.size()) != a.dim)
            throw StructuralError("assignment vector of wrong dimension");
        if (static_cast<int>(v.degree.size()) != a.group.length())
            throw DegreeMismatchError("variable x" + std::to_string(v.index) +
                                      " has a degree from a different grading group");
        GroupElem g = a.group.normalize(v.degree);
        if (!a.vector_supported_on_degree(coords, g))
            throw DegreeMismatchError("assignment for x" + std::to_string(v.index) +
                                      " is not homogeneous of degree " + degree_to_string(g));
    }
    QVec out(a.dim, Rat(0));
    for (const auto& [w, c] : f.terms) {
        QVec val = a.unit;
        for (const auto& v : w) {
            auto it = assignment.find(v);
            if (it == assignment.end())
                throw StructuralError("missing assignment for variable x" +
                                      std::to_string(v.index));
            val = a.multiply(val, it->second);
        }
        add_scaled(out, val, c);
    }
    return out;
}

}  // namespace pivar
