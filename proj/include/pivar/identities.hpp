#pragma once

#include "pivar/polynomials.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <variant>
#include <vector>

namespace pivar {

/// Budget gate for the combinatorial kernels: exceeding it is an error,
/// never a silent truncation or approximation.
struct Budget {
    long long elementary_ops = 100'000'000;  // gate on dim^n * n!
    int max_pattern_degree = 6;
};

/// P_n^G for one degree sequence: the n!-dimensional span of the words
/// x_{s(1)}^{g_{s(1)}} ... x_{s(n)}^{g_{s(n)}} over all orderings s of the
/// variables x_1^{g_1}, ..., x_n^{g_n}.
struct MultilinearPattern {
    GradingGroup group;
    std::vector<GroupElem> degrees;  // degree of variable i+1 in slot i

    int n() const { return static_cast<int>(degrees.size()); }

    bool operator<(const MultilinearPattern& o) const { return degrees < o.degrees; }
    bool operator==(const MultilinearPattern& o) const { return degrees == o.degrees; }
};

/// All permutations of {0..n-1} in lexicographic order; index i of this list
/// is the canonical monomial order used for kernel bases.
inline const std::vector<std::vector<int>>& permutations(int n) {
    static std::map<int, std::vector<std::vector<int>>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::vector<std::vector<int>> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return cache.emplace(n, std::move(all)).first->second;
}

inline int factorial(int n) {
    int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline int permutation_index(const std::vector<int>& p) {
    // Lehmer code; permutations() is in lex order so this is its index.
    int idx = 0;
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (p[j] < p[i]) ++smaller;
        idx = idx * (n - i) + smaller;
    }
    return idx;
}

inline Word pattern_word(const MultilinearPattern& pat, const std::vector<int>& perm) {
    Word w;
    for (int slot : perm) w.push_back(GradedVariable{slot + 1, pat.degrees[slot]});
    return w;
}

inline GradedPolynomial pattern_vector_to_polynomial(const MultilinearPattern& pat,
                                                     const QVec& vec) {
    const auto& perms = permutations(pat.n());
    GradedPolynomial f;
    for (std::size_t i = 0; i < perms.size(); ++i)
        if (!is_zero(vec[i])) f.add_term(pattern_word(pat, perms[i]), vec[i]);
    return f;
}

/// Inverse of pattern_vector_to_polynomial; f must be multilinear with
/// variable degrees matching the pattern slot-by-slot (variables sorted).
inline QVec polynomial_to_pattern_vector(const MultilinearPattern& pat,
                                         const GradedPolynomial& f) {
    const int n = pat.n();
    QVec vec(factorial(n), Rat(0));
    if (f.is_zero_poly()) return vec;
    const std::vector<GradedVariable> vars = f.variables();
    if (static_cast<int>(vars.size()) != n || !f.is_multilinear())
        throw StructuralError("polynomial is not multilinear of the pattern degree");
    for (int i = 0; i < n; ++i)
        if (pat.group.normalize(vars[i].degree) != pat.group.normalize(pat.degrees[i]))
            throw StructuralError("variable degrees do not match the pattern");
    for (const auto& [w, c] : f.terms) {
        std::vector<int> perm;
        for (const auto& v : w) {
            const auto it = std::lower_bound(vars.begin(), vars.end(), v);
            perm.push_back(static_cast<int>(it - vars.begin()));
        }
        vec[permutation_index(perm)] = c;
    }
    return vec;
}

/// Left S_n-action permuting variables (x_i -> x_{tau(i)}) on a pattern
/// vector. Valid within one pattern when tau preserves the degree sequence.
inline QVec act_on_pattern_vector(const std::vector<int>& tau, const QVec& vec, int n) {
    const auto& perms = permutations(n);
    QVec out(vec.size(), Rat(0));
    for (std::size_t i = 0; i < perms.size(); ++i) {
        if (is_zero(vec[i])) continue;
        std::vector<int> composed(n);
        for (int j = 0; j < n; ++j) composed[j] = tau[perms[i][j]];
        out[permutation_index(composed)] = vec[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Iterated multiplication tensor: mu(k; s_1..s_n) = coefficient of b_k in
// b_{s_1} ... b_{s_n}. Built once per degree and shared by every pattern.
// ---------------------------------------------------------------------------

constexpr int kMaxPatternDegree = 8;

struct MulKey {
    std::array<std::uint16_t, kMaxPatternDegree> s{};
    std::uint16_t k = 0;
    std::uint8_t len = 0;

    bool operator==(const MulKey& o) const = default;
};

struct MulKeyHash {
    std::size_t operator()(const MulKey& key) const {
        std::size_t h = 1469598103934665603ULL;
        auto mix = [&h](std::size_t v) {
            h ^= v;
            h *= 1099511628211ULL;
        };
        for (int i = 0; i < key.len; ++i) mix(key.s[i]);
        mix(key.k);
        return h;
    }
};

struct MulTensor {
    int n = 0;
    // sorted by (s, k) for deterministic iteration
    std::vector<std::pair<MulKey, Rat>> entries;
};

inline MulTensor build_mul_tensor(const FiniteGradedAlgebra& a, int n) {
    if (n < 1 || n > kMaxPatternDegree) throw BudgetError("pattern degree out of range");
    std::unordered_map<MulKey, Rat, MulKeyHash> acc;
    for (int i = 0; i < a.dim; ++i) {
        MulKey key;
        key.s[0] = static_cast<std::uint16_t>(i);
        key.k = static_cast<std::uint16_t>(i);
        key.len = 1;
        acc.emplace(key, Rat(1));
    }
    for (int level = 2; level <= n; ++level) {
        std::unordered_map<MulKey, Rat, MulKeyHash> next;
        for (const auto& [key, c] : acc) {
            for (int j = 0; j < a.dim; ++j) {
                for (const auto& [k2, c2] : a.basis_product(key.k, j)) {
                    MulKey nk = key;
                    nk.s[key.len] = static_cast<std::uint16_t>(j);
                    nk.len = static_cast<std::uint8_t>(key.len + 1);
                    nk.k = static_cast<std::uint16_t>(k2);
                    auto [it, fresh] = next.try_emplace(nk, Rat(0));
                    it->second += c * c2;
                    if (is_zero(it->second)) next.erase(it);
                }
            }
        }
        acc = std::move(next);
    }
    MulTensor t;
    t.n = n;
    t.entries.assign(acc.begin(), acc.end());
    std::sort(t.entries.begin(), t.entries.end(),
              [](const auto& x, const auto& y) {
                  for (int i = 0; i < x.first.len; ++i)
                      if (x.first.s[i] != y.first.s[i]) return x.first.s[i] < y.first.s[i];
                  return x.first.k < y.first.k;
              });
    return t;
}

/// Kernel of the evaluation map P_n^G -> (functions on admissible basis
/// tuples), with the canonical RREF basis over the lexicographic word order.
struct IdentityKernel {
    MultilinearPattern pattern;
    std::vector<QVec> kernel_basis;  // canonical RREF, width n!
    int codimension = 0;

    EchelonSpan span() const {
        EchelonSpan s(factorial(pattern.n()));
        for (const auto& v : kernel_basis) s.insert(v);
        return s;
    }
    std::vector<GradedPolynomial> polynomials() const {
        std::vector<GradedPolynomial> out;
        for (const auto& v : kernel_basis) out.push_back(pattern_vector_to_polynomial(pattern, v));
        return out;
    }
};

namespace detail {

inline IdentityKernel kernel_from_rowspace(const MultilinearPattern& pat,
                                           const EchelonSpan& rows) {
    const int fact = factorial(pat.n());
    QMat rowmat(rows.rank(), fact);
    auto basis = rows.rref_basis();
    for (std::size_t i = 0; i < basis.size(); ++i) rowmat.a[i] = basis[i];
    IdentityKernel out;
    out.pattern = pat;
    out.kernel_basis = nullspace(std::move(rowmat));
    out.codimension = rows.rank();
    return out;
}

}  // namespace detail

/// identity_kernel for a finite-dimensional algebra. The evaluation rows are
/// assembled from the iterated multiplication tensor, grouped by unordered
/// substitution tuple; the resulting kernel is canonical (independent of any
/// processing order) by the reduced-echelon tie-break.
inline IdentityKernel identity_kernel(const FiniteGradedAlgebra& a, const MultilinearPattern& pat,
                                      const Budget& budget = {}, const MulTensor* cached = nullptr) {
    const int n = pat.n();
    if (n < 1) throw StructuralError("pattern degree must be >= 1");
    if (n > budget.max_pattern_degree)
        throw BudgetError("pattern degree " + std::to_string(n) + " exceeds the budget cap " +
                          std::to_string(budget.max_pattern_degree));
    if (!(a.group == pat.group)) throw StructuralError("pattern grading group mismatch");
    long long cost = factorial(n);
    for (int i = 0; i < n; ++i) {
        cost *= std::max(1, a.dim);
        if (cost > budget.elementary_ops)
            throw BudgetError("identity kernel estimate dim^n * n! exceeds budget " +
                              std::to_string(budget.elementary_ops));
    }

    std::vector<GroupElem> slot_deg(n);
    for (int i = 0; i < n; ++i) slot_deg[i] = a.group.normalize(pat.degrees[i]);

    const int fact = factorial(n);
    const auto& perms = permutations(n);
    EchelonSpan rows(fact);
    if (a.dim == 0) return detail::kernel_from_rowspace(pat, rows);

    MulTensor local;
    if (!cached) local = build_mul_tensor(a, n);
    const MulTensor& mu = cached ? *cached : local;

    // multiset of slot degrees, for the fast admissibility pre-filter
    std::vector<GroupElem> pat_deg_sorted = slot_deg;
    std::sort(pat_deg_sorted.begin(), pat_deg_sorted.end());

    // group tensor entries by (k, multiset(s))
    struct GroupKey {
        std::array<std::uint16_t, kMaxPatternDegree> sorted_s{};
        std::uint16_t k = 0;
        bool operator<(const GroupKey& o) const {
            if (sorted_s != o.sorted_s) return sorted_s < o.sorted_s;
            return k < o.k;
        }
        bool operator==(const GroupKey& o) const = default;
    };
    std::vector<std::pair<GroupKey, std::size_t>> order(mu.entries.size());
    for (std::size_t i = 0; i < mu.entries.size(); ++i) {
        GroupKey g;
        g.sorted_s = mu.entries[i].first.s;
        std::sort(g.sorted_s.begin(), g.sorted_s.begin() + n);
        g.k = mu.entries[i].first.k;
        order[i] = {g, i};
    }
    std::sort(order.begin(), order.end());

    std::set<QVec> seen;
    std::vector<int> tuple(n);
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo;
        while (hi < order.size() && order[hi].first == order[lo].first) ++hi;

        // admissibility pre-filter on the degree multiset
        std::vector<GroupElem> entry_deg;
        for (int i = 0; i < n; ++i) entry_deg.push_back(a.degrees[order[lo].first.sorted_s[i]]);
        std::sort(entry_deg.begin(), entry_deg.end());
        if (entry_deg != pat_deg_sorted) {
            lo = hi;
            continue;
        }

        std::map<std::array<std::uint16_t, kMaxPatternDegree>, const Rat*> values;
        for (std::size_t i = lo; i < hi; ++i)
            values.emplace(mu.entries[order[i].second].first.s,
                           &mu.entries[order[i].second].second);

        // distinct rearrangements of the multiset as candidate tuples
        for (int i = 0; i < n; ++i) tuple[i] = order[lo].first.sorted_s[i];
        do {
            bool admissible = true;
            for (int i = 0; i < n && admissible; ++i)
                if (a.degrees[tuple[i]] != slot_deg[i]) admissible = false;
            if (!admissible) continue;
            QVec row(fact, Rat(0));
            bool nonzero = false;
            for (int pi = 0; pi < fact; ++pi) {
                std::array<std::uint16_t, kMaxPatternDegree> permuted{};
                for (int j = 0; j < n; ++j)
                    permuted[j] = static_cast<std::uint16_t>(tuple[perms[pi][j]]);
                auto it = values.find(permuted);
                if (it != values.end()) {
                    row[pi] = *it->second;
                    nonzero = true;
                }
            }
            if (!nonzero) continue;
            // normalize for deduplication (scalar multiples are one constraint)
            QVec norm = row;
            for (const Rat& q : norm)
                if (!is_zero(q)) {
                    const Rat lead = q;
                    for (Rat& x : norm) x /= lead;
                    break;
                }
            if (seen.insert(std::move(norm)).second) rows.insert(row);
        } while (std::next_permutation(tuple.begin(), tuple.end()));
        lo = hi;
    }
    return detail::kernel_from_rowspace(pat, rows);
}

// ---------------------------------------------------------------------------
// Grassmann oracle: identity kernels of the infinite-dimensional Grassmann
// algebra E, by the disjoint-support reduction. A multilinear evaluation on
// basis monomials is nonzero only when the supports are pairwise disjoint,
// and then its value is the sign of the block reordering, which depends only
// on the parity vector of the supports.
// ---------------------------------------------------------------------------

struct GrassmannOracle {
    bool z2_graded = true;  // canonical Z_2-grading; false = E ungraded
};

inline Rat grassmann_sign(const std::vector<int>& perm, const std::vector<int>& parity) {
    int flips = 0;
    const int n = static_cast<int>(perm.size());
    // positions of slots a < b inverted by the word order, both odd
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (perm[i] > perm[j] && parity[perm[i]] == 1 && parity[perm[j]] == 1) ++flips;
    return flips % 2 == 0 ? Rat(1) : Rat(-1);
}

inline IdentityKernel grassmann_oracle(const MultilinearPattern& pat, const Budget& budget = {}) {
    const int n = pat.n();
    if (n < 1) throw StructuralError("pattern degree must be >= 1");
    if (n > budget.max_pattern_degree) throw BudgetError("pattern degree exceeds budget cap");
    const bool graded = !pat.group.is_trivial();
    if (graded && !(pat.group == GradingGroup::z2()))
        throw StructuralError("grassmann oracle supports the canonical Z_2-grading or trivial grading");

    const auto& perms = permutations(n);
    EchelonSpan rows(factorial(n));
    std::vector<int> parity(n, 0);
    const int variants = graded ? 1 : (1 << n);
    for (int mask = 0; mask < variants; ++mask) {
        for (int i = 0; i < n; ++i)
            parity[i] = graded ? static_cast<int>(pat.degrees[i][0] & 1) : ((mask >> i) & 1);
        QVec row(perms.size(), Rat(0));
        for (std::size_t pi = 0; pi < perms.size(); ++pi) row[pi] = grassmann_sign(perms[pi], parity);
        rows.insert(row);
    }
    return detail::kernel_from_rowspace(pat, rows);
}

// ---------------------------------------------------------------------------
// Kernel sources: a concrete algebra or the Grassmann oracle, with one cache
// per source so repeated pattern queries share the multiplication tensor.
// ---------------------------------------------------------------------------

using KernelSource = std::variant<const FiniteGradedAlgebra*, GrassmannOracle>;

inline GradingGroup source_group(const KernelSource& src) {
    if (std::holds_alternative<const FiniteGradedAlgebra*>(src))
        return std::get<const FiniteGradedAlgebra*>(src)->group;
    return std::get<GrassmannOracle>(src).z2_graded ? GradingGroup::z2() : GradingGroup::trivial();
}

inline std::vector<GroupElem> source_degree_support(const KernelSource& src) {
    if (std::holds_alternative<const FiniteGradedAlgebra*>(src))
        return std::get<const FiniteGradedAlgebra*>(src)->degree_support();
    if (std::get<GrassmannOracle>(src).z2_graded)
        return {GroupElem{0}, GroupElem{1}};
    return {GroupElem{}};
}

class KernelCache {
  public:
    KernelCache(KernelSource src, Budget budget = {}) : src_(src), budget_(budget) {}

    const KernelSource& source() const { return src_; }
    const Budget& budget() const { return budget_; }

    const IdentityKernel& kernel(const MultilinearPattern& pat) {
        auto it = kernels_.find(pat.degrees);
        if (it != kernels_.end()) return it->second;
        IdentityKernel k;
        if (std::holds_alternative<const FiniteGradedAlgebra*>(src_)) {
            const auto* a = std::get<const FiniteGradedAlgebra*>(src_);
            k = identity_kernel(*a, pat, budget_, tensor(pat.n()));
        } else {
            k = grassmann_oracle(pat, budget_);
        }
        return kernels_.emplace(pat.degrees, std::move(k)).first->second;
    }

    const MulTensor* tensor(int n) {
        if (!std::holds_alternative<const FiniteGradedAlgebra*>(src_)) return nullptr;
        auto it = tensors_.find(n);
        if (it != tensors_.end()) return &it->second;
        const auto* a = std::get<const FiniteGradedAlgebra*>(src_);
        long long cost = factorial(n);
        for (int i = 0; i < n; ++i) {
            cost *= std::max(1, a->dim);
            if (cost > budget_.elementary_ops)
                throw BudgetError("identity kernel estimate dim^n * n! exceeds budget " +
                                  std::to_string(budget_.elementary_ops));
        }
        return &tensors_.emplace(n, build_mul_tensor(*a, n)).first->second;
    }

  private:
    KernelSource src_;
    Budget budget_;
    std::map<int, MulTensor> tensors_;
    std::map<std::vector<GroupElem>, IdentityKernel> kernels_;
};

// ---------------------------------------------------------------------------
// Identity checking, variety inclusion, codimensions.
// ---------------------------------------------------------------------------

struct IdentityVerdict {
    bool holds = false;
    Json witness;  // on failure: the substitution and the nonzero value
};

/// Finds a concrete violating substitution of basis elements (exists whenever
/// the multilinear polynomial is not an identity).
inline Json violating_substitution(const FiniteGradedAlgebra& a, const MultilinearPattern& pat,
                                   const GradedPolynomial& f) {
    const int n = pat.n();
    std::vector<std::vector<int>> choices(n);
    for (int i = 0; i < n; ++i) choices[i] = a.component_indices(a.group.normalize(pat.degrees[i]));
    std::vector<int> pick(n, 0);
    const std::vector<GradedVariable> vars = f.variables();
    while (true) {
        Assignment asg;
        for (int i = 0; i < n; ++i) asg[vars[i]] = a.basis_vec(choices[i][pick[i]]);
        QVec val = evaluate(f, a, asg);
        if (!is_zero_vec(val)) {
            Json sub = Json::array();
            for (int i = 0; i < n; ++i) sub.push_back(a.labels[choices[i][pick[i]]]);
            Json coords = Json::array();
            for (const auto& q : val) coords.push_back(rat_to_string(q));
            return Json{{"substitution", sub}, {"value", coords}};
        }
        int pos = n - 1;
        while (pos >= 0 && ++pick[pos] == static_cast<int>(choices[pos].size())) pick[pos--] = 0;
        if (pos < 0) break;
    }
    return Json{{"note", "no violating basis substitution found"}};
}

/// True iff every full polarization of f vanishes on all admissible
/// homogeneous basis tuples (sufficient by multilinearity, characteristic 0).
inline IdentityVerdict is_graded_identity(const GradedPolynomial& f, KernelCache& cache) {
    const GradingGroup group = source_group(cache.source());
    for (const GradedPolynomial& g : multilinearize(f)) {
        if (g.is_zero_poly()) continue;
        const std::vector<GradedVariable> vars = g.variables();
        MultilinearPattern pat;
        pat.group = group;
        for (const auto& v : vars) {
            if (static_cast<int>(v.degree.size()) != group.length())
                throw DegreeMismatchError("variable degree from a different grading group");
            pat.degrees.push_back(group.normalize(v.degree));
        }
        const IdentityKernel& kernel = cache.kernel(pat);
        QVec vec = polynomial_to_pattern_vector(pat, g);
        if (!kernel.span().contains(vec)) {
            Json witness{{"polynomial", poly_to_string(g)}};
            if (std::holds_alternative<const FiniteGradedAlgebra*>(cache.source()))
                witness["counterexample"] = violating_substitution(
                    *std::get<const FiniteGradedAlgebra*>(cache.source()), pat, g);
            return {false, std::move(witness)};
        }
    }
    return {true, Json::object()};
}

inline IdentityVerdict is_graded_identity(const GradedPolynomial& f,
                                          const FiniteGradedAlgebra& a, Budget budget = {}) {
    KernelCache cache(&a, budget);
    return is_graded_identity(f, cache);
}

/// Degree sequences of length n over the given support, lexicographically.
inline std::vector<std::vector<GroupElem>> degree_sequences(const std::vector<GroupElem>& support,
                                                            int n) {
    std::vector<std::vector<GroupElem>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<GroupElem>> next;
        for (const auto& seq : out)
            for (const auto& g : support) {
                auto s = seq;
                s.push_back(g);
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

enum class PatternScope {
    UnionSupport,  // degree sequences over supp(A) u supp(B): full Id containment
    BothSupported  // only sequences admissible on both sides
};

struct VarietyReport {
    bool contained = true;
    int truncation_degree = 0;
    std::optional<MultilinearPattern> separating_pattern;
    std::optional<GradedPolynomial> separating_polynomial;

    Json to_json() const {
        Json j{{"contained", contained}, {"truncation_degree", truncation_degree}};
        if (separating_pattern) {
            Json degs = Json::array();
            for (const auto& g : separating_pattern->degrees) degs.push_back(degree_to_string(g));
            j["separating_pattern"] = degs;
        }
        if (separating_polynomial) j["separating_polynomial"] = poly_to_string(*separating_polynomial);
        return j;
    }
};

/// Truncated certificate of Id(A) <= Id(B) (i.e. B in the variety generated
/// by A): kernel containment at every pattern of degree <= d.
inline VarietyReport variety_contains(KernelCache& a, KernelCache& b, int d,
                                      PatternScope scope = PatternScope::UnionSupport) {
    if (!(source_group(a.source()) == source_group(b.source())))
        throw StructuralError("variety comparison needs one common grading group");
    VarietyReport rep;
    rep.truncation_degree = d;

    std::vector<GroupElem> support;
    const auto sa = source_degree_support(a.source());
    const auto sb = source_degree_support(b.source());
    if (scope == PatternScope::UnionSupport) {
        support = sa;
        support.insert(support.end(), sb.begin(), sb.end());
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
    } else {
        for (const auto& g : sa)
            if (std::find(sb.begin(), sb.end(), g) != sb.end()) support.push_back(g);
    }
    if (support.empty()) return rep;

    for (int n = 1; n <= d; ++n) {
        for (auto& seq : degree_sequences(support, n)) {
            MultilinearPattern pat{source_group(a.source()), seq};
            const IdentityKernel& ka = a.kernel(pat);
            const IdentityKernel& kb = b.kernel(pat);
            EchelonSpan sb_span = kb.span();
            for (const QVec& v : ka.kernel_basis) {
                if (!sb_span.contains(v)) {
                    rep.contained = false;
                    rep.separating_pattern = pat;
                    rep.separating_polynomial = pattern_vector_to_polynomial(pat, v);
                    return rep;
                }
            }
        }
    }
    return rep;
}

inline VarietyReport variety_contains(const FiniteGradedAlgebra& a, const FiniteGradedAlgebra& b,
                                      int d, Budget budget = {},
                                      PatternScope scope = PatternScope::UnionSupport) {
    KernelCache ca(&a, budget), cb(&b, budget);
    return variety_contains(ca, cb, d, scope);
}

/// c_n table: dim P_n^G - dim(P_n^G cap Id), summed over all degree
/// sequences from the source's support (single pattern when trivially
/// graded, the classical c_n).
inline std::vector<std::pair<int, long long>> codimension_table(KernelCache& cache, int n_max) {
    std::vector<std::pair<int, long long>> out;
    const auto support = source_degree_support(cache.source());
    for (int n = 1; n <= n_max; ++n) {
        long long total = 0;
        for (auto& seq : degree_sequences(support, n)) {
            MultilinearPattern pat{source_group(cache.source()), seq};
            total += cache.kernel(pat).codimension;
        }
        out.emplace_back(n, total);
    }
    return out;
}

/// The multilinear consequences, inside one Z_2-pattern, of the two
/// supercommutativity families (even-anything commutators and odd-odd
/// anticommutators): all sandwiches a [u, v]_{+-} b over ordered splittings
/// of the variables. The enumeration is S_n-stable by construction.
inline std::vector<QVec> supercommutator_consequences(const MultilinearPattern& pat) {
    const int n = pat.n();
    const auto& perms = permutations(n);
    std::vector<QVec> out;
    auto parity_of = [&](const std::vector<int>& slots, int from, int to) {
        long sum = 0;
        for (int i = from; i < to; ++i) sum += pat.degrees[slots[i]][0];
        return static_cast<int>(sum & 1);
    };
    for (const auto& w : perms) {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = j + 1; k <= n; ++k) {
                    // a = w[0..i), u = w[i..j), v = w[j..k), b = w[k..n)
                    const int pu = parity_of(w, i, j);
                    const int pv = parity_of(w, j, k);
                    Rat sign;
                    if (pu == 0 || pv == 0) sign = Rat(-1);       // commutator
                    else sign = Rat(1);                           // odd-odd anticommutator
                    std::vector<int> swapped(w.begin(), w.end());
                    std::rotate(swapped.begin() + i, swapped.begin() + j, swapped.begin() + k);
                    // swapped = a v u b
                    QVec vec(perms.size(), Rat(0));
                    vec[permutation_index(w)] += 1;
                    vec[permutation_index(swapped)] += sign;
                    if (!is_zero_vec(vec)) out.push_back(std::move(vec));
                }
    }
    return out;
}

}  // namespace pivar
