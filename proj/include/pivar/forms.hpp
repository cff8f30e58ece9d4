#pragma once

#include "pivar/identities.hpp"
#include "pivar/linalg.hpp"
#include "pivar/report.hpp"

#include <map>
#include <string>
#include <vector>

namespace pivar {

struct FormCapError : BudgetError {
    using BudgetError::BudgetError;
};

/// Differential forms on n variables with polynomial coefficients of total
/// degree <= p, exact rational coefficients. Monomial x^alpha dx_S.
struct FormsArena {
    int nvars = 0;
    int poly_cap = 0;
};

struct FormMonomial {
    std::vector<int> exps;  // length nvars
    unsigned mask = 0;      // dx subset

    auto operator<=>(const FormMonomial&) const = default;
};

using PolyForm = std::map<FormMonomial, Rat>;

inline int total_degree(const FormMonomial& m) {
    int d = 0;
    for (int e : m.exps) d += e;
    return d;
}

inline void add_form_term(PolyForm& f, const FormMonomial& m, const Rat& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = f.try_emplace(m, Rat(0));
    it->second += c;
    if (is_zero(it->second)) f.erase(it);
}

inline PolyForm form_scaled(const PolyForm& f, const Rat& c) {
    PolyForm out;
    if (is_zero(c)) return out;
    for (const auto& [m, q] : f) out[m] = q * c;
    return out;
}

inline PolyForm form_add(const PolyForm& a, const PolyForm& b) {
    PolyForm out = a;
    for (const auto& [m, c] : b) add_form_term(out, m, c);
    return out;
}

inline PolyForm form_sub(const PolyForm& a, const PolyForm& b) {
    PolyForm out = a;
    for (const auto& [m, c] : b) add_form_term(out, m, -c);
    return out;
}

/// Sign of dx_S ^ dx_T relative to the sorted union: (-1)^{#{(s,t): s>t}}.
inline int wedge_sign(unsigned s, unsigned t) {
    int inv = 0;
    for (int i = 0; i < 32; ++i)
        if (t & (1u << i)) inv += __builtin_popcount(s >> (i + 1));
    return inv % 2 == 0 ? 1 : -1;
}

inline PolyForm wedge(const FormsArena& arena, const PolyForm& a, const PolyForm& b) {
    PolyForm out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            if (ma.mask & mb.mask) continue;
            FormMonomial m;
            m.exps.resize(arena.nvars);
            for (int i = 0; i < arena.nvars; ++i) m.exps[i] = ma.exps[i] + mb.exps[i];
            if (total_degree(m) > arena.poly_cap)
                throw FormCapError("wedge product exceeds the polynomial cap " +
                                   std::to_string(arena.poly_cap));
            m.mask = ma.mask | mb.mask;
            add_form_term(out, m, ca * cb * wedge_sign(ma.mask, mb.mask));
        }
    return out;
}

/// Exterior differential; lowers polynomial degree, raises form degree.
inline PolyForm exterior_d(const FormsArena& arena, const PolyForm& f) {
    PolyForm out;
    for (const auto& [m, c] : f)
        for (int i = 0; i < arena.nvars; ++i) {
            if (m.exps[i] == 0 || (m.mask & (1u << i))) continue;
            FormMonomial d = m;
            d.exps[i] -= 1;
            d.mask |= 1u << i;
            // dx_i moves into the sorted wedge: sign by the smaller elements
            const int smaller = __builtin_popcount(m.mask & ((1u << i) - 1));
            add_form_term(out, d, c * Rat(m.exps[i]) * (smaller % 2 == 0 ? 1 : -1));
        }
    return out;
}

/// alpha * beta = alpha ^ beta + 1/2 d alpha ^ d beta.
inline PolyForm fedosov_product(const FormsArena& arena, const PolyForm& a, const PolyForm& b) {
    PolyForm out = wedge(arena, a, b);
    PolyForm corr = wedge(arena, exterior_d(arena, a), exterior_d(arena, b));
    return form_add(out, form_scaled(corr, Rat(1, 2)));
}

inline PolyForm fedosov_commutator(const FormsArena& arena, const PolyForm& a, const PolyForm& b) {
    return form_sub(fedosov_product(arena, a, b), fedosov_product(arena, b, a));
}

inline bool is_even_form(const PolyForm& f) {
    for (const auto& [m, c] : f)
        if (__builtin_popcount(m.mask) % 2 != 0) return false;
    return true;
}

inline std::string form_to_string(const FormsArena& arena, const PolyForm& f) {
    if (f.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : f) {
        if (!first) s += " + ";
        first = false;
        s += rat_to_string(c);
        for (int i = 0; i < arena.nvars; ++i)
            if (m.exps[i] > 0) {
                s += " x" + std::to_string(i + 1);
                if (m.exps[i] > 1) s += "^" + std::to_string(m.exps[i]);
            }
        for (int i = 0; i < arena.nvars; ++i)
            if (m.mask & (1u << i)) s += " dx" + std::to_string(i + 1);
    }
    return s;
}

/// Sampled verification of the Fedosov identities on even forms:
/// associativity, even closure, [a,b]_* = da ^ db, and the vanishing of the
/// triple commutator, all exact per sample; plus membership of [[x1,x2],x3]
/// in the kernel of the sampled degree-3 evaluation map. Samples are capped
/// at coefficient degree p/3 so triple products never overflow the arena.
inline VerificationReport fedosov_identity_report(const FormsArena& arena, int samples,
                                                  std::uint64_t seed);

/// Deterministic pseudo-random even form with coefficient degree <= max_deg.
inline PolyForm sample_even_form(const FormsArena& arena, SplitMix64& rng, int max_deg,
                                 int max_terms = 3) {
    std::vector<unsigned> even_masks;
    for (unsigned m = 0; m < (1u << arena.nvars); ++m)
        if (__builtin_popcount(m) % 2 == 0) even_masks.push_back(m);
    PolyForm f;
    const int terms = 1 + static_cast<int>(rng.below(max_terms));
    for (int t = 0; t < terms; ++t) {
        FormMonomial m;
        m.exps.resize(arena.nvars, 0);
        int budget = max_deg;
        for (int i = 0; i < arena.nvars; ++i) {
            const int e = static_cast<int>(rng.below(budget + 1));
            m.exps[i] = e;
            budget -= e;
        }
        m.mask = even_masks[rng.below(even_masks.size())];
        add_form_term(f, m, rng.small_rational(3, 2));
    }
    return f;
}

inline VerificationReport fedosov_identity_report(const FormsArena& arena, int samples,
                                                  std::uint64_t seed) {
    const std::string name = "fedosov_identity_report";
    SplitMix64 rng(seed);
    const int sample_deg = std::max(0, arena.poly_cap / 3);
    const auto& perms = permutations(3);
    EchelonSpan rows(6);
    for (int s = 0; s < samples; ++s) {
        PolyForm alpha = sample_even_form(arena, rng, sample_deg);
        PolyForm beta = sample_even_form(arena, rng, sample_deg);
        PolyForm gamma = sample_even_form(arena, rng, sample_deg);
        auto fail = [&](const char* check) {
            return VerificationReport::fail(
                name, Json{{"sample", s}, {"check", check}, {"seed", seed},
                           {"alpha", form_to_string(arena, alpha)},
                           {"beta", form_to_string(arena, beta)},
                           {"gamma", form_to_string(arena, gamma)}});
        };
        if (!is_even_form(fedosov_product(arena, alpha, beta))) return fail("even closure");
        if (!(fedosov_product(arena, fedosov_product(arena, alpha, beta), gamma) ==
              fedosov_product(arena, alpha, fedosov_product(arena, beta, gamma))))
            return fail("associativity");
        if (!(fedosov_commutator(arena, alpha, beta) ==
              wedge(arena, exterior_d(arena, alpha), exterior_d(arena, beta))))
            return fail("commutator = d alpha ^ d beta");
        if (!fedosov_commutator(arena, fedosov_commutator(arena, alpha, beta), gamma).empty())
            return fail("triple commutator");

        const PolyForm* args[3] = {&alpha, &beta, &gamma};
        std::vector<PolyForm> word_values;
        for (const auto& p : perms)
            word_values.push_back(fedosov_product(
                arena, fedosov_product(arena, *args[p[0]], *args[p[1]]), *args[p[2]]));
        std::map<FormMonomial, int> idx;
        for (const auto& v : word_values)
            for (const auto& [m, c] : v) idx.try_emplace(m, static_cast<int>(idx.size()));
        std::vector<QVec> sample_rows(idx.size(), QVec(6, Rat(0)));
        for (int pi = 0; pi < 6; ++pi)
            for (const auto& [m, c] : word_values[pi]) sample_rows[idx.at(m)][pi] = c;
        for (auto& r : sample_rows) rows.insert(r);
    }
    // [[x1,x2],x3] = x1x2x3 - x2x1x3 - x3x1x2 + x3x2x1 in the word basis
    QVec triple(6, Rat(0));
    triple[permutation_index({0, 1, 2})] = 1;
    triple[permutation_index({1, 0, 2})] = -1;
    triple[permutation_index({2, 0, 1})] = -1;
    triple[permutation_index({2, 1, 0})] = 1;
    for (const QVec& row : rows.rref_basis()) {
        Rat dot(0);
        for (int i = 0; i < 6; ++i) dot += row[i] * triple[i];
        if (!is_zero(dot))
            return VerificationReport::fail(
                name, Json{{"check", "triple commutator kernel membership"}, {"seed", seed}});
    }
    return VerificationReport::pass(name, Json{{"samples", samples},
                                               {"seed", seed},
                                               {"nvars", arena.nvars},
                                               {"poly_cap", arena.poly_cap},
                                               {"sample_coefficient_degree", sample_deg},
                                               {"evaluation_rank", rows.rank()}});
}

}  // namespace pivar
