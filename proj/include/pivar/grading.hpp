#pragma once

#include "pivar/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pivar {

/// Group element of Z^r x prod Z/m_i, as an integer vector of length
/// r + #torsion with torsion coordinates normalized into [0, m_i).
using GroupElem = std::vector<std::int64_t>;

/// Finitely generated abelian grading group Z^r x Z/m_1 x ... x Z/m_t.
struct GradingGroup {
    int free_rank = 0;
    std::vector<std::int64_t> torsion;  // each >= 2

    GradingGroup() = default;
    GradingGroup(int r, std::vector<std::int64_t> t) : free_rank(r), torsion(std::move(t)) {
        for (auto m : torsion)
            if (m < 2) throw StructuralError("torsion order must be >= 2, got " + std::to_string(m));
        if (free_rank < 0) throw StructuralError("negative free rank");
    }

    static GradingGroup trivial() { return GradingGroup(); }
    static GradingGroup z() { return GradingGroup(1, {}); }
    static GradingGroup z2() { return GradingGroup(0, {2}); }
    static GradingGroup z2_pow(int n) { return GradingGroup(0, std::vector<std::int64_t>(n, 2)); }

    int length() const { return free_rank + static_cast<int>(torsion.size()); }
    bool is_trivial() const { return length() == 0; }

    GroupElem identity() const { return GroupElem(length(), 0); }

    GroupElem normalize(GroupElem e) const {
        if (static_cast<int>(e.size()) != length())
            throw StructuralError("group element of wrong length");
        for (std::size_t i = 0; i < torsion.size(); ++i) {
            auto& c = e[free_rank + i];
            c %= torsion[i];
            if (c < 0) c += torsion[i];
        }
        return e;
    }

    GroupElem mul(const GroupElem& a, const GroupElem& b) const {
        GroupElem out(length());
        for (int i = 0; i < length(); ++i) out[i] = a[i] + b[i];
        return normalize(std::move(out));
    }

    GroupElem inverse(const GroupElem& a) const {
        GroupElem out(length());
        for (int i = 0; i < length(); ++i) out[i] = -a[i];
        return normalize(std::move(out));
    }

    bool operator==(const GradingGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
};

inline std::string degree_to_string(const GroupElem& e) {
    std::string s = "(";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e[i]);
    }
    return s + ")";
}

}  // namespace pivar
