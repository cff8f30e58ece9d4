#pragma once

#include "pivar/report.hpp"
#include "pivar/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace pivar {

using OpenMask = std::uint32_t;

/// Finite topological space: named points and the open sets as bitmasks
/// (sorted ascending; contains the empty set and the whole space and is
/// closed under union and intersection).
struct FiniteTopology {
    std::vector<std::string> points;
    std::vector<OpenMask> opens;

    int npoints() const { return static_cast<int>(points.size()); }
    OpenMask full_mask() const { return npoints() == 0 ? 0u : ((1u << npoints()) - 1u); }

    bool is_open(OpenMask m) const {
        return std::binary_search(opens.begin(), opens.end(), m);
    }

    void normalize() { std::sort(opens.begin(), opens.end()); opens.erase(std::unique(opens.begin(), opens.end()), opens.end()); }

    /// Minimal open neighborhood of a point (valid topologies only).
    OpenMask minimal_open(int x) const {
        OpenMask acc = full_mask();
        for (OpenMask u : opens)
            if (u & (1u << x)) acc &= u;
        return acc;
    }

    std::string subset_name(OpenMask m) const {
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < npoints(); ++i)
            if (m & (1u << i)) {
                if (!first) s += ",";
                s += points[i];
                first = false;
            }
        return s + "}";
    }

    static FiniteTopology discrete(std::vector<std::string> names) {
        FiniteTopology t;
        t.points = std::move(names);
        const int n = t.npoints();
        for (OpenMask m = 0; m < (1u << n); ++m) t.opens.push_back(m);
        return t;
    }

    static FiniteTopology point() { return discrete({"pt"}); }

    static FiniteTopology sierpinski() {
        FiniteTopology t;
        t.points = {"a", "b"};
        t.opens = {0u, 1u, 3u};
        return t;
    }

    /// The 4-point model of the circle: opens generated by {a}, {b},
    /// {a,b,x}, {a,b,y}.
    static FiniteTopology pseudocircle() {
        FiniteTopology t;
        t.points = {"a", "b", "x", "y"};
        t.opens = {0u, 1u, 2u, 3u, 7u, 11u, 15u};
        return t;
    }
};

/// Closure axioms, with the minimal open neighborhood of every point as a
/// byproduct on success.
inline VerificationReport validate_topology(const FiniteTopology& t) {
    const std::string name = "validate_topology";
    for (OpenMask m : t.opens)
        if (m > t.full_mask()) throw StructuralError("open set mentions unknown points");
    if (!t.is_open(0u))
        return VerificationReport::fail(name, Json{{"reason", "empty set not open"}});
    if (!t.is_open(t.full_mask()))
        return VerificationReport::fail(name, Json{{"reason", "whole space not open"}});
    for (OpenMask u : t.opens)
        for (OpenMask v : t.opens) {
            if (!t.is_open(u | v))
                return VerificationReport::fail(
                    name, Json{{"reason", "union missing"},
                               {"witness", Json::array({t.subset_name(u), t.subset_name(v)})}});
            if (!t.is_open(u & v))
                return VerificationReport::fail(
                    name, Json{{"reason", "intersection missing"},
                               {"witness", Json::array({t.subset_name(u), t.subset_name(v)})}});
        }
    Json minimal = Json::object();
    for (int x = 0; x < t.npoints(); ++x)
        minimal[t.points[x]] = t.subset_name(t.minimal_open(x));
    return VerificationReport::pass(name, Json{{"minimal_opens", minimal}});
}

/// Point map X -> Y; continuity = preimages of opens are open.
inline VerificationReport check_continuity(const FiniteTopology& x, const FiniteTopology& y,
                                           const std::vector<int>& map) {
    const std::string name = "continuity";
    if (static_cast<int>(map.size()) != x.npoints())
        throw StructuralError("point map arity mismatch");
    for (int v : map)
        if (v < 0 || v >= y.npoints()) throw StructuralError("point map hits unknown point");
    for (OpenMask u : y.opens) {
        OpenMask pre = 0;
        for (int p = 0; p < x.npoints(); ++p)
            if (u & (1u << map[p])) pre |= 1u << p;
        if (!x.is_open(pre))
            return VerificationReport::fail(
                name, Json{{"reason", "preimage not open"}, {"witness_open", y.subset_name(u)}});
    }
    return VerificationReport::pass(name);
}

inline OpenMask preimage_mask(const FiniteTopology& x, const std::vector<int>& map, OpenMask u) {
    OpenMask pre = 0;
    for (int p = 0; p < x.npoints(); ++p)
        if (u & (1u << map[p])) pre |= 1u << p;
    return pre;
}

/// Connected components of an open subset: points are linked when their
/// minimal opens meet (path components = components in a finite space).
inline std::vector<OpenMask> connected_components(const FiniteTopology& t, OpenMask u) {
    std::vector<int> pts;
    for (int i = 0; i < t.npoints(); ++i)
        if (u & (1u << i)) pts.push_back(i);
    std::vector<int> parent(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            // minimal opens inside u (u open, so U_x <= u when x in u)
            if (t.minimal_open(pts[i]) & t.minimal_open(pts[j])) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }
    std::map<int, OpenMask> comp;
    for (std::size_t i = 0; i < pts.size(); ++i) comp[find(static_cast<int>(i))] |= 1u << pts[i];
    std::vector<OpenMask> out;
    for (auto& [root, mask] : comp) out.push_back(mask);
    std::sort(out.begin(), out.end());
    return out;
}

/// All topologies on n labeled points (n <= 4), as sorted open-mask lists.
inline std::vector<std::vector<OpenMask>> enumerate_topologies(int n) {
    if (n < 0 || n > 4) throw BudgetError("topology enumeration supported for n <= 4");
    const int subsets = 1 << n;
    const OpenMask full = static_cast<OpenMask>(subsets - 1);
    std::vector<std::vector<OpenMask>> out;
    // iterate over all families containing {} and X
    const std::uint32_t family_count = 1u << subsets;
    for (std::uint32_t fam = 0; fam < family_count; ++fam) {
        if (!(fam & 1u)) continue;                       // must contain {}
        if (!(fam & (1u << full))) continue;             // must contain X
        bool closed = true;
        for (int a = 0; a < subsets && closed; ++a) {
            if (!(fam & (1u << a))) continue;
            for (int b = a + 1; b < subsets && closed; ++b) {
                if (!(fam & (1u << b))) continue;
                if (!(fam & (1u << (a | b))) || !(fam & (1u << (a & b)))) closed = false;
            }
        }
        if (!closed) continue;
        std::vector<OpenMask> opens;
        for (int a = 0; a < subsets; ++a)
            if (fam & (1u << a)) opens.push_back(static_cast<OpenMask>(a));
        out.push_back(std::move(opens));
    }
    return out;
}

/// Representatives of the homeomorphism classes (canonical = lexicographic
/// minimum of the sorted open lists over all point permutations).
inline std::vector<std::vector<OpenMask>> topology_classes(int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::set<std::vector<OpenMask>> canon;
    for (const auto& opens : enumerate_topologies(n)) {
        std::vector<OpenMask> best;
        for (const auto& p : perms) {
            std::vector<OpenMask> mapped;
            for (OpenMask m : opens) {
                OpenMask nm = 0;
                for (int i = 0; i < n; ++i)
                    if (m & (1u << i)) nm |= 1u << p[i];
                mapped.push_back(nm);
            }
            std::sort(mapped.begin(), mapped.end());
            if (best.empty() || mapped < best) best = std::move(mapped);
        }
        canon.insert(best);
    }
    return {canon.begin(), canon.end()};
}

}  // namespace pivar
