#pragma once

#include "pivar/presheaf.hpp"

#include <map>
#include <optional>
#include <vector>

namespace pivar {

/// Presheaf of finite-dimensional vector spaces with linear restrictions,
/// the coefficient system for Cech cohomology.
struct VectorPresheaf {
    FiniteTopology top;
    std::map<OpenMask, int> dims;
    std::map<std::pair<OpenMask, OpenMask>, QMat> restriction_maps;

    int dim_at(OpenMask u) const {
        auto it = dims.find(u);
        if (it == dims.end()) throw StructuralError("missing vector space on an open");
        return it->second;
    }
    QMat restriction(OpenMask u, OpenMask v) const {
        if (u == v) return QMat::identity(dim_at(u));
        auto it = restriction_maps.find({u, v});
        if (it == restriction_maps.end())
            throw StructuralError("missing linear restriction " + top.subset_name(u) + " -> " +
                                  top.subset_name(v));
        return it->second;
    }
};

/// Constant presheaf: F^d on every nonempty open, identity restrictions.
inline VectorPresheaf constant_vector_presheaf(const FiniteTopology& t, int d) {
    VectorPresheaf v;
    v.top = t;
    for (OpenMask u : t.opens) v.dims[u] = u == 0 ? 0 : d;
    for (OpenMask a : t.opens)
        for (OpenMask b : t.opens) {
            if (b >= a || (b & a) != b) continue;
            v.restriction_maps[{a, b}] = b == 0 ? QMat(0, v.dims[a]) : QMat::identity(d);
        }
    return v;
}

/// The constant sheaf of rank d: sections are locally constant, one copy of
/// F^d per connected component; restrictions follow component inclusion.
inline VectorPresheaf constant_vector_sheaf(const FiniteTopology& t, int d) {
    VectorPresheaf v;
    v.top = t;
    std::map<OpenMask, std::vector<OpenMask>> comps;
    for (OpenMask u : t.opens) {
        comps[u] = connected_components(t, u);
        v.dims[u] = d * static_cast<int>(comps[u].size());
    }
    for (OpenMask a : t.opens)
        for (OpenMask b : t.opens) {
            if (b >= a || (b & a) != b) continue;
            QMat m(v.dims[b], v.dims[a]);
            for (std::size_t cb = 0; cb < comps[b].size(); ++cb) {
                // the a-component containing this b-component
                for (std::size_t ca = 0; ca < comps[a].size(); ++ca) {
                    if ((comps[b][cb] & comps[a][ca]) == comps[b][cb]) {
                        for (int i = 0; i < d; ++i) m.a[cb * d + i][ca * d + i] = 1;
                        break;
                    }
                }
            }
            v.restriction_maps[{a, b}] = std::move(m);
        }
    return v;
}

/// Degree-preserving linear maps F(U) -> G(U) as a vector presheaf. The
/// restriction of a linear map exists when F's restriction is surjective
/// (h_V (s|_V) = h_U(s)|_V); opens where that fails are reported.
struct HomPresheafResult {
    std::optional<VectorPresheaf> presheaf;
    Json undefined_restrictions = Json::array();
    // per open: basis of the degree-preserving map space, as flattened
    // (G-dim x F-dim) matrices
    std::map<OpenMask, std::vector<QVec>> map_basis;
};

inline HomPresheafResult hom_presheaf(const PresheafOfAlgebras& f, const PresheafOfAlgebras& g) {
    HomPresheafResult out;
    VectorPresheaf v;
    v.top = f.top;
    for (OpenMask u : f.top.opens) {
        const auto& fu = f.at(u);
        const auto& gu = g.at(u);
        // degree-preserving maps: columns for basis i of F(U) supported on
        // G(U) indices of the same degree
        std::vector<QVec> basis;
        for (int i = 0; i < fu.dim; ++i)
            for (int r = 0; r < gu.dim; ++r)
                if (gu.degrees[r] == fu.degrees[i]) {
                    QVec flat(static_cast<std::size_t>(fu.dim) * gu.dim, Rat(0));
                    flat[static_cast<std::size_t>(i) * gu.dim + r] = 1;
                    basis.push_back(std::move(flat));
                }
        v.dims[u] = static_cast<int>(basis.size());
        out.map_basis[u] = std::move(basis);
    }
    bool all_defined = true;
    for (OpenMask u : f.top.opens)
        for (OpenMask w : f.top.opens) {
            if (w >= u || (w & u) != w) continue;
            const auto& fu = f.at(u);
            const auto& fw = f.at(w);
            const auto& gu = g.at(u);
            const auto& gw = g.at(w);
            const QMat rf = f.restriction(u, w);
            const QMat rg = g.restriction(u, w);
            if (rank(rf) != fw.dim) {
                all_defined = false;
                out.undefined_restrictions.push_back(
                    Json{{"from", f.top.subset_name(u)},
                         {"to", f.top.subset_name(w)},
                         {"reason", "source restriction not surjective"}});
                continue;
            }
            // h_W circ rf = rg circ h_U determines h_W on the image = all of F(W)
            const auto& bu = out.map_basis[u];
            const auto& bw = out.map_basis[w];
            QMat m(v.dims[w], v.dims[u]);
            // right inverse of rf (exists by surjectivity): solve rf X = I
            QMat rinv(fu.dim, fw.dim);
            for (int c = 0; c < fw.dim; ++c) {
                QVec e(fw.dim, Rat(0));
                e[c] = 1;
                auto x = solve(rf, e);
                if (!x) throw StructuralError("surjective restriction has no preimage");
                for (int r = 0; r < fu.dim; ++r) rinv.a[r][c] = (*x)[r];
            }
            bool defined_here = true;
            for (int c = 0; c < v.dims[u] && defined_here; ++c) {
                // reshape basis map, conjugate, re-express
                QMat hu(gu.dim, fu.dim);
                for (int i = 0; i < fu.dim; ++i)
                    for (int r = 0; r < gu.dim; ++r)
                        hu.a[r][i] = bu[c][static_cast<std::size_t>(i) * gu.dim + r];
                QMat hw = matmul(rg, matmul(hu, rinv));
                // h_W is only well-defined when h_W o r_F = r_G o h_U, i.e.
                // h_U maps ker(r_F) into ker(r_G)
                if (!(matmul(hw, rf) == matmul(rg, hu))) {
                    defined_here = false;
                    out.undefined_restrictions.push_back(
                        Json{{"from", f.top.subset_name(u)},
                             {"to", f.top.subset_name(w)},
                             {"reason", "map does not factor through the restriction"}});
                    break;
                }
                QVec flat(static_cast<std::size_t>(fw.dim) * gw.dim, Rat(0));
                for (int i = 0; i < fw.dim; ++i)
                    for (int r = 0; r < gw.dim; ++r)
                        flat[static_cast<std::size_t>(i) * gw.dim + r] = hw.a[r][i];
                auto coords = coordinates_in_basis(bw, flat);
                if (!coords) {
                    defined_here = false;
                    out.undefined_restrictions.push_back(
                        Json{{"from", f.top.subset_name(u)},
                             {"to", f.top.subset_name(w)},
                             {"reason", "restricted map is not degree preserving"}});
                    break;
                }
                for (int r = 0; r < v.dims[w]; ++r) m.a[r][c] = (*coords)[r];
            }
            if (!defined_here) {
                all_defined = false;
                continue;
            }
            v.restriction_maps[{u, w}] = std::move(m);
        }
    if (all_defined) out.presheaf = std::move(v);
    return out;
}

/// First Cech cohomology dimension on the cover by minimal opens (which
/// refines every cover of a finite space), alternating ordered complex.
inline int cech_h1(const FiniteTopology& t, const VectorPresheaf& v) {
    std::vector<OpenMask> cover;
    for (int x = 0; x < t.npoints(); ++x) cover.push_back(t.minimal_open(x));
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    const int m = static_cast<int>(cover.size());

    std::vector<int> off0(m + 1, 0);
    for (int i = 0; i < m; ++i) off0[i + 1] = off0[i] + v.dim_at(cover[i]);
    std::map<std::pair<int, int>, int> off1;
    int c1 = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            off1[{i, j}] = c1;
            c1 += v.dim_at(cover[i] & cover[j]);
        }
    std::map<std::tuple<int, int, int>, int> off2;
    int c2 = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                off2[{i, j, k}] = c2;
                c2 += v.dim_at(cover[i] & cover[j] & cover[k]);
            }

    QMat d0(c1, off0[m]);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const OpenMask meet = cover[i] & cover[j];
            if (v.dim_at(meet) == 0) continue;
            const QMat ri = v.restriction(cover[i], meet);
            const QMat rj = v.restriction(cover[j], meet);
            for (int r = 0; r < v.dim_at(meet); ++r) {
                for (int c = 0; c < v.dim_at(cover[j]); ++c)
                    d0.a[off1[{i, j}] + r][off0[j] + c] += rj.a[r][c];
                for (int c = 0; c < v.dim_at(cover[i]); ++c)
                    d0.a[off1[{i, j}] + r][off0[i] + c] -= ri.a[r][c];
            }
        }

    QMat d1(c2, c1);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                const OpenMask meet = cover[i] & cover[j] & cover[k];
                if (v.dim_at(meet) == 0) continue;
                auto put = [&](int pair_i, int pair_j, const Rat& sign) {
                    const OpenMask pair_meet = cover[pair_i] & cover[pair_j];
                    const QMat r = v.restriction(pair_meet, meet);
                    for (int rr = 0; rr < v.dim_at(meet); ++rr)
                        for (int cc = 0; cc < v.dim_at(pair_meet); ++cc)
                            d1.a[off2[{i, j, k}] + rr][off1[{pair_i, pair_j}] + cc] +=
                                sign * r.a[rr][cc];
                };
                put(j, k, Rat(1));
                put(i, k, Rat(-1));
                put(i, j, Rat(1));
            }

    const int rank_d0 = rank(d0);
    const int ker_d1 = c1 - rank(d1);
    return ker_d1 - rank_d0;
}

}  // namespace pivar
