#pragma once

#include "pivar/builders.hpp"
#include "pivar/identities.hpp"
#include "pivar/structure.hpp"
#include "pivar/topology.hpp"

#include <map>
#include <utility>
#include <vector>

namespace pivar {

/// Contravariant assignment of graded algebras to opens with restriction
/// morphisms. The empty open carries the zero algebra in every built-in
/// construction; sheaf axioms are checked over nonempty covers by proper
/// opens, so the empty open never constrains a verdict.
struct PresheafOfAlgebras {
    FiniteTopology top;
    std::map<OpenMask, FiniteGradedAlgebra> sections;
    std::map<std::pair<OpenMask, OpenMask>, QMat> restriction_maps;  // (U, V) with V strictly below U

    const FiniteGradedAlgebra& at(OpenMask u) const {
        auto it = sections.find(u);
        if (it == sections.end())
            throw StructuralError("missing section algebra on " + top.subset_name(u));
        return it->second;
    }

    QMat restriction(OpenMask u, OpenMask v) const {
        if ((v & u) != v) throw StructuralError("restriction target is not a subset");
        if (u == v) return QMat::identity(at(u).dim);
        auto it = restriction_maps.find({u, v});
        if (it == restriction_maps.end())
            throw StructuralError("missing restriction " + top.subset_name(u) + " -> " +
                                  top.subset_name(v));
        return it->second;
    }

    void set_restriction(OpenMask u, OpenMask v, QMat m) {
        restriction_maps[{u, v}] = std::move(m);
    }
};

/// Constant presheaf: A on every nonempty open, identity restrictions,
/// zero algebra on the empty open.
inline PresheafOfAlgebras constant_presheaf(const FiniteTopology& t,
                                            const FiniteGradedAlgebra& a) {
    PresheafOfAlgebras f;
    f.top = t;
    for (OpenMask u : t.opens)
        f.sections.emplace(u, u == 0 ? FiniteGradedAlgebra::zero(a.group) : a);
    for (OpenMask u : t.opens)
        for (OpenMask v : t.opens) {
            if (v >= u || (v & u) != v) continue;
            f.set_restriction(u, v, v == 0 ? QMat(0, f.at(u).dim) : QMat::identity(a.dim));
        }
    return f;
}

/// Sheaf of sections of the discrete bundle with fiber A_x over x:
/// F(U) = prod_{x in U} A_x, restrictions are component projections.
inline PresheafOfAlgebras product_sheaf(const FiniteTopology& t,
                                        const std::vector<const FiniteGradedAlgebra*>& fibers) {
    if (static_cast<int>(fibers.size()) != t.npoints())
        throw StructuralError("one fiber per point required");
    GradingGroup group = fibers.empty() ? GradingGroup::trivial() : fibers.front()->group;
    PresheafOfAlgebras f;
    f.top = t;
    for (OpenMask u : t.opens) {
        if (u == 0) {
            f.sections.emplace(u, FiniteGradedAlgebra::zero(group));
            continue;
        }
        std::vector<const FiniteGradedAlgebra*> factors;
        for (int x = 0; x < t.npoints(); ++x)
            if (u & (1u << x)) factors.push_back(fibers[x]);
        f.sections.emplace(u, direct_product(factors));
    }
    for (OpenMask u : t.opens)
        for (OpenMask v : t.opens) {
            if (v >= u || (v & u) != v) continue;
            QMat m(f.at(v).dim, f.at(u).dim);
            int row_off = 0;
            for (int x = 0; x < t.npoints(); ++x) {
                if (!(v & (1u << x))) continue;
                // column offset of block x inside F(U)
                int col_off = 0;
                for (int y = 0; y < x; ++y)
                    if (u & (1u << y)) col_off += fibers[y]->dim;
                for (int i = 0; i < fibers[x]->dim; ++i) m.a[row_off + i][col_off + i] = 1;
                row_off += fibers[x]->dim;
            }
            f.set_restriction(u, v, std::move(m));
        }
    return f;
}

/// The function sheaf O^G_A: U -> A (x) Fun(U), restrictions restrict
/// functions. Basis order inside a section: (a_i, point) blocks by i.
inline PresheafOfAlgebras build_function_sheaf(const FiniteTopology& t,
                                               const FiniteGradedAlgebra& a) {
    PresheafOfAlgebras f;
    f.top = t;
    std::map<OpenMask, std::vector<int>> pts_of;
    for (OpenMask u : t.opens) {
        std::vector<std::string> names;
        std::vector<int> pts;
        for (int x = 0; x < t.npoints(); ++x)
            if (u & (1u << x)) {
                names.push_back(t.points[x]);
                pts.push_back(x);
            }
        pts_of[u] = pts;
        f.sections.emplace(u, tensor_with_commutative(a, build_function_algebra(names)));
    }
    for (OpenMask u : t.opens)
        for (OpenMask v : t.opens) {
            if (v >= u || (v & u) != v) continue;
            const auto& pu = pts_of[u];
            const auto& pv = pts_of[v];
            QMat m(f.at(v).dim, f.at(u).dim);
            for (int i = 0; i < a.dim; ++i)
                for (std::size_t xv = 0; xv < pv.size(); ++xv) {
                    const auto it = std::find(pu.begin(), pu.end(), pv[xv]);
                    const int xu = static_cast<int>(it - pu.begin());
                    m.a[i * pv.size() + xv][i * pu.size() + xu] = 1;
                }
            f.set_restriction(u, v, std::move(m));
        }
    return f;
}

/// Functoriality (identity and composition) plus validity of every
/// restriction morphism; optionally certifies each section against a
/// reference variety at a truncation degree.
inline VerificationReport check_presheaf(const PresheafOfAlgebras& f,
                                         KernelCache* reference = nullptr, int truncation = 0) {
    const std::string name = "check_presheaf";
    auto topo = validate_topology(f.top);
    if (!topo.passed()) return topo;
    for (OpenMask u : f.top.opens) f.at(u);  // throws on missing sections

    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v > u || (v & u) != v) continue;
            QMat r = f.restriction(u, v);
            if (r.rows != f.at(v).dim || r.cols != f.at(u).dim)
                throw StructuralError("restriction matrix shape mismatch");
            auto rep = verify_morphism(f.at(u), f.at(v), r);
            if (!rep.passed())
                return VerificationReport::fail(
                    name, Json{{"reason", "invalid restriction morphism"},
                               {"from", f.top.subset_name(u)},
                               {"to", f.top.subset_name(v)},
                               {"detail", rep.to_json()}});
        }

    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v >= u || (v & u) != v) continue;
            for (OpenMask w : f.top.opens) {
                if (w >= v || (w & v) != w) continue;
                if (!(matmul(f.restriction(v, w), f.restriction(u, v)) == f.restriction(u, w)))
                    return VerificationReport::fail(
                        name, Json{{"reason", "restriction composition fails"},
                                   {"chain", Json::array({f.top.subset_name(u),
                                                          f.top.subset_name(v),
                                                          f.top.subset_name(w)})}});
            }
        }

    Json data = Json::object();
    if (reference && truncation > 0) {
        Json variety = Json::object();
        bool all_in = true;
        for (OpenMask u : f.top.opens) {
            if (u == 0 || f.at(u).dim == 0) continue;
            KernelCache section_cache(&f.at(u), reference->budget());
            auto rep = variety_contains(*reference, section_cache, truncation);
            variety[f.top.subset_name(u)] = rep.to_json();
            if (!rep.contained) all_in = false;
        }
        data["variety_membership"] = variety;
        data["truncation_degree"] = truncation;
        if (!all_in) return {name, Verdict::Fail, data};
    }
    return VerificationReport::pass(name, data);
}

namespace detail {

/// Irredundant covers of u by maximal proper nonempty opens.
inline std::vector<std::vector<OpenMask>> irredundant_covers(const FiniteTopology& t, OpenMask u) {
    std::vector<OpenMask> proper;
    for (OpenMask v : t.opens)
        if (v != 0 && v != u && (v & u) == v) proper.push_back(v);
    // maximal members only
    std::vector<OpenMask> maximal;
    for (OpenMask v : proper) {
        bool dominated = false;
        for (OpenMask w : proper)
            if (w != v && (v & w) == v) dominated = true;
        if (!dominated) maximal.push_back(v);
    }
    std::vector<std::vector<OpenMask>> covers;
    const int m = static_cast<int>(maximal.size());
    for (std::uint32_t pick = 1; pick < (1u << m); ++pick) {
        OpenMask un = 0;
        for (int i = 0; i < m; ++i)
            if (pick & (1u << i)) un |= maximal[i];
        if (un != u) continue;
        bool irredundant = true;
        for (int i = 0; i < m && irredundant; ++i) {
            if (!(pick & (1u << i))) continue;
            OpenMask rest = 0;
            for (int j = 0; j < m; ++j)
                if (j != i && (pick & (1u << j))) rest |= maximal[j];
            if ((rest | maximal[i]) == rest) irredundant = false;
        }
        if (!irredundant) continue;
        std::vector<OpenMask> cover;
        for (int i = 0; i < m; ++i)
            if (pick & (1u << i)) cover.push_back(maximal[i]);
        covers.push_back(std::move(cover));
    }
    return covers;
}

/// Basis of the compatible-family subspace inside the product of the cover
/// sections, plus the block offsets.
struct CompatibleFamilies {
    std::vector<int> offsets;  // per cover member, into the product coordinates
    int total_dim = 0;
    std::vector<QVec> basis;
};

inline CompatibleFamilies compatible_families(const PresheafOfAlgebras& f,
                                              const std::vector<OpenMask>& cover) {
    CompatibleFamilies out;
    for (OpenMask v : cover) {
        out.offsets.push_back(out.total_dim);
        out.total_dim += f.at(v).dim;
    }
    std::vector<QVec> rows;
    for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i + 1; j < cover.size(); ++j) {
            const OpenMask meet = cover[i] & cover[j];
            const QMat ri = f.restriction(cover[i], meet);
            const QMat rj = f.restriction(cover[j], meet);
            for (int r = 0; r < f.at(meet).dim; ++r) {
                QVec row(out.total_dim, Rat(0));
                for (int c = 0; c < f.at(cover[i]).dim; ++c) row[out.offsets[i] + c] += ri.a[r][c];
                for (int c = 0; c < f.at(cover[j]).dim; ++c) row[out.offsets[j] + c] -= rj.a[r][c];
                rows.push_back(std::move(row));
            }
        }
    QMat m(static_cast<int>(rows.size()), out.total_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) m.a[i] = rows[i];
    out.basis = nullspace(std::move(m));
    return out;
}

inline QMat joint_restriction(const PresheafOfAlgebras& f, OpenMask u,
                              const std::vector<OpenMask>& cover, int total_dim,
                              const std::vector<int>& offsets) {
    QMat m(total_dim, f.at(u).dim);
    for (std::size_t i = 0; i < cover.size(); ++i) {
        QMat r = f.restriction(u, cover[i]);
        for (int rr = 0; rr < r.rows; ++rr)
            for (int cc = 0; cc < r.cols; ++cc) m.a[offsets[i] + rr][cc] = r.a[rr][cc];
    }
    return m;
}

}  // namespace detail

/// Monopresheaf and gluing over every irredundant cover of every open by
/// maximal proper opens (by restriction compatibility and induction over
/// the finite poset this certifies all covers).
inline VerificationReport check_sheaf(const PresheafOfAlgebras& f) {
    const std::string name = "check_sheaf";
    int covers_checked = 0;
    for (OpenMask u : f.top.opens) {
        if (u == 0) continue;
        for (const auto& cover : detail::irredundant_covers(f.top, u)) {
            ++covers_checked;
            auto fam = detail::compatible_families(f, cover);
            QMat joint = detail::joint_restriction(f, u, cover, fam.total_dim, fam.offsets);
            auto kernel = nullspace(joint);
            if (!kernel.empty()) {
                Json coords = Json::array();
                for (const auto& q : kernel.front()) coords.push_back(rat_to_string(q));
                return VerificationReport::fail(
                    name, Json{{"reason", "monopresheaf fails"},
                               {"open", f.top.subset_name(u)},
                               {"section_kernel_vector", coords}});
            }
            // gluing: image of the joint map must be all compatible families
            const int image_rank = f.at(u).dim;  // injective by the kernel check
            if (image_rank != static_cast<int>(fam.basis.size())) {
                // find a compatible family outside the image as a witness
                EchelonSpan image(fam.total_dim);
                for (int c = 0; c < joint.cols; ++c) {
                    QVec col(fam.total_dim, Rat(0));
                    for (int r = 0; r < fam.total_dim; ++r) col[r] = joint.a[r][c];
                    image.insert(col);
                }
                Json coords = Json::array();
                for (const auto& v : fam.basis)
                    if (!image.contains(v)) {
                        for (const auto& q : v) coords.push_back(rat_to_string(q));
                        break;
                    }
                return VerificationReport::fail(name,
                                                Json{{"reason", "gluing fails"},
                                                     {"open", f.top.subset_name(u)},
                                                     {"unglued_family", coords}});
            }
        }
    }
    return VerificationReport::pass(name, Json{{"covers_checked", covers_checked}});
}

/// Stalk at a point: in a finite space the filtered colimit collapses to
/// the section algebra on the minimal open neighborhood.
struct Stalk {
    int point = -1;
    OpenMask minimal_open = 0;
    const FiniteGradedAlgebra* algebra = nullptr;
    std::map<OpenMask, QMat> projections;  // U containing x -> stalk
};

inline Stalk stalk_at(const PresheafOfAlgebras& f, int x) {
    Stalk s;
    s.point = x;
    s.minimal_open = f.top.minimal_open(x);
    s.algebra = &f.at(s.minimal_open);
    for (OpenMask u : f.top.opens) {
        if (!(u & (1u << x))) continue;
        s.projections.emplace(u, f.restriction(u, s.minimal_open));
    }
    // cocone condition: pi_V o res_{U,V} = pi_U whenever x in V <= U
    for (OpenMask u : f.top.opens) {
        if (!(u & (1u << x))) continue;
        for (OpenMask v : f.top.opens) {
            if (!(v & (1u << x)) || (v & u) != v || v == u) continue;
            if (!(matmul(s.projections.at(v), f.restriction(u, v)) == s.projections.at(u)))
                throw StructuralError("stalk cocone condition fails");
        }
    }
    return s;
}

/// Universal property of the stalk against a caller-supplied cocone
/// tau_U: F(U) -> C: the unique mediating map is tau on the minimal open.
inline VerificationReport check_stalk_universal(const PresheafOfAlgebras& f, const Stalk& s,
                                                const std::map<OpenMask, QMat>& cocone) {
    const std::string name = "stalk_universal_property";
    auto it = cocone.find(s.minimal_open);
    if (it == cocone.end())
        throw StructuralError("test cocone missing the minimal open");
    const QMat& mediating = it->second;
    for (const auto& [u, tau] : cocone) {
        if (!(u & (1u << s.point))) continue;
        if (!(matmul(mediating, s.projections.at(u)) == tau))
            return VerificationReport::fail(
                name, Json{{"reason", "mediating map does not factor the cocone"},
                           {"open", f.top.subset_name(u)}});
    }
    return VerificationReport::pass(name);
}

/// Sheafification: Sff(F)(U) = compatible families (s_x in F(U_x))_{x in U}
/// with s_x|_{U_y} = s_y for y in U_x; eta_U(s) = (s|_{U_x})_x.
struct Sheafification {
    PresheafOfAlgebras sheaf;
    std::map<OpenMask, QMat> eta;
    std::map<OpenMask, std::vector<QVec>> family_basis;  // inside prod_x F(U_x)
    std::map<OpenMask, std::vector<int>> point_offsets;
};

inline Sheafification sheafify(const PresheafOfAlgebras& f) {
    Sheafification out;
    out.sheaf.top = f.top;
    const GradingGroup group = f.at(f.top.full_mask()).group;

    for (OpenMask u : f.top.opens) {
        if (u == 0) {
            out.sheaf.sections.emplace(u, FiniteGradedAlgebra::zero(group));
            out.eta.emplace(u, QMat(0, f.at(0u).dim));
            continue;
        }
        std::vector<int> pts;
        for (int x = 0; x < f.top.npoints(); ++x)
            if (u & (1u << x)) pts.push_back(x);
        std::vector<int> offsets;
        int total = 0;
        for (int x : pts) {
            offsets.push_back(total);
            total += f.at(f.top.minimal_open(x)).dim;
        }
        // compatibility rows: s_x|_{U_y} = s_y for y in U_x
        std::vector<QVec> rows;
        for (std::size_t xi = 0; xi < pts.size(); ++xi) {
            const OpenMask ux = f.top.minimal_open(pts[xi]);
            for (std::size_t yi = 0; yi < pts.size(); ++yi) {
                if (xi == yi || !(ux & (1u << pts[yi]))) continue;
                const OpenMask uy = f.top.minimal_open(pts[yi]);
                const QMat r = f.restriction(ux, uy);
                for (int rr = 0; rr < r.rows; ++rr) {
                    QVec row(total, Rat(0));
                    for (int cc = 0; cc < r.cols; ++cc) row[offsets[xi] + cc] += r.a[rr][cc];
                    row[offsets[yi] + rr] -= 1;
                    rows.push_back(std::move(row));
                }
            }
        }
        QMat cm(static_cast<int>(rows.size()), total);
        for (std::size_t i = 0; i < rows.size(); ++i) cm.a[i] = rows[i];
        std::vector<QVec> kernel = nullspace(std::move(cm));

        // homogeneous canonical basis (the compatibility subspace is graded)
        // via the ambient product algebra
        std::vector<const FiniteGradedAlgebra*> factors;
        for (int x : pts) factors.push_back(&f.at(f.top.minimal_open(x)));
        FiniteGradedAlgebra prod = direct_product(factors);
        std::vector<QVec> basis = graded_subspace_basis(prod, kernel);
        if (basis.size() != kernel.size())
            throw StructuralError("compatibility subspace is not graded");

        const int m = static_cast<int>(basis.size());
        FiniteGradedAlgebra sec(group, m);
        for (int i = 0; i < m; ++i) {
            sec.labels[i] = "s" + std::to_string(i);
            for (int t = 0; t < total; ++t)
                if (!is_zero(basis[i][t])) {
                    sec.set_degree(i, prod.degrees[t]);
                    break;
                }
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                auto coords = coordinates_in_basis(basis, prod.multiply(basis[i], basis[j]));
                if (!coords) throw StructuralError("compatible families not closed under product");
                for (int k = 0; k < m; ++k)
                    if (!is_zero((*coords)[k])) sec.add_structure_constant(i, j, k, (*coords)[k]);
            }
        auto unit_coords = coordinates_in_basis(basis, prod.unit);
        if (!unit_coords) throw StructuralError("unit family is not compatible");
        sec.unit = *unit_coords;

        // eta_U: s -> (s|_{U_x})_x
        QMat eta(m, f.at(u).dim);
        {
            QMat germs(total, f.at(u).dim);
            for (std::size_t xi = 0; xi < pts.size(); ++xi) {
                QMat r = f.restriction(u, f.top.minimal_open(pts[xi]));
                for (int rr = 0; rr < r.rows; ++rr)
                    for (int cc = 0; cc < r.cols; ++cc) germs.a[offsets[xi] + rr][cc] = r.a[rr][cc];
            }
            for (int c = 0; c < f.at(u).dim; ++c) {
                QVec col(total, Rat(0));
                for (int r = 0; r < total; ++r) col[r] = germs.a[r][c];
                auto coords = coordinates_in_basis(basis, col);
                if (!coords) throw StructuralError("eta image is not a compatible family");
                for (int r = 0; r < m; ++r) eta.a[r][c] = (*coords)[r];
            }
        }
        out.sheaf.sections.emplace(u, std::move(sec));
        out.eta.emplace(u, std::move(eta));
        out.family_basis.emplace(u, std::move(basis));
        out.point_offsets.emplace(u, std::move(offsets));
    }

    // restrictions: drop components, re-express in the target family basis
    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v >= u || (v & u) != v) continue;
            const auto& sec_u = out.sheaf.at(u);
            const auto& sec_v = out.sheaf.at(v);
            if (v == 0) {
                out.sheaf.set_restriction(u, v, QMat(0, sec_u.dim));
                continue;
            }
            std::vector<int> pts_u, pts_v;
            for (int x = 0; x < f.top.npoints(); ++x) {
                if (u & (1u << x)) pts_u.push_back(x);
                if (v & (1u << x)) pts_v.push_back(x);
            }
            const auto& basis_u = out.family_basis.at(u);
            const auto& basis_v = out.family_basis.at(v);
            const auto& off_u = out.point_offsets.at(u);
            const auto& off_v = out.point_offsets.at(v);
            QMat r(sec_v.dim, sec_u.dim);
            for (int c = 0; c < sec_u.dim; ++c) {
                QVec dropped(basis_v.empty() ? 0 : basis_v.front().size(), Rat(0));
                for (std::size_t vi = 0; vi < pts_v.size(); ++vi) {
                    const auto it = std::find(pts_u.begin(), pts_u.end(), pts_v[vi]);
                    const int ui = static_cast<int>(it - pts_u.begin());
                    const int dim_x = f.at(f.top.minimal_open(pts_v[vi])).dim;
                    for (int t = 0; t < dim_x; ++t)
                        dropped[off_v[vi] + t] = basis_u[c][off_u[ui] + t];
                }
                auto coords = coordinates_in_basis(basis_v, dropped);
                if (!coords) throw StructuralError("sheafification restriction escapes the basis");
                for (int rr = 0; rr < sec_v.dim; ++rr) r.a[rr][c] = (*coords)[rr];
            }
            out.sheaf.set_restriction(u, v, std::move(r));
        }
    return out;
}

/// Pushforward along a continuous map: (phi_* F)(V) = F(phi^{-1} V).
inline PresheafOfAlgebras pushforward(const FiniteTopology& x, const FiniteTopology& y,
                                      const std::vector<int>& map, const PresheafOfAlgebras& f) {
    auto cont = check_continuity(x, y, map);
    if (!cont.passed())
        throw StructuralError("pushforward along a non-continuous map: " + cont.data.dump());
    PresheafOfAlgebras out;
    out.top = y;
    for (OpenMask v : y.opens) out.sections.emplace(v, f.at(preimage_mask(x, map, v)));
    for (OpenMask v : y.opens)
        for (OpenMask w : y.opens) {
            if (w >= v || (w & v) != w) continue;
            out.set_restriction(v, w,
                                f.restriction(preimage_mask(x, map, v), preimage_mask(x, map, w)));
        }
    return out;
}

/// Natural transformation data between presheaves on one topology.
struct PresheafMorphism {
    std::map<OpenMask, QMat> components;
};

inline VerificationReport check_presheaf_morphism(const PresheafOfAlgebras& f,
                                                  const PresheafOfAlgebras& g,
                                                  const PresheafMorphism& phi) {
    const std::string name = "presheaf_morphism";
    if (!(f.top.opens == g.top.opens))
        return VerificationReport::fail(name, Json{{"reason", "different topologies"}});
    for (OpenMask u : f.top.opens) {
        if (u == 0) continue;
        auto it = phi.components.find(u);
        if (it == phi.components.end())
            throw StructuralError("morphism missing a component on " + f.top.subset_name(u));
        auto rep = verify_morphism(f.at(u), g.at(u), it->second);
        if (!rep.passed())
            return VerificationReport::fail(name, Json{{"reason", "component not a morphism"},
                                                       {"open", f.top.subset_name(u)},
                                                       {"detail", rep.to_json()}});
    }
    for (OpenMask u : f.top.opens)
        for (OpenMask v : f.top.opens) {
            if (v >= u || (v & u) != v || v == 0) continue;
            const QMat lhs = matmul(phi.components.at(v), f.restriction(u, v));
            const QMat rhs = matmul(g.restriction(u, v), phi.components.at(u));
            if (!(lhs == rhs))
                return VerificationReport::fail(name,
                                                Json{{"reason", "naturality square fails"},
                                                     {"from", f.top.subset_name(u)},
                                                     {"to", f.top.subset_name(v)}});
        }
    return VerificationReport::pass(name);
}

/// Per-point locality of the stalks, with the division-test detail.
inline VerificationReport check_locally_ringed(const PresheafOfAlgebras& f) {
    const std::string name = "check_locally_ringed";
    Json detail = Json::object();
    Verdict verdict = Verdict::Pass;
    for (int x = 0; x < f.top.npoints(); ++x) {
        Stalk s = stalk_at(f, x);
        auto crl = center_radical_local(*s.algebra);
        detail[f.top.points[x]] = crl.is_local.to_json();
        if (crl.is_local.verdict == Verdict::Fail) verdict = Verdict::Fail;
        else if (crl.is_local.verdict == Verdict::Inconclusive && verdict == Verdict::Pass)
            verdict = Verdict::Inconclusive;
    }
    return {name, verdict, Json{{"stalks", detail}}};
}

}  // namespace pivar
