#pragma once

#include "pivar/algebra.hpp"
#include "pivar/structure.hpp"

#include <vector>

namespace pivar {

/// Finite-dimensional two-sided module over a FiniteGradedAlgebra, given by
/// per-basis-element action matrices. Convention: left[i] is m -> b_i . m,
/// right[i] is m -> m . b_i.
struct Bimodule {
    const FiniteGradedAlgebra* algebra = nullptr;
    int dim = 0;
    std::vector<QMat> left;
    std::vector<QMat> right;

    QVec act_left(const QVec& a_coords, const QVec& m) const {
        QVec out(dim, Rat(0));
        for (int i = 0; i < algebra->dim; ++i)
            if (!is_zero(a_coords[i])) add_scaled(out, apply_mat(left[i], m), a_coords[i]);
        return out;
    }
    QVec act_right(const QVec& m, const QVec& a_coords) const {
        QVec out(dim, Rat(0));
        for (int i = 0; i < algebra->dim; ++i)
            if (!is_zero(a_coords[i])) add_scaled(out, apply_mat(right[i], m), a_coords[i]);
        return out;
    }
};

/// Unital actions, multiplicativity, and the two-sided compatibility
/// (a.m).b = a.(m.b) on all basis pairs.
inline VerificationReport validate_bimodule(const Bimodule& m) {
    const std::string name = "validate_bimodule";
    const auto& a = *m.algebra;
    QMat unit_l(m.dim, m.dim), unit_r(m.dim, m.dim);
    for (int i = 0; i < a.dim; ++i) {
        if (!is_zero(a.unit[i])) {
            for (int r = 0; r < m.dim; ++r)
                for (int c = 0; c < m.dim; ++c) {
                    unit_l.a[r][c] += a.unit[i] * m.left[i].a[r][c];
                    unit_r.a[r][c] += a.unit[i] * m.right[i].a[r][c];
                }
        }
    }
    if (!(unit_l == QMat::identity(m.dim)) || !(unit_r == QMat::identity(m.dim)))
        return VerificationReport::fail(name, Json{{"reason", "action not unital"}});
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            QMat lhs(m.dim, m.dim), rhs_l(m.dim, m.dim), rhs_r(m.dim, m.dim);
            for (const auto& [k, c] : a.basis_product(i, j)) {
                for (int r = 0; r < m.dim; ++r)
                    for (int s = 0; s < m.dim; ++s) {
                        rhs_l.a[r][s] += c * m.left[k].a[r][s];
                        rhs_r.a[r][s] += c * m.right[k].a[r][s];
                    }
            }
            if (!(matmul(m.left[i], m.left[j]) == rhs_l))
                return VerificationReport::fail(
                    name, Json{{"reason", "left action not multiplicative"},
                               {"pair", Json::array({i, j})}});
            if (!(matmul(m.right[j], m.right[i]) == rhs_r))
                return VerificationReport::fail(
                    name, Json{{"reason", "right action not multiplicative"},
                               {"pair", Json::array({i, j})}});
            if (!(matmul(m.left[i], m.right[j]) == matmul(m.right[j], m.left[i])))
                return VerificationReport::fail(
                    name, Json{{"reason", "left and right actions do not commute"},
                               {"pair", Json::array({i, j})}});
        }
    return VerificationReport::pass(name);
}

inline Bimodule regular_bimodule(const FiniteGradedAlgebra& a) {
    Bimodule m{&a, a.dim, {}, {}};
    for (int i = 0; i < a.dim; ++i) {
        m.left.push_back(a.left_mult_matrix(a.basis_vec(i)));
        m.right.push_back(a.right_mult_matrix(a.basis_vec(i)));
    }
    return m;
}

/// Noncommutative Kaehler 1-forms: ker(m: A(x)A -> A) with the outer
/// bimodule actions a.(x(x)y).b = ax (x) yb, plus the universal derivation
/// delta(a) = 1(x)a - a(x)1. Tensor coordinates: x(x)y at index x*dim + y.
struct KaehlerForms {
    Bimodule omega;
    std::vector<QVec> embedding;  // omega basis vectors inside A(x)A
    QMat delta;                   // omega.dim x A.dim
};

inline KaehlerForms kaehler_one_forms(const FiniteGradedAlgebra& a) {
    const int d = a.dim;
    QMat mult(d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (const auto& [k, c] : a.basis_product(i, j)) mult.a[k][i * d + j] += c;
    std::vector<QVec> kernel = nullspace(std::move(mult));
    const int m = static_cast<int>(kernel.size());

    KaehlerForms out;
    out.embedding = kernel;
    out.omega.algebra = &a;
    out.omega.dim = m;

    // actions on A(x)A, expressed back in the kernel basis
    auto express = [&](const QVec& tensor_vec) {
        auto coords = coordinates_in_basis(kernel, tensor_vec);
        if (!coords) throw StructuralError("kernel of multiplication not closed under action");
        return *coords;
    };
    for (int b = 0; b < d; ++b) {
        QMat l(m, m), r(m, m);
        for (int col = 0; col < m; ++col) {
            QVec lv(d * d, Rat(0)), rv(d * d, Rat(0));
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    const Rat& q = kernel[col][x * d + y];
                    if (is_zero(q)) continue;
                    for (const auto& [k, c] : a.basis_product(b, x)) lv[k * d + y] += c * q;
                    for (const auto& [k, c] : a.basis_product(y, b)) rv[x * d + k] += c * q;
                }
            QVec lc = express(lv), rc = express(rv);
            for (int row = 0; row < m; ++row) {
                l.a[row][col] = lc[row];
                r.a[row][col] = rc[row];
            }
        }
        out.omega.left.push_back(std::move(l));
        out.omega.right.push_back(std::move(r));
    }

    out.delta = QMat(m, d);
    for (int i = 0; i < d; ++i) {
        QVec dv(d * d, Rat(0));
        // 1 (x) b_i - b_i (x) 1
        for (int u = 0; u < d; ++u) {
            if (!is_zero(a.unit[u])) {
                dv[u * d + i] += a.unit[u];
                dv[i * d + u] -= a.unit[u];
            }
        }
        QVec coords = express(dv);
        for (int row = 0; row < m; ++row) out.delta.a[row][i] = coords[row];
    }
    return out;
}

/// The full solution space of the Leibniz system D(ab) = D(a)b + aD(b),
/// as matrices M.dim x A.dim, canonical basis.
struct DerivationSpace {
    const FiniteGradedAlgebra* algebra = nullptr;
    const Bimodule* target = nullptr;
    std::vector<QMat> basis;

    int dim() const { return static_cast<int>(basis.size()); }
};

inline DerivationSpace derivations(const FiniteGradedAlgebra& a, const Bimodule& m) {
    const int n = a.dim, md = m.dim;
    EchelonSpan rows(n * md);
    // unknown D[s][k] at index k*md + s
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < md; ++r) {
                SparseRow row;
                std::map<int, Rat> acc;
                for (const auto& [k, c] : a.basis_product(i, j)) acc[k * md + r] += c;
                for (int s = 0; s < md; ++s) {
                    if (!is_zero(m.right[j].a[r][s])) acc[i * md + s] -= m.right[j].a[r][s];
                    if (!is_zero(m.left[i].a[r][s])) acc[j * md + s] -= m.left[i].a[r][s];
                }
                for (const auto& [col, q] : acc)
                    if (!is_zero(q)) row.emplace_back(col, q);
                if (!row.empty()) rows.insert(std::move(row));
            }
    DerivationSpace out{&a, &m, {}};
    for (const QVec& v : nullspace_of_span(rows)) {
        QMat d(md, n);
        for (int k = 0; k < n; ++k)
            for (int s = 0; s < md; ++s) d.a[s][k] = v[k * md + s];
        out.basis.push_back(std::move(d));
    }
    return out;
}

inline QVec flatten(const QMat& m) {
    QVec v;
    v.reserve(m.rows * m.cols);
    for (const auto& row : m.a)
        for (const auto& q : row) v.push_back(q);
    return v;
}

/// HH^0 (= center), inner derivations, HH^1 = dim Der - dim Inn, and the
/// exactness certificate dim A - dim HH^0 = dim Inn of the four-term
/// sequence 0 -> Z(A) -> A -> Der(A) -> HH^1 -> 0.
struct HochschildLow {
    std::vector<QVec> hh0;
    DerivationSpace der;
    std::vector<QMat> inner_basis;
    int hh1 = 0;
    VerificationReport certificate{"hochschild_exactness", Verdict::Pass, Json::object()};
};

inline HochschildLow hochschild_low(const FiniteGradedAlgebra& a, const Bimodule* reg = nullptr) {
    HochschildLow out;
    out.hh0 = center_basis(a);
    Bimodule local;
    if (!reg) {
        local = regular_bimodule(a);
        reg = &local;
    }
    out.der = derivations(a, *reg);

    EchelonSpan der_span(a.dim * a.dim);
    for (const auto& d : out.der.basis) der_span.insert(flatten(d));

    EchelonSpan inner(a.dim * a.dim);
    bool inner_in_der = true;
    for (int i = 0; i < a.dim; ++i) {
        QMat ad(a.dim, a.dim);
        QMat l = a.left_mult_matrix(a.basis_vec(i));
        QMat r = a.right_mult_matrix(a.basis_vec(i));
        for (int x = 0; x < a.dim; ++x)
            for (int y = 0; y < a.dim; ++y) ad.a[x][y] = l.a[x][y] - r.a[x][y];
        QVec flat = flatten(ad);
        if (!der_span.contains(flat)) inner_in_der = false;
        if (inner.insert(flat)) out.inner_basis.push_back(std::move(ad));
    }
    out.hh1 = out.der.dim() - inner.rank();

    const int lhs = a.dim - static_cast<int>(out.hh0.size());
    Json cert{{"dim_algebra", a.dim},
              {"dim_hh0", out.hh0.size()},
              {"dim_inner", inner.rank()},
              {"dim_der", out.der.dim()},
              {"hh1", out.hh1}};
    if (lhs != inner.rank() || !inner_in_der || out.hh1 < 0)
        out.certificate = VerificationReport::fail("hochschild_exactness", cert);
    else
        out.certificate = VerificationReport::pass("hochschild_exactness", cert);
    return out;
}

/// The tangent object computed both ways: Der(A, A) and the bimodule dual
/// Hom_{A-bimod}(Omega^1, A), with the explicit isomorphism phi -> phi o
/// delta and its inverse.
struct TangentObject {
    DerivationSpace der;
    std::vector<QMat> hom_basis;  // maps Omega^1 -> A, shape A.dim x omega.dim
    QMat phi;                     // coordinates of phi(hom_i) in der basis
    QMat phi_inverse;
    bool verified = false;
};

inline TangentObject tangent_object(const FiniteGradedAlgebra& a, const KaehlerForms& kf,
                                    const Bimodule& reg) {
    TangentObject out;
    out.der = derivations(a, reg);

    const int n = a.dim, m = kf.omega.dim;
    // unknown H (n x m): H . Lomega_b = L_b . H and H . Romega_b = R_b . H
    EchelonSpan rows(n * m);
    for (int b = 0; b < n; ++b) {
        const QMat lb = a.left_mult_matrix(a.basis_vec(b));
        const QMat rb = a.right_mult_matrix(a.basis_vec(b));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c) {
                std::map<int, Rat> acc_l, acc_r;
                for (int s = 0; s < m; ++s) {
                    if (!is_zero(kf.omega.left[b].a[s][c])) acc_l[r * m + s] += kf.omega.left[b].a[s][c];
                    if (!is_zero(kf.omega.right[b].a[s][c])) acc_r[r * m + s] += kf.omega.right[b].a[s][c];
                }
                for (int s = 0; s < n; ++s) {
                    if (!is_zero(lb.a[r][s])) acc_l[s * m + c] -= lb.a[r][s];
                    if (!is_zero(rb.a[r][s])) acc_r[s * m + c] -= rb.a[r][s];
                }
                SparseRow row_l, row_r;
                for (const auto& [col, q] : acc_l)
                    if (!is_zero(q)) row_l.emplace_back(col, q);
                for (const auto& [col, q] : acc_r)
                    if (!is_zero(q)) row_r.emplace_back(col, q);
                if (!row_l.empty()) rows.insert(std::move(row_l));
                if (!row_r.empty()) rows.insert(std::move(row_r));
            }
    }
    for (const QVec& v : nullspace_of_span(rows)) {
        QMat h(n, m);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c) h.a[r][c] = v[r * m + c];
        out.hom_basis.push_back(std::move(h));
    }

    // phi: H -> H o delta, in coordinates of the derivation basis
    std::vector<QVec> der_flat;
    for (const auto& d : out.der.basis) der_flat.push_back(flatten(d));
    out.phi = QMat(out.der.dim(), static_cast<int>(out.hom_basis.size()));
    bool ok = static_cast<int>(out.hom_basis.size()) == out.der.dim();
    for (std::size_t i = 0; i < out.hom_basis.size(); ++i) {
        QMat composed = matmul(out.hom_basis[i], kf.delta);
        auto coords = coordinates_in_basis(der_flat, flatten(composed));
        if (!coords) {
            ok = false;
            break;
        }
        for (int r = 0; r < out.der.dim(); ++r) out.phi.a[r][static_cast<int>(i)] = (*coords)[r];
    }
    if (ok) {
        auto inv = inverse(out.phi);
        if (inv) {
            out.phi_inverse = *inv;
            out.verified = matmul(out.phi, out.phi_inverse) == QMat::identity(out.der.dim());
        } else {
            ok = false;
        }
    }
    out.verified = ok && out.verified;
    return out;
}

/// Homogeneous derivation components: D with D(A^g) <= A^{gh}. The
/// components over occurring h are independent and sum to Der(A, A).
struct GradedDerivationDecomposition {
    std::vector<std::pair<GroupElem, std::vector<QMat>>> components;
    int total_der_dim = 0;
};

inline std::vector<QMat> graded_derivations(const FiniteGradedAlgebra& a, const GroupElem& h,
                                            const DerivationSpace& der) {
    // coordinates (r, i) must vanish unless deg_r = deg_i * h
    std::vector<int> kill;
    const GroupElem hn = a.group.normalize(h);
    for (int r = 0; r < a.dim; ++r)
        for (int i = 0; i < a.dim; ++i)
            if (a.degrees[r] != a.group.mul(a.degrees[i], hn)) kill.push_back(r * a.dim + i);
    std::vector<QVec> flat;
    for (const auto& d : der.basis) flat.push_back(flatten(d));
    std::vector<QMat> out;
    for (const QVec& v : subspace_with_zero_coords(flat, kill)) {
        QMat d(a.dim, a.dim);
        for (int r = 0; r < a.dim; ++r)
            for (int i = 0; i < a.dim; ++i) d.a[r][i] = v[r * a.dim + i];
        out.push_back(std::move(d));
    }
    return out;
}

inline GradedDerivationDecomposition graded_derivation_decomposition(const FiniteGradedAlgebra& a) {
    Bimodule reg = regular_bimodule(a);
    DerivationSpace der = derivations(a, reg);
    GradedDerivationDecomposition out;
    out.total_der_dim = der.dim();
    std::vector<GroupElem> shifts;
    for (int r = 0; r < a.dim; ++r)
        for (int i = 0; i < a.dim; ++i)
            shifts.push_back(a.group.mul(a.degrees[r], a.group.inverse(a.degrees[i])));
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    for (const GroupElem& h : shifts) {
        auto comp = graded_derivations(a, h, der);
        if (!comp.empty()) out.components.emplace_back(h, std::move(comp));
    }
    return out;
}

}  // namespace pivar
