#pragma once

#include "pivar/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pivar {

using QVec = std::vector<Rat>;

/// Dense exact-rational matrix, row major.
struct QMat {
    int rows = 0;
    int cols = 0;
    std::vector<QVec> a;

    QMat() = default;
    QMat(int r, int c) : rows(r), cols(c), a(r, QVec(c, Rat(0))) {}

    static QMat identity(int n) {
        QMat m(n, n);
        for (int i = 0; i < n; ++i) m.a[i][i] = 1;
        return m;
    }

    Rat& at(int r, int c) { return a[r][c]; }
    const Rat& at(int r, int c) const { return a[r][c]; }

    bool operator==(const QMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline QVec apply_mat(const QMat& m, const QVec& v) {
    QVec out(m.rows, Rat(0));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!is_zero(m.a[i][j]) && !is_zero(v[j])) out[i] += m.a[i][j] * v[j];
    return out;
}

inline QMat matmul(const QMat& x, const QMat& y) {
    QMat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (is_zero(x.a[i][k])) continue;
            for (int j = 0; j < y.cols; ++j)
                if (!is_zero(y.a[k][j])) out.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return out;
}

inline bool is_zero_vec(const QVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& q) { return is_zero(q); });
}

inline QVec scaled(const QVec& v, const Rat& c) {
    QVec out(v);
    for (auto& x : out) x *= c;
    return out;
}

inline void add_scaled(QVec& dst, const QVec& src, const Rat& c) {
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (!is_zero(src[i])) dst[i] += c * src[i];
}

/// In-place reduced row echelon form; returns the pivot columns in order.
inline std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int r = row; r < m.rows; ++r)
            if (!is_zero(m.a[r][col])) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m.a[row], m.a[piv]);
        const Rat lead = m.a[row][col];
        for (int c = col; c < m.cols; ++c) m.a[row][c] /= lead;
        for (int r = 0; r < m.rows; ++r) {
            if (r == row || is_zero(m.a[r][col])) continue;
            const Rat f = m.a[r][col];
            for (int c = col; c < m.cols; ++c) m.a[r][c] -= f * m.a[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int rank(QMat m) { return static_cast<int>(rref(m).size()); }

/// Canonical nullspace basis (one vector per free column, unit there,
/// ordered by free column index).
inline std::vector<QVec> nullspace(QMat m) {
    const std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<QVec> basis;
    for (int f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(m.cols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.a[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b, if any.
inline std::optional<QVec> solve(const QMat& A, const QVec& b) {
    QMat aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        aug.a[i] = A.a[i];
        aug.a[i].push_back(b[i]);
    }
    const std::vector<int> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt;
    QVec x(A.cols, Rat(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.a[i][A.cols];
    return x;
}

inline std::optional<QMat> inverse(const QMat& A) {
    if (A.rows != A.cols) return std::nullopt;
    QMat aug(A.rows, 2 * A.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.a[i][j] = A.a[i][j];
        aug.a[i][A.cols + i] = 1;
    }
    const std::vector<int> pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != A.rows || (!pivots.empty() && pivots.back() >= A.cols))
        return std::nullopt;
    QMat inv(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) inv.a[i][j] = aug.a[i][A.cols + j];
    return inv;
}

using SparseRow = std::vector<std::pair<int, Rat>>;  // sorted by column

inline SparseRow to_sparse(const QVec& v) {
    SparseRow r;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) r.emplace_back(static_cast<int>(i), v[i]);
    return r;
}

inline QVec to_dense(const SparseRow& r, int cols) {
    QVec v(cols, Rat(0));
    for (const auto& [c, q] : r) v[c] = q;
    return v;
}

/// Incremental row space in echelon form. Rows are stored sparse and keyed
/// by pivot column; the reduced canonical basis is produced on demand.
class EchelonSpan {
  public:
    explicit EchelonSpan(int cols) : cols_(cols) {}

    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Reduces `row` against the current span; inserts the remainder if it is
    /// nonzero. Returns true when the rank grew.
    bool insert(SparseRow row) {
        reduce(row);
        if (row.empty()) return false;
        const Rat lead = row.front().second;
        for (auto& [c, q] : row) q /= lead;
        rows_.emplace(row.front().first, std::move(row));
        return true;
    }

    bool insert(const QVec& v) { return insert(to_sparse(v)); }

    bool contains(SparseRow row) const {
        reduce(row);
        return row.empty();
    }
    bool contains(const QVec& v) const { return contains(to_sparse(v)); }

    /// Remainder of `row` after reduction against the span (zero iff
    /// contained; a deterministic linear section of the quotient).
    SparseRow residue(SparseRow row) const {
        reduce(row);
        return row;
    }

    bool contains_span(const EchelonSpan& other) const {
        for (const auto& [piv, row] : other.rows_)
            if (!contains(row)) return false;
        return true;
    }

    /// Canonical reduced basis (RREF rows ordered by pivot column).
    std::vector<QVec> rref_basis() const {
        QMat m(rank(), cols_);
        int i = 0;
        for (const auto& [piv, row] : rows_) {
            for (const auto& [c, q] : row) m.a[i][c] = q;
            ++i;
        }
        rref(m);
        return m.a;
    }

  private:
    void reduce(SparseRow& row) const {
        while (!row.empty()) {
            const auto it = rows_.find(row.front().first);
            if (it == rows_.end()) return;
            axpy(row, it->second, -row.front().second);
        }
    }

    /// row += c * other, keeping the sparse/sorted invariant.
    static void axpy(SparseRow& row, const SparseRow& other, const Rat& c) {
        SparseRow out;
        out.reserve(row.size() + other.size());
        std::size_t i = 0, j = 0;
        while (i < row.size() || j < other.size()) {
            if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
                out.push_back(row[i++]);
            } else if (i == row.size() || other[j].first < row[i].first) {
                out.emplace_back(other[j].first, c * other[j].second);
                ++j;
            } else {
                Rat q = row[i].second + c * other[j].second;
                if (!is_zero(q)) out.emplace_back(row[i].first, std::move(q));
                ++i;
                ++j;
            }
        }
        row = std::move(out);
    }

    int cols_;
    std::map<int, SparseRow> rows_;
};

inline bool same_span(const EchelonSpan& a, const EchelonSpan& b) {
    return a.rank() == b.rank() && a.contains_span(b);
}

inline SparseRow reduce_against(const EchelonSpan& span, SparseRow row) {
    return span.residue(std::move(row));
}

/// Canonical nullspace of the row space accumulated in an EchelonSpan.
inline std::vector<QVec> nullspace_of_span(const EchelonSpan& rows) {
    QMat m(rows.rank(), rows.cols());
    auto basis = rows.rref_basis();
    for (std::size_t i = 0; i < basis.size(); ++i) m.a[i] = basis[i];
    return nullspace(std::move(m));
}

/// Vectors of `span` whose coordinates vanish at every index in `kill`
/// (used to slice a subspace along grading components).
inline std::vector<QVec> subspace_with_zero_coords(const std::vector<QVec>& span_basis,
                                                   const std::vector<int>& kill) {
    if (span_basis.empty()) return {};
    QMat constraint(static_cast<int>(kill.size()), static_cast<int>(span_basis.size()));
    for (std::size_t r = 0; r < kill.size(); ++r)
        for (std::size_t j = 0; j < span_basis.size(); ++j) constraint.a[r][j] = span_basis[j][kill[r]];
    std::vector<QVec> out;
    for (const QVec& combo : nullspace(constraint)) {
        QVec v(span_basis.front().size(), Rat(0));
        for (std::size_t j = 0; j < span_basis.size(); ++j) add_scaled(v, span_basis[j], combo[j]);
        out.push_back(std::move(v));
    }
    return out;
}

/// Coordinates of v in the given (independent) basis, if v lies in its span.
inline std::optional<QVec> coordinates_in_basis(const std::vector<QVec>& basis, const QVec& v) {
    if (basis.empty()) return is_zero_vec(v) ? std::optional<QVec>(QVec{}) : std::nullopt;
    QMat m(static_cast<int>(v.size()), static_cast<int>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i) m.a[i][j] = basis[j][i];
    return solve(m, v);
}

}  // namespace pivar
