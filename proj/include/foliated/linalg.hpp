#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foliated/errors.hpp"
#include "foliated/scalar.hpp"

namespace foliated {

// Sorted (index, value) pairs with no zero values.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

inline void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
    if (a.is_zero() || x.empty()) return;
    SparseVec out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(std::move(y[i++]));
        } else if (i == y.size() || x[j].first < y[i].first) {
            out.emplace_back(x[j].first, a * x[j].second);
            ++j;
        } else {
            Scalar v = y[i].second + a * x[j].second;
            if (!v.is_zero()) out.emplace_back(y[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

inline SparseVec scaled(const SparseVec& x, const Scalar& a) {
    SparseVec r;
    if (a.is_zero()) return r;
    r.reserve(x.size());
    for (auto& [k, v] : x) r.emplace_back(k, v * a);
    return r;
}

inline Scalar entry(const SparseVec& x, std::size_t k) {
    auto it = std::lower_bound(x.begin(), x.end(), k, [](const auto& e, std::size_t key) { return e.first < key; });
    if (it != x.end() && it->first == k) return it->second;
    return Scalar();
}

inline SparseVec make_sparse(std::map<std::size_t, Scalar> m) {
    SparseVec r;
    for (auto& [k, v] : m)
        if (!v.is_zero()) r.emplace_back(k, std::move(v));
    return r;
}

class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        Scalar value;
    };

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

    // Duplicate triplets are summed; out-of-range indices throw ShapeError.
    SparseMatrix(std::size_t rows, std::size_t cols, const std::vector<Triplet>& triplets) : SparseMatrix(rows, cols) {
        std::vector<std::map<std::size_t, Scalar>> acc(cols);
        for (const auto& t : triplets) {
            if (t.row >= rows || t.col >= cols)
                throw ShapeError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") outside " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
            acc[t.col][t.row] += t.value;
        }
        for (std::size_t c = 0; c < cols; ++c) columns_[c] = make_sparse(std::move(acc[c]));
    }

    static SparseMatrix from_columns(std::size_t rows, std::vector<SparseVec> cols) {
        SparseMatrix m(rows, cols.size());
        for (auto& c : cols)
            for (auto& e : c)
                if (e.first >= rows) throw ShapeError("column entry outside row range");
        m.columns_ = std::move(cols);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const SparseVec& column(std::size_t c) const { return columns_.at(c); }
    const std::vector<SparseVec>& columns() const { return columns_; }

    void set_column(std::size_t c, SparseVec v) {
        for (auto& e : v)
            if (e.first >= rows_) throw ShapeError("column entry outside row range");
        columns_.at(c) = std::move(v);
    }

    Scalar at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw ShapeError("index outside matrix");
        return entry(columns_[c], r);
    }

    std::vector<Triplet> triplets() const {
        std::vector<Triplet> t;
        for (std::size_t c = 0; c < cols_; ++c)
            for (auto& [r, v] : columns_[c]) t.push_back({r, c, v});
        return t;
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (auto& c : columns_) n += c.size();
        return n;
    }
    bool is_zero() const { return nonzeros() == 0; }

    SparseVec apply(const SparseVec& x) const {
        SparseVec y;
        for (auto& [k, v] : x) {
            if (k >= cols_) throw ShapeError("vector index outside matrix columns");
            axpy(y, v, columns_[k]);
        }
        return y;
    }

    SparseMatrix transpose() const {
        std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows(rows_);
        for (std::size_t c = 0; c < cols_; ++c)
            for (auto& [r, v] : columns_[c]) rows[r].emplace_back(c, v);
        return from_columns(cols_, std::move(rows));
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_)
            throw ShapeError("cannot multiply " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " by " +
                             std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
        SparseMatrix r(a.rows_, b.cols_);
        for (std::size_t c = 0; c < b.cols_; ++c) r.columns_[c] = a.apply(b.columns_[c]);
        return r;
    }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t c = 0; c < a.cols_; ++c) {
            if (a.columns_[c].size() != b.columns_[c].size()) return false;
            for (std::size_t k = 0; k < a.columns_[c].size(); ++k)
                if (a.columns_[c][k].first != b.columns_[c][k].first || a.columns_[c][k].second != b.columns_[c][k].second)
                    return false;
        }
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseVec> columns_;
};

// Reduced row echelon form of a list of row vectors over `width` coordinates.
// Pivot rows are normalized to a leading 1 and cleared above and below.
struct Echelon {
    std::size_t width = 0;
    std::vector<SparseVec> rows;          // one per pivot, ordered by pivot column
    std::vector<std::size_t> pivots;      // pivot column of each row
};

namespace detail {

inline Echelon gauss_jordan(std::vector<SparseVec> rows, std::size_t width) {
    Echelon e;
    e.width = width;
    std::map<std::size_t, std::size_t> pivot_row;  // pivot column -> index in e.rows
    for (auto& r : rows) {
        // reduce against existing pivots
        SparseVec v = std::move(r);
        bool changed = true;
        while (changed && !v.empty()) {
            changed = false;
            for (std::size_t k = 0; k < v.size(); ++k) {
                auto it = pivot_row.find(v[k].first);
                if (it != pivot_row.end()) {
                    Scalar f = -v[k].second;
                    axpy(v, f, e.rows[it->second]);
                    changed = true;
                    break;
                }
            }
        }
        if (v.empty()) continue;
        std::size_t pc = v.front().first;
        Scalar inv = v.front().second.inverse();
        for (auto& x : v) x.second *= inv;
        for (auto& other : e.rows) {
            Scalar c = entry(other, pc);
            if (!c.is_zero()) axpy(other, -c, v);
        }
        pivot_row[pc] = e.rows.size();
        e.rows.push_back(std::move(v));
        e.pivots.push_back(pc);
    }
    // order by pivot column
    std::vector<std::size_t> order(e.rows.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return e.pivots[a] < e.pivots[b]; });
    Echelon s;
    s.width = width;
    for (auto k : order) {
        s.rows.push_back(std::move(e.rows[k]));
        s.pivots.push_back(e.pivots[k]);
    }
    return s;
}

}  // namespace detail

inline Echelon row_echelon(const SparseMatrix& m) {
    return detail::gauss_jordan(m.transpose().columns(), m.cols());
}

struct RankKernel {
    std::size_t rank = 0;
    std::vector<SparseVec> kernel;  // basis of the null space, one vector per free column
};

inline RankKernel rank_kernel(const SparseMatrix& m) {
    Echelon e = row_echelon(m);
    RankKernel rk;
    rk.rank = e.rows.size();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    // column f of the reduced rows
    std::vector<std::map<std::size_t, Scalar>> by_free(m.cols());
    for (std::size_t r = 0; r < e.rows.size(); ++r)
        for (auto& [c, v] : e.rows[r])
            if (!is_pivot[c]) by_free[c][e.pivots[r]] = -v;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        auto col = by_free[f];
        col[f] = Scalar(1);
        rk.kernel.push_back(make_sparse(std::move(col)));
    }
    return rk;
}

inline std::size_t rank(const SparseMatrix& m) {
    // eliminate along the shorter side
    if (m.rows() < m.cols()) return detail::gauss_jordan(m.columns(), m.rows()).rows.size();
    return row_echelon(m).rows.size();
}

// Fraction-free (Bareiss) rank with reversed row and column order; an
// elimination route independent of gauss_jordan.
inline std::size_t bareiss_rank(const SparseMatrix& m) {
    std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<Scalar>> a(R, std::vector<Scalar>(C));
    for (std::size_t c = 0; c < C; ++c)
        for (auto& [r, v] : m.column(c)) a[R - 1 - r][C - 1 - c] = v;
    Scalar prev(1);
    std::size_t rk = 0;
    for (std::size_t c = 0; c < C && rk < R; ++c) {
        std::size_t p = rk;
        while (p < R && a[p][c].is_zero()) ++p;
        if (p == R) continue;
        std::swap(a[p], a[rk]);
        Scalar inv = prev.inverse();
        for (std::size_t i = rk + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) a[i][j] = (a[rk][c] * a[i][j] - a[i][c] * a[rk][j]) * inv;
            a[i][c] = Scalar();
        }
        prev = a[rk][c];
        ++rk;
    }
    return rk;
}

// Rank of the span of a family of vectors in a space of dimension `width`.
inline std::size_t span_rank(const std::vector<SparseVec>& vecs, std::size_t width) {
    return detail::gauss_jordan(vecs, width).rows.size();
}

inline std::vector<SparseVec> span_basis(const std::vector<SparseVec>& vecs, std::size_t width) {
    return detail::gauss_jordan(vecs, width).rows;
}

// Echelon basis grown one vector at a time.
class IncrementalSpan {
public:
    // Returns true when v is not already in the span.
    bool insert(SparseVec v) {
        while (!v.empty()) {
            auto it = basis_.find(v.front().first);
            if (it == basis_.end()) break;
            axpy(v, -(v.front().second / it->second.front().second), it->second);
        }
        if (v.empty()) return false;
        std::size_t pivot = v.front().first;
        basis_.emplace(pivot, std::move(v));
        return true;
    }
    std::size_t rank() const { return basis_.size(); }

private:
    std::map<std::size_t, SparseVec> basis_;
};

// dim(Z / B) for subspaces given by spanning sets; B must lie inside Z.
inline std::size_t quotient_dim(const std::vector<SparseVec>& z, const std::vector<SparseVec>& b, std::size_t width) {
    std::size_t rz = span_rank(z, width);
    std::vector<SparseVec> both = z;
    both.insert(both.end(), b.begin(), b.end());
    std::size_t rzb = span_rank(both, width);
    if (rzb != rz) throw ComplexViolation("image is not contained in kernel (d^2 != 0)");
    return rz - span_rank(b, width);
}

// dim ker(out) / im(in) for a composable pair; checks out * in == 0.
inline std::size_t homology_dim(const SparseMatrix& out, const SparseMatrix& in) {
    if (out.cols() != in.rows())
        throw ShapeError("homology of non-composable pair: " + std::to_string(in.rows()) + " vs " + std::to_string(out.cols()));
    if (!(out * in).is_zero()) throw ComplexViolation("composite of consecutive differentials is nonzero (d^2 != 0)");
    return out.cols() - rank(out) - rank(in);
}

// Coefficients c with sum_k c_k vecs[k] = target, or nullopt.
inline std::optional<std::vector<Scalar>> solve_in_span(const std::vector<SparseVec>& vecs, const SparseVec& target,
                                                        std::size_t width) {
    // augment each vector with a tag coordinate width + k to track combinations
    std::vector<SparseVec> rows;
    rows.reserve(vecs.size());
    for (std::size_t k = 0; k < vecs.size(); ++k) {
        SparseVec v = vecs[k];
        v.emplace_back(width + k, Scalar(1));
        rows.push_back(std::move(v));
    }
    Echelon e = detail::gauss_jordan(std::move(rows), width + vecs.size());
    // reduce target by pivots in the original coordinates
    SparseVec t = target;
    for (auto& x : t) x.second = -x.second;
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] >= width) break;
        Scalar c = entry(t, e.pivots[r]);
        if (!c.is_zero()) axpy(t, -c, e.rows[r]);
    }
    // t now is -target + sum(coeffs * vec) restricted; the part below width must vanish
    for (auto& [k, v] : t)
        if (k < width) return std::nullopt;
    std::vector<Scalar> coeffs(vecs.size());
    for (auto& [k, v] : t) coeffs[k - width] = v;
    return coeffs;
}

}  // namespace foliated
