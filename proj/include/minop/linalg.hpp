#pragma once

#include <minop/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace minop {

using RatVec = std::vector<Rat>;

/*
 * Sparse exact-rational matrix. Rows are ordered maps column -> value;
 * zero entries are never stored. Everything downstream (cohomology,
 * sections, lifting systems) reduces to rref/kernel/solve on these.
 *
 * Elimination is fraction-free (Bareiss): rows are first scaled to integer
 * vectors, the forward pass keeps entries equal to minors of the original
 * matrix, and only the final Jordan normalization divides by pivots. This
 * bounds intermediate coefficient growth at desk scale.
 */
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, Rat(1));
        return m;
    }

    static RatMatrix dense(const std::vector<std::vector<Rat>>& entries) {
        int r = static_cast<int>(entries.size());
        int c = r == 0 ? 0 : static_cast<int>(entries[0].size());
        RatMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (entries[i][j] != 0) m.set(i, j, entries[i][j]);
        return m;
    }

    static RatMatrix from_rows(int cols, const std::vector<RatVec>& rows) {
        RatMatrix m(static_cast<int>(rows.size()), cols);
        for (int i = 0; i < m.rows_; ++i)
            for (int j = 0; j < cols; ++j)
                if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
        return m;
    }

    static RatMatrix from_columns(int rows, const std::vector<RatVec>& cols) {
        RatMatrix m(rows, static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols_; ++j)
            for (int i = 0; i < rows; ++i)
                if (cols[j][i] != 0) m.set(i, j, cols[j][i]);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Rat& at(int r, int c) const {
        static const Rat zero(0);
        auto it = data_[r].find(c);
        return it == data_[r].end() ? zero : it->second;
    }

    void set(int r, int c, const Rat& v) {
        if (v == 0)
            data_[r].erase(c);
        else
            data_[r][c] = v;
    }

    void add_to(int r, int c, const Rat& v) {
        if (v == 0) return;
        auto it = data_[r].find(c);
        if (it == data_[r].end()) {
            data_[r][c] = v;
        } else {
            it->second += v;
            if (it->second == 0) data_[r].erase(it);
        }
    }

    const std::map<int, Rat>& row(int r) const { return data_[r]; }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

    RatVec apply(const RatVec& x) const {
        RatVec y(rows_, Rat(0));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : data_[i]) y[i] += v * x[c];
        return y;
    }

    RatMatrix mul(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
        RatMatrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [k, v] : data_[i])
                for (const auto& [j, w] : o.data_[k]) out.add_to(i, j, v * w);
        return out;
    }

    RatMatrix add(const RatMatrix& o, const Rat& scale = Rat(1)) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error("matrix sum shape mismatch");
        RatMatrix out = *this;
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : o.data_[i]) out.add_to(i, c, scale * v);
        return out;
    }

    RatMatrix transpose() const {
        RatMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : data_[i]) out.set(c, i, v);
        return out;
    }

    /// [this | right], matching row counts.
    RatMatrix hstack(const RatMatrix& right) const {
        if (rows_ != right.rows_) throw Error("hstack row mismatch");
        RatMatrix out(rows_, cols_ + right.cols_);
        out.data_ = data_;
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : right.data_[i]) out.set(i, cols_ + c, v);
        return out;
    }

    /// [this ; below], matching column counts.
    RatMatrix vstack(const RatMatrix& below) const {
        if (cols_ != below.cols_) throw Error("vstack column mismatch");
        RatMatrix out(rows_ + below.rows_, cols_);
        for (int i = 0; i < rows_; ++i) out.data_[i] = data_[i];
        for (int i = 0; i < below.rows_; ++i) out.data_[rows_ + i] = below.data_[i];
        return out;
    }

    RatVec row_dense(int r) const {
        RatVec v(cols_, Rat(0));
        for (const auto& [c, val] : data_[r]) v[c] = val;
        return v;
    }

    RatVec column_dense(int c) const {
        RatVec v(rows_, Rat(0));
        for (int i = 0; i < rows_; ++i) v[i] = at(i, c);
        return v;
    }

private:
    int rows_, cols_;
    std::vector<std::map<int, Rat>> data_;
};

namespace detail {

using SparseRow = std::map<int, Rat>;

inline void scale_row_integral(SparseRow& row) {
    if (row.empty()) return;
    Int l(1);
    for (const auto& [c, v] : row) l = lcm(l, denominator(v));
    if (l != 1)
        for (auto& [c, v] : row) v *= l;
}

/// row_j := (piv * row_j − factor * row_piv) / prev, sparsely.
inline void bareiss_update(SparseRow& rj, const SparseRow& rp, const Rat& piv,
                           const Rat& factor, const Rat& prev) {
    SparseRow out;
    auto it = rj.begin();
    auto ip = rp.begin();
    while (it != rj.end() || ip != rp.end()) {
        int c;
        Rat val;
        if (ip == rp.end() || (it != rj.end() && it->first < ip->first)) {
            c = it->first;
            val = piv * it->second;
            ++it;
        } else if (it == rj.end() || ip->first < it->first) {
            c = ip->first;
            val = -factor * ip->second;
            ++ip;
        } else {
            c = it->first;
            val = piv * it->second - factor * ip->second;
            ++it;
            ++ip;
        }
        if (val != 0) out[c] = val / prev;
    }
    rj = std::move(out);
}

}  // namespace detail

struct RrefResult {
    RatMatrix matrix;
    std::vector<int> pivots;
    int rank() const { return static_cast<int>(pivots.size()); }
};

/// Reduced row-echelon form with ordered pivot columns. Deterministic:
/// identical inputs give bit-identical outputs.
inline RrefResult rref(const RatMatrix& m) {
    int nr = m.rows(), nc = m.cols();
    std::vector<detail::SparseRow> rows(nr);
    for (int i = 0; i < nr; ++i) {
        rows[i] = m.row(i);
        detail::scale_row_integral(rows[i]);
    }

    std::vector<int> pivots;
    Rat prev(1);
    int r = 0;
    for (int c = 0; c < nc && r < nr; ++c) {
        int found = -1;
        for (int i = r; i < nr; ++i) {
            auto it = rows[i].find(c);
            if (it != rows[i].end()) {
                found = i;
                break;
            }
        }
        if (found < 0) continue;
        std::swap(rows[r], rows[found]);
        Rat piv = rows[r][c];
        for (int j = r + 1; j < nr; ++j) {
            Rat factor(0);
            auto it = rows[j].find(c);
            if (it != rows[j].end()) factor = it->second;
            if (factor == 0 && piv == prev) continue;
            detail::bareiss_update(rows[j], rows[r], piv, factor, prev);
        }
        pivots.push_back(c);
        prev = piv;
        ++r;
    }

    // Jordan pass: unit pivots, clear entries above.
    int rank = static_cast<int>(pivots.size());
    for (int i = rank - 1; i >= 0; --i) {
        int pc = pivots[i];
        Rat piv = rows[i][pc];
        if (piv != 1)
            for (auto& [c, v] : rows[i]) v /= piv;
        for (int j = 0; j < i; ++j) {
            auto it = rows[j].find(pc);
            if (it == rows[j].end()) continue;
            Rat factor = it->second;
            detail::SparseRow out;
            auto a = rows[j].begin();
            auto b = rows[i].begin();
            while (a != rows[j].end() || b != rows[i].end()) {
                int c;
                Rat val;
                if (b == rows[i].end() || (a != rows[j].end() && a->first < b->first)) {
                    c = a->first;
                    val = a->second;
                    ++a;
                } else if (a == rows[j].end() || b->first < a->first) {
                    c = b->first;
                    val = -factor * b->second;
                    ++b;
                } else {
                    c = a->first;
                    val = a->second - factor * b->second;
                    ++a;
                    ++b;
                }
                if (val != 0) out[c] = val;
            }
            rows[j] = std::move(out);
        }
    }

    RatMatrix out(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (const auto& [c, v] : rows[i]) out.set(i, c, v);
    return {std::move(out), std::move(pivots)};
}

inline int rank(const RatMatrix& m) { return rref(m).rank(); }

/*
 * A linear subspace given by an echelon-normalized basis: the rows of
 * `basis` are in reduced row-echelon form (unit pivots, zeros above and
 * below each pivot), which makes every basis canonical for its span.
 */
struct SubspaceBasis {
    int ambient = 0;
    RatMatrix basis;          // dim x ambient, rows in rref
    std::vector<int> pivots;  // pivot column per basis row

    int dim() const { return basis.rows(); }

    static SubspaceBasis from_vectors(int ambient, const std::vector<RatVec>& vecs) {
        RrefResult r = rref(RatMatrix::from_rows(ambient, vecs));
        SubspaceBasis out;
        out.ambient = ambient;
        out.pivots = r.pivots;
        int d = r.rank();
        RatMatrix b(d, ambient);
        for (int i = 0; i < d; ++i)
            for (const auto& [c, v] : r.matrix.row(i)) b.set(i, c, v);
        out.basis = std::move(b);
        return out;
    }

    /// Residual of v after reduction by the basis; zero iff v is in the span.
    RatVec reduce(const RatVec& v) const {
        RatVec res = v;
        for (int i = 0; i < dim(); ++i) {
            Rat c = res[pivots[i]];
            if (c == 0) continue;
            for (const auto& [col, val] : basis.row(i)) res[col] -= c * val;
        }
        return res;
    }

    bool contains(const RatVec& v) const {
        for (const Rat& x : reduce(v))
            if (x != 0) return false;
        return true;
    }

    /// Coordinates of a span member w.r.t. the basis (entries at pivots).
    RatVec coords(const RatVec& v) const {
        RatVec c(dim(), Rat(0));
        for (int i = 0; i < dim(); ++i) c[i] = v[pivots[i]];
        return c;
    }
};

/// Basis of { v : m v = 0 }, echelon-normalized. dim = cols − rank.
inline SubspaceBasis kernel(const RatMatrix& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : r.pivots) is_pivot[p] = true;
    std::vector<RatVec> vecs;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols(), Rat(0));
        v[f] = 1;
        for (int i = 0; i < r.rank(); ++i) v[r.pivots[i]] = -r.matrix.at(i, f);
        vecs.push_back(std::move(v));
    }
    return SubspaceBasis::from_vectors(m.cols(), vecs);
}

/// Row space of m (equivalently: column space of m^T), echelon-normalized.
inline SubspaceBasis row_space(const RatMatrix& m) {
    std::vector<RatVec> vecs;
    for (int i = 0; i < m.rows(); ++i) vecs.push_back(m.row_dense(i));
    return SubspaceBasis::from_vectors(m.cols(), vecs);
}

/// Column space of m.
inline SubspaceBasis image(const RatMatrix& m) { return row_space(m.transpose()); }

struct QuotientSection {
    RatMatrix projection;  // quot_dim x ambient
    RatMatrix section;     // ambient x quot_dim
};

/*
 * Canonical projection/section pair for ambient / sub. The quotient is
 * coordinatized by the non-pivot coordinates of sub's echelon basis and the
 * section embeds them back, so projection * section = identity exactly and
 * every "choose a section" step downstream is deterministic.
 */
inline QuotientSection quotient_section(int ambient, const SubspaceBasis& sub) {
    if (sub.ambient != ambient) throw Error("quotient_section: ambient mismatch");
    std::vector<bool> is_pivot(ambient, false);
    for (int p : sub.pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < ambient; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    int q = static_cast<int>(free_cols.size());
    RatMatrix proj(q, ambient), sec(ambient, q);
    for (int j = 0; j < q; ++j) {
        int f = free_cols[j];
        sec.set(f, j, Rat(1));
        proj.set(j, f, Rat(1));
        for (int i = 0; i < sub.dim(); ++i) {
            Rat v = sub.basis.at(i, f);
            if (v != 0) proj.set(j, sub.pivots[i], -v);
        }
    }
    return {std::move(proj), std::move(sec)};
}

/*
 * Seed-driven variant: the section representatives are shifted by random
 * elements of sub. The projection is unchanged, so projection * section is
 * still the identity. Used only to exercise the uniqueness comparison.
 */
inline QuotientSection quotient_section_random(int ambient, const SubspaceBasis& sub,
                                               std::mt19937_64& rng) {
    QuotientSection qs = quotient_section(ambient, sub);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int j = 0; j < qs.section.cols(); ++j)
        for (int i = 0; i < sub.dim(); ++i) {
            Rat c(coeff(rng));
            if (c == 0) continue;
            for (const auto& [col, val] : sub.basis.row(i))
                qs.section.add_to(col, j, c * val);
        }
    return qs;
}

/*
 * One-time factorization for repeated exact solves of M x = b. Stores the
 * rref of [M | I], so each solve is a matrix-vector product plus a
 * consistency check on the sub-pivot rows.
 */
class LinearSolver {
public:
    explicit LinearSolver(const RatMatrix& m) : rows_(m.rows()), cols_(m.cols()) {
        RrefResult r = rref(m.hstack(RatMatrix::identity(m.rows())));
        transform_ = RatMatrix(rows_, rows_);
        reduced_ = RatMatrix(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : r.matrix.row(i)) {
                if (c < cols_)
                    reduced_.set(i, c, v);
                else
                    transform_.set(i, c - cols_, v);
            }
        for (int p : r.pivots)
            if (p < cols_) pivots_.push_back(p);
        // Rows whose M-part vanished may still carry a unit pivot in the
        // transform part; those rows are the consistency conditions.
    }

    int rank() const { return static_cast<int>(pivots_.size()); }
    const std::vector<int>& pivots() const { return pivots_; }

    /// Canonical particular solution (free coordinates zero), if consistent.
    std::optional<RatVec> solve(const RatVec& b) const {
        RatVec tb = transform_.apply(b);
        for (int i = rank(); i < rows_; ++i)
            if (tb[i] != 0) return std::nullopt;
        RatVec x(cols_, Rat(0));
        for (int i = 0; i < rank(); ++i) {
            Rat v = tb[i];
            // Subtract contributions of free columns (all zero here), so the
            // pivot coordinate is exactly the reduced rhs.
            x[pivots_[i]] = v;
        }
        return x;
    }

private:
    int rows_, cols_;
    RatMatrix reduced_, transform_;
    std::vector<int> pivots_;
};

/// Single-shot exact solve; prefer LinearSolver for repeated systems.
inline std::optional<RatVec> solve(const RatMatrix& m, const RatVec& b) {
    return LinearSolver(m).solve(b);
}

}  // namespace minop
