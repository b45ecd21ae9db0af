#pragma once

#include <minop/graded.hpp>
#include <minop/perm.hpp>

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace minop {

enum class Unitality { Unitary, Reduced };

/// Arity-degree pair |w| = (n, q) of an operad element.
struct ArityDegree {
    int n = 0;
    int q = 0;
    bool operator==(const ArityDegree&) const = default;
    bool operator<(const ArityDegree& o) const {
        return std::tie(n, q) < std::tie(o.n, o.q);
    }
};

/// w is r-tame iff q > (r+1)(1-n). Only arities >= 2 are constrained.
inline bool element_tame(ArityDegree ad, int r) {
    if (ad.n < 2)
        throw PreconditionError("element_tame: tameness constrains arities >= 2");
    return ad.q > (r + 1) * (1 - ad.n);
}

/// |w o_i w'| = (n + n' - 1, q + q').
inline ArityDegree compose_arity_degree(ArityDegree a, ArityDegree b) {
    if (a.n < 1 || b.n < 0)
        throw PreconditionError("compose_arity_degree: arity out of range");
    return {a.n + b.n - 1, a.q + b.q};
}

struct OperadBasisElt {
    int degree = 0;
    std::string label;
    /// Display template with %1..%n slot placeholders, e.g. "[%1,%2]*%3".
    std::string display;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const {
        if (ok()) return "all checks passed";
        std::string s;
        for (const auto& v : violations) s += v + "\n";
        return s;
    }
};

struct TamenessCertificate {
    std::optional<int> r;            // smallest tame level, if any <= cap
    std::vector<ArityDegree> binding;  // pairs that fail at r-1 (force r)
    int arity_bound = 0;             // certificate valid within this bound
};

/*
 * Finite table of a (connected, unitary-or-reduced) symmetric operad in
 * (co)chain complexes: per-arity graded bases, the action of the adjacent
 * transpositions, sparse partial-composition tensors, and an internal
 * differential. Everything downstream consults only this table, so every
 * answer is implicitly "within this arity bound and degree window".
 */
class OperadTable {
public:
    OperadTable(std::string name, Convention conv, Unitality unital, int arity_bound)
        : name_(std::move(name)),
          conv_(conv),
          unital_(unital),
          arity_bound_(arity_bound),
          basis_(arity_bound + 1),
          transpositions_(arity_bound + 1),
          diff_(arity_bound + 1) {
        if (arity_bound < 1) throw PreconditionError("arity bound must be >= 1");
    }

    const std::string& name() const { return name_; }
    Convention convention() const { return conv_; }
    Unitality unitality() const { return unital_; }
    bool unitary() const { return unital_ == Unitality::Unitary; }
    int arity_bound() const { return arity_bound_; }

    /// Declared lower bound on operation degrees valid at EVERY arity,
    /// including beyond the truncation (e.g. 0 for homology operads).
    /// Checked against stored degrees; trusted beyond the bound.
    std::optional<int> degree_floor() const { return degree_floor_; }
    void set_degree_floor(std::optional<int> f) { degree_floor_ = f; }

    // ---- construction ----

    int add_basis_elt(int arity, int degree, std::string label, std::string display) {
        check_arity(arity);
        basis_[arity].push_back({degree, std::move(label), std::move(display)});
        return static_cast<int>(basis_[arity].size()) - 1;
    }

    void set_transpositions(int arity, std::vector<RatMatrix> t) {
        check_arity(arity);
        if (static_cast<int>(t.size()) != std::max(0, arity - 1))
            throw ValidationError("need one matrix per adjacent transposition");
        transpositions_[arity] = std::move(t);
    }

    void set_differential(int arity, RatMatrix d) {
        check_arity(arity);
        diff_[arity] = std::move(d);
    }

    void add_composition(int m, int n, int i, int a, int b, int dst, const Rat& c) {
        if (c == 0) return;
        comp_[{m, n, i, a, b}].emplace_back(dst, c);
    }

    // ---- queries ----

    int dim(int arity) const {
        check_arity(arity);
        return static_cast<int>(basis_[arity].size());
    }

    const std::vector<OperadBasisElt>& basis(int arity) const {
        check_arity(arity);
        return basis_[arity];
    }

    int degree_of(int arity, int idx) const { return basis(arity)[idx].degree; }

    /// Index of the operad unit in P(1); validated to be the only element.
    int unit_index() const {
        if (dim(1) != 1 || basis_[1][0].degree != 0)
            throw ValidationError("operad is not connected (P(1) != k in degree 0)");
        return 0;
    }

    RatMatrix transposition(int arity, int j) const {
        check_arity(arity);
        if (j < 0 || j >= arity - 1) throw Error("transposition index out of range");
        if (transpositions_[arity].empty()) return RatMatrix::identity(dim(arity));
        return transpositions_[arity][j];
    }

    RatMatrix differential(int arity) const {
        check_arity(arity);
        if (diff_[arity].rows() == 0 && diff_[arity].cols() == 0)
            return RatMatrix(dim(arity), dim(arity));
        return diff_[arity];
    }

    bool has_zero_differential() const {
        for (int n = 0; n <= arity_bound_; ++n)
            if (!differential(n).is_zero()) return false;
        return true;
    }

    /// Right action of an arbitrary permutation on coefficient vectors,
    /// via the adjacent-transposition factorization.
    RatVec act(int arity, const Perm& sigma, const RatVec& x) const {
        RatVec y = x;
        for (int j : adjacent_word(sigma)) y = transposition(arity, j).apply(y);
        return y;
    }

    const std::vector<std::pair<int, Rat>>& composition_entries(int m, int n, int i,
                                                                int a, int b) const {
        static const std::vector<std::pair<int, Rat>> empty;
        auto it = comp_.find({m, n, i, a, b});
        return it == comp_.end() ? empty : it->second;
    }

    /// Bilinear partial composition o_i (i is 1-based), coefficient vectors.
    RatVec compose(int m, int n, int i, const RatVec& a, const RatVec& b) const {
        check_arity(m);
        check_arity(n);
        if (m + n - 1 > arity_bound_ || m + n - 1 < 0)
            throw WindowError("composition exceeds arity bound");
        if (i < 1 || i > m) throw Error("composition slot out of range");
        RatVec out(dim(m + n - 1), Rat(0));
        for (int ia = 0; ia < dim(m); ++ia) {
            if (a[ia] == 0) continue;
            for (int ib = 0; ib < dim(n); ++ib) {
                if (b[ib] == 0) continue;
                Rat c = a[ia] * b[ib];
                for (const auto& [dst, coeff] : composition_entries(m, n, i, ia, ib))
                    out[dst] += c * coeff;
            }
        }
        return out;
    }

    RatVec basis_vec(int arity, int idx) const {
        RatVec v(dim(arity), Rat(0));
        v[idx] = 1;
        return v;
    }

    /// Degrees present in an arity, with their dimensions.
    std::map<int, int> degree_dims(int arity) const {
        std::map<int, int> out;
        for (const auto& b : basis(arity)) out[b.degree]++;
        return out;
    }

    // ---- analysis ----

    ValidationReport validate() const;

    /// Smallest r >= 0 with every stored (n>=2, q) pair r-tame, up to cap.
    TamenessCertificate tameness_index(int cap = 16) const {
        TamenessCertificate cert;
        cert.arity_bound = arity_bound_;
        for (int r = 0; r <= cap; ++r) {
            bool ok = true;
            for (int n = 2; n <= arity_bound_ && ok; ++n)
                for (const auto& b : basis_[n])
                    if (!element_tame({n, b.degree}, r)) {
                        ok = false;
                        break;
                    }
            if (ok) {
                cert.r = r;
                if (r > 0) {
                    for (int n = 2; n <= arity_bound_; ++n)
                        for (const auto& b : basis_[n])
                            if (!element_tame({n, b.degree}, r - 1))
                                cert.binding.push_back({n, b.degree});
                }
                return cert;
            }
        }
        return cert;
    }

    /// Render a basis element applied to printed arguments.
    std::string render(int arity, int idx, const std::vector<std::string>& args) const {
        const std::string& tpl = basis(arity)[idx].display;
        std::string out;
        for (size_t i = 0; i < tpl.size(); ++i) {
            if (tpl[i] == '%' && i + 1 < tpl.size() && isdigit(tpl[i + 1])) {
                size_t j = i + 1;
                int slot = 0;
                while (j < tpl.size() && isdigit(tpl[j]))
                    slot = slot * 10 + (tpl[j++] - '0');
                out += args.at(slot - 1);
                i = j - 1;
            } else {
                out += tpl[i];
            }
        }
        return out;
    }

private:
    void check_arity(int n) const {
        if (n < 0 || n > arity_bound_)
            throw WindowError("arity " + std::to_string(n) + " outside bound " +
                              std::to_string(arity_bound_));
    }

    std::string name_;
    Convention conv_;
    Unitality unital_;
    int arity_bound_;
    std::optional<int> degree_floor_;
    std::vector<std::vector<OperadBasisElt>> basis_;
    std::vector<std::vector<RatMatrix>> transpositions_;
    std::vector<RatMatrix> diff_;
    std::map<std::tuple<int, int, int, int, int>, std::vector<std::pair<int, Rat>>>
        comp_;
};

using OperadPtr = std::shared_ptr<const OperadTable>;

namespace detail {

inline std::string vec_str(const RatVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace detail

/*
 * Exhaustive axiom check within the arity bound: connectivity, unit laws,
 * involution/braid/commutation of the transposition matrices, sequential
 * and parallel o_i-associativity with the Koszul sign, equivariance on the
 * generating transpositions, the derivation law and d^2 = 0. Every violated
 * identity is reported with a witness.
 */
inline ValidationReport OperadTable::validate() const {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

    // Connectivity and P(0).
    if (degree_floor_)
        for (int n = 0; n <= arity_bound_; ++n)
            for (const auto& b : basis_[n])
                if (b.degree < *degree_floor_)
                    fail("stored degree below the declared degree floor at arity " +
                         std::to_string(n));
    if (dim(1) != 1 || basis_[1][0].degree != 0)
        fail("P(1) must be one-dimensional in degree 0");
    if (unitary()) {
        if (dim(0) != 1 || (dim(0) == 1 && basis_[0][0].degree != 0))
            fail("unitary operad needs P(0) = k in degree 0");
    } else if (dim(0) != 0) {
        fail("reduced operad needs P(0) = 0");
    }
    if (!rep.ok()) return rep;

    const RatVec unit = basis_vec(1, unit_index());

    // Unit laws.
    for (int n = 0; n <= arity_bound_; ++n) {
        for (int b = 0; b < dim(n); ++b) {
            RatVec v = basis_vec(n, b);
            if (compose(1, n, 1, unit, v) != v)
                fail("unit law id o_1 x failed at arity " + std::to_string(n) +
                     " basis " + basis_[n][b].label);
            for (int i = 1; i <= n; ++i)
                if (compose(n, 1, i, v, unit) != v)
                    fail("unit law x o_i id failed at arity " + std::to_string(n) +
                         " slot " + std::to_string(i));
        }
    }

    // Transpositions: degree preservation, involution, braid, commutation.
    for (int n = 2; n <= arity_bound_; ++n) {
        RatMatrix id = RatMatrix::identity(dim(n));
        for (int j = 0; j + 1 < n; ++j) {
            RatMatrix t = transposition(n, j);
            for (int r = 0; r < t.rows(); ++r)
                for (const auto& [c, v] : t.row(r))
                    if (basis_[n][r].degree != basis_[n][c].degree)
                        fail("transposition not degree-preserving at arity " +
                             std::to_string(n));
            if (t.mul(t) != id)
                fail("involution fails: arity " + std::to_string(n) + " s_" +
                     std::to_string(j + 1));
            if (j + 2 < n) {
                RatMatrix u = transposition(n, j + 1);
                if (t.mul(u).mul(t) != u.mul(t).mul(u))
                    fail("braid relation fails at arity " + std::to_string(n));
            }
            for (int k = j + 2; k + 1 < n; ++k) {
                RatMatrix u = transposition(n, k);
                if (t.mul(u) != u.mul(t))
                    fail("distant transpositions do not commute at arity " +
                         std::to_string(n));
            }
        }
    }

    // Compositions: degree additivity of entries.
    for (const auto& [key, entries] : comp_) {
        auto [m, n, i, a, b] = key;
        for (const auto& [dst, c] : entries) {
            (void)c;
            if (basis_[m + n - 1][dst].degree !=
                basis_[m][a].degree + basis_[n][b].degree)
                fail("composition entry not degree-additive at (" +
                     std::to_string(m) + "," + std::to_string(n) + ")");
        }
    }

    // Associativity, sequential: (a o_i b) o_{i-1+j} c = a o_i (b o_j c).
    // Parallel, i < k: (a o_i b) o_{k+n-1} c = (-1)^{|b||c|} (a o_k c) o_i b.
    for (int l = 1; l <= arity_bound_; ++l)
        for (int m = 0; m <= arity_bound_; ++m)
            for (int n = 0; n <= arity_bound_; ++n) {
                if (l + m - 1 > arity_bound_ || l + m + n - 2 > arity_bound_ ||
                    l + m - 1 < 0 || l + m + n - 2 < 0)
                    continue;
                if (m >= 1 && m + n - 1 > arity_bound_) continue;
                for (int a = 0; a < dim(l); ++a)
                    for (int b = 0; b < dim(m); ++b)
                        for (int c = 0; c < dim(n); ++c) {
                            RatVec va = basis_vec(l, a), vb = basis_vec(m, b),
                                   vc = basis_vec(n, c);
                            for (int i = 1; i <= l; ++i) {
                                RatVec ab = compose(l, m, i, va, vb);
                                if (m >= 1)
                                    for (int j = 1; j <= m; ++j) {
                                        RatVec lhs = compose(l + m - 1, n, i - 1 + j,
                                                             ab, vc);
                                        RatVec rhs = compose(
                                            l, m + n - 1, i, va,
                                            compose(m, n, j, vb, vc));
                                        if (lhs != rhs)
                                            fail("sequential associativity fails: (" +
                                                 basis_[l][a].label + " o_" +
                                                 std::to_string(i) + " " +
                                                 basis_[m][b].label + ") o " +
                                                 basis_[n][c].label);
                                    }
                                for (int k = i + 1; k <= l && l + n - 1 <= arity_bound_;
                                     ++k) {
                                    RatVec lhs =
                                        compose(l + m - 1, n, k + m - 1, ab, vc);
                                    RatVec rhs = compose(l + n - 1, m, i,
                                                         compose(l, n, k, va, vc), vb);
                                    int sgn = ((basis_[m][b].degree *
                                                basis_[n][c].degree) % 2)
                                                  ? -1
                                                  : 1;
                                    for (auto& x : rhs) x *= sgn;
                                    if (lhs != rhs)
                                        fail("parallel associativity fails: " +
                                             basis_[l][a].label + " with " +
                                             basis_[m][b].label + "," +
                                             basis_[n][c].label);
                                }
                            }
                        }
            }

    // Equivariance on generators: (x s_j) o_i y = (x o_{s_j(i)} y)(s_j o_i 1)
    // and x o_i (y s_j) = (x o_i y)(1 o_i s_j).
    for (int m = 1; m <= arity_bound_; ++m)
        for (int n = 0; n <= arity_bound_; ++n) {
            if (m + n - 1 > arity_bound_ || m + n - 1 < 1) continue;
            for (int a = 0; a < dim(m); ++a)
                for (int b = 0; b < dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        RatVec va = basis_vec(m, a), vb = basis_vec(n, b);
                        for (int j = 0; j + 1 < m; ++j) {
                            Perm s = perm_transposition(m, j);
                            std::vector<int> sizes(m, 1);
                            sizes[i - 1] = n;
                            Perm big = block_perm(s, sizes);
                            RatVec lhs = compose(m, n, i,
                                                 transposition(m, j).apply(va), vb);
                            int target = s[i - 1] + 1;
                            RatVec rhs =
                                act(m + n - 1, big, compose(m, n, target, va, vb));
                            if (lhs != rhs)
                                fail("left equivariance fails at arity (" +
                                     std::to_string(m) + "," + std::to_string(n) +
                                     ") slot " + std::to_string(i));
                        }
                        for (int j = 0; j + 1 < n; ++j) {
                            RatVec lhs = compose(m, n, i, va,
                                                 transposition(n, j).apply(vb));
                            RatVec inner = compose(m, n, i, va, vb);
                            RatVec rhs =
                                transposition(m + n - 1, i - 1 + j).apply(inner);
                            if (lhs != rhs)
                                fail("right equivariance fails at arity (" +
                                     std::to_string(m) + "," + std::to_string(n) +
                                     ") slot " + std::to_string(i));
                        }
                    }
        }

    // Differential: degree shift, d^2 = 0, derivation law.
    int dl = delta(conv_);
    for (int n = 0; n <= arity_bound_; ++n) {
        RatMatrix d = differential(n);
        for (int r = 0; r < d.rows(); ++r)
            for (const auto& [c, v] : d.row(r)) {
                (void)v;
                if (basis_[n][r].degree != basis_[n][c].degree + dl)
                    fail("differential degree shift wrong at arity " +
                         std::to_string(n));
            }
        if (!d.mul(d).is_zero())
            fail("d^2 != 0 at arity " + std::to_string(n));
    }
    for (int m = 1; m <= arity_bound_; ++m)
        for (int n = 0; n <= arity_bound_; ++n) {
            if (m + n - 1 > arity_bound_) continue;
            RatMatrix dm = differential(m), dn = differential(n),
                      dr = differential(m + n - 1);
            for (int a = 0; a < dim(m); ++a)
                for (int b = 0; b < dim(n); ++b)
                    for (int i = 1; i <= m; ++i) {
                        RatVec va = basis_vec(m, a), vb = basis_vec(n, b);
                        RatVec lhs = dr.apply(compose(m, n, i, va, vb));
                        RatVec rhs = compose(m, n, i, dm.apply(va), vb);
                        RatVec t2 = compose(m, n, i, va, dn.apply(vb));
                        int sgn = (basis_[m][a].degree % 2) ? -1 : 1;
                        for (size_t t = 0; t < rhs.size(); ++t)
                            rhs[t] += Rat(sgn) * t2[t];
                        if (lhs != rhs)
                            fail("derivation law fails at arity (" +
                                 std::to_string(m) + "," + std::to_string(n) + ")");
                    }
        }

    return rep;
}

/*
 * Operad morphism F: P -> Q of equal convention, one matrix per arity
 * (degreewise by degree preservation). Validated to preserve the unit,
 * the symmetric action, partial compositions, and the differential.
 */
class OperadMorphism {
public:
    OperadMorphism(OperadPtr src, OperadPtr dst, std::vector<RatMatrix> per_arity)
        : src_(std::move(src)), dst_(std::move(dst)), f_(std::move(per_arity)) {
        if (src_->convention() != dst_->convention())
            throw ValidationError("operad morphism across conventions");
        if (static_cast<int>(f_.size()) != src_->arity_bound() + 1)
            throw ValidationError("operad morphism needs one matrix per arity");
        if (dst_->arity_bound() < src_->arity_bound())
            throw ValidationError("target operad truncated below source");
    }

    const OperadPtr& src() const { return src_; }
    const OperadPtr& dst() const { return dst_; }
    const RatMatrix& at(int arity) const { return f_.at(arity); }

    ValidationReport validate() const {
        ValidationReport rep;
        auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
        for (int n = 0; n <= src_->arity_bound(); ++n) {
            if (f_[n].rows() != dst_->dim(n) || f_[n].cols() != src_->dim(n))
                fail("morphism shape mismatch at arity " + std::to_string(n));
        }
        if (!rep.ok()) return rep;
        if (f_[1].apply(src_->basis_vec(1, src_->unit_index())) !=
            dst_->basis_vec(1, dst_->unit_index()))
            fail("morphism does not preserve the unit");
        for (int n = 2; n <= src_->arity_bound(); ++n)
            for (int j = 0; j + 1 < n; ++j)
                if (f_[n].mul(src_->transposition(n, j)) !=
                    dst_->transposition(n, j).mul(f_[n]))
                    fail("morphism not equivariant at arity " + std::to_string(n));
        for (int m = 1; m <= src_->arity_bound(); ++m)
            for (int n = 0; n <= src_->arity_bound(); ++n) {
                if (m + n - 1 > src_->arity_bound()) continue;
                for (int a = 0; a < src_->dim(m); ++a)
                    for (int b = 0; b < src_->dim(n); ++b)
                        for (int i = 1; i <= m; ++i) {
                            RatVec lhs = f_[m + n - 1].apply(src_->compose(
                                m, n, i, src_->basis_vec(m, a), src_->basis_vec(n, b)));
                            RatVec rhs = dst_->compose(
                                m, n, i, f_[m].apply(src_->basis_vec(m, a)),
                                f_[n].apply(src_->basis_vec(n, b)));
                            if (lhs != rhs)
                                fail("morphism not compatible with o_" +
                                     std::to_string(i) + " at (" + std::to_string(m) +
                                     "," + std::to_string(n) + ")");
                        }
            }
        for (int n = 0; n <= src_->arity_bound(); ++n)
            if (f_[n].mul(src_->differential(n)) != dst_->differential(n).mul(f_[n]))
                fail("morphism not compatible with d at arity " + std::to_string(n));
        return rep;
    }

private:
    OperadPtr src_, dst_;
    std::vector<RatMatrix> f_;
};

}  // namespace minop
