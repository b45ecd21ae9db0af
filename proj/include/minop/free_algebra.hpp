#pragma once

#include <minop/operad.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace minop {

struct Generator {
    std::string label;
    int degree = 0;
    int stage = 0;  // KS-extension stage that introduced it

    auto key() const { return std::tie(degree, label, stage); }
};

/*
 * Canonical monomial of the free algebra: an operad class paired with a
 * sorted generator tuple. Slots are sorted by (degree, label, stage) with
 * the Koszul sign of the sort absorbed during normalization, and `cls`
 * indexes the residual stabilizer-coinvariant space of the tuple (an
 * echelon quotient of P(n)^q, cached per tuple).
 */
struct Monomial {
    std::vector<int> gens;  // generator ids, sorted by the canonical order
    int q = 0;              // internal degree of the operad class
    int cls = 0;

    bool operator<(const Monomial& o) const {
        return std::tie(gens, q, cls) < std::tie(o.gens, o.q, o.cls);
    }
    bool operator==(const Monomial& o) const = default;
};

/// Homogeneous linear combination of canonical monomials; no zero terms.
using FreeElement = std::map<Monomial, Rat>;

inline void free_add(FreeElement& into, const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = into.find(m);
    if (it == into.end()) {
        into.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) into.erase(it);
    }
}

inline FreeElement free_scaled(const FreeElement& e, const Rat& c) {
    FreeElement out;
    if (c == 0) return out;
    for (const auto& [m, v] : e) out.emplace(m, c * v);
    return out;
}

inline void free_acc(FreeElement& into, const FreeElement& e, const Rat& c = Rat(1)) {
    for (const auto& [m, v] : e) free_add(into, m, c * v);
}

/*
 * Free P-algebra on staged graded generators with a derivation differential.
 * Monomial bases are computed degreewise as stabilizer quotients; the
 * differential extends the generator data by the Leibniz rule
 *   d theta(mu; a_1..a_l) = theta(d mu; a_1..a_l)
 *     + sum_i (-1)^{|mu|+|a_1|+...+|a_{i-1}|} theta(mu; ..., d a_i, ...).
 * All caches are guarded by an internal lock; the value is immutable.
 */
class FreeAlgebra {
public:
    FreeAlgebra(OperadPtr operad, int truncation,
                std::optional<int> arity_cap = std::nullopt)
        : operad_(std::move(operad)), truncation_(truncation), arity_cap_(arity_cap) {
        tame_r_ = operad_->tameness_index().r;
    }

    FreeAlgebra(const FreeAlgebra& o)
        : operad_(o.operad_),
          truncation_(o.truncation_),
          arity_cap_(o.arity_cap_),
          tame_r_(o.tame_r_),
          gens_(o.gens_),
          by_label_(o.by_label_),
          diff_(o.diff_),
          stages_(o.stages_) {}

    FreeAlgebra& operator=(const FreeAlgebra& o) {
        if (this != &o) {
            operad_ = o.operad_;
            truncation_ = o.truncation_;
            arity_cap_ = o.arity_cap_;
            tame_r_ = o.tame_r_;
            gens_ = o.gens_;
            by_label_ = o.by_label_;
            diff_ = o.diff_;
            stages_ = o.stages_;
            reset_caches();
        }
        return *this;
    }

    const OperadPtr& operad() const { return operad_; }
    Convention convention() const { return operad_->convention(); }
    int truncation() const { return truncation_; }
    std::optional<int> arity_cap() const { return arity_cap_; }
    int stage_count() const { return static_cast<int>(stages_.size()); }
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& generator(int id) const { return gens_.at(id); }

    int generator_id(const std::string& label) const {
        auto it = by_label_.find(label);
        if (it == by_label_.end()) throw Error("unknown generator: " + label);
        return it->second;
    }

    const FreeElement& generator_diff(int id) const {
        static const FreeElement zero;
        auto it = diff_.find(id);
        return it == diff_.end() ? zero : it->second;
    }

    /// Generator ids introduced by one stage, in insertion order.
    const std::vector<int>& stage_members(int stage) const { return stages_.at(stage); }

    /*
     * Attach one KS-extension: new generators of a single degree whose
     * differentials are cocycles supported on earlier stages. Returns the
     * extended algebra; `this` is unchanged.
     */
    FreeAlgebra ks_extend(const std::vector<std::pair<std::string, int>>& new_gens,
                          const std::vector<FreeElement>& diffs) const {
        if (new_gens.size() != diffs.size())
            throw PreconditionError("ks_extend: one differential per generator");
        if (!new_gens.empty())
            for (const auto& [label, deg] : new_gens)
                if (deg != new_gens[0].second)
                    throw PreconditionError(
                        "ks_extend: generators must share one degree");

        FreeAlgebra out(*this);
        out.reset_caches();
        int stage = static_cast<int>(out.stages_.size());
        std::vector<int> members;
        for (size_t t = 0; t < new_gens.size(); ++t) {
            const auto& [label, deg] = new_gens[t];
            if (out.by_label_.count(label))
                throw PreconditionError("duplicate generator label: " + label);
            int id = static_cast<int>(out.gens_.size());
            out.gens_.push_back({label, deg, stage});
            out.by_label_.emplace(label, id);
            members.push_back(id);
        }
        out.stages_.push_back(members);

        int dl = delta(convention());
        for (size_t t = 0; t < new_gens.size(); ++t) {
            const FreeElement& image = diffs[t];
            if (image.empty()) continue;
            int want = new_gens[t].second + dl;
            for (const auto& [m, c] : image) {
                (void)c;
                for (int g : m.gens)
                    if (out.gens_[g].stage >= stage)
                        throw PreconditionError(
                            "differential of " + new_gens[t].first +
                            " must land in earlier stages");
                if (out.degree_of(m) != want)
                    throw PreconditionError("differential of " + new_gens[t].first +
                                            " has wrong degree");
            }
            FreeElement dd = out.differentiate(image);
            if (!dd.empty())
                throw PreconditionError("differential of generator " +
                                        new_gens[t].first + " is not a cocycle");
            out.diff_.emplace(members[t], image);
        }
        return out;
    }

    int degree_of(const Monomial& m) const {
        int s = m.q;
        for (int g : m.gens) s += gens_[g].degree;
        return s;
    }

    int degree_of(const FreeElement& e) const {
        if (e.empty()) throw Error("degree of zero element");
        return degree_of(e.begin()->first);
    }

    /// The arity-1 monomial on one generator.
    FreeElement gen_element(int id) const {
        FreeElement e;
        e.emplace(Monomial{{id}, 0, 0}, Rat(1));
        return e;
    }

    /// Unit element (arity-0 monomial); empty for reduced operads.
    FreeElement unit_element() const {
        FreeElement e;
        if (operad_->unitary()) e.emplace(Monomial{{}, 0, 0}, Rat(1));
        return e;
    }

    /*
     * Ordered basis of the degree-k component, deterministic: arities
     * ascending, sorted tuples lexicographically, class indices ascending.
     */
    const std::vector<Monomial>& free_basis(int k) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = basis_cache_.find(k);
        if (it != basis_cache_.end()) return it->second;
        if (k > truncation_)
            throw WindowError("degree " + std::to_string(k) +
                              " beyond free-algebra truncation " +
                              std::to_string(truncation_));

        std::vector<Monomial> out;
        int limit = arity_limit(k);
        std::vector<int> order = sorted_gen_ids();
        for (int n = 0; n <= limit; ++n) {
            std::vector<std::vector<int>> tuples;
            std::vector<int> cur;
            enumerate_tuples(order, n, 0, 0, k, cur, tuples);
            for (const auto& w : tuples) {
                int q = k;
                for (int g : w) q -= gens_[g].degree;
                const TupleSpace& ts = tuple_space_q(w, q);
                for (int c = 0; c < ts.dim; ++c) out.push_back(Monomial{w, q, c});
            }
        }
        auto [pos, inserted] = basis_cache_.emplace(k, std::move(out));
        (void)inserted;
        auto& idx = basis_index_[k];
        for (size_t i = 0; i < pos->second.size(); ++i)
            idx.emplace(pos->second[i], static_cast<int>(i));
        return pos->second;
    }

    int dim(int k) const { return static_cast<int>(free_basis(k).size()); }

    int basis_index(int k, const Monomial& m) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        free_basis(k);
        const auto& idx = basis_index_.at(k);
        auto it = idx.find(m);
        if (it == idx.end()) throw Error("monomial not in basis at degree " +
                                         std::to_string(k));
        return it->second;
    }

    RatVec to_vec(const FreeElement& e, int k) const {
        RatVec v(dim(k), Rat(0));
        for (const auto& [m, c] : e) v[basis_index(k, m)] = c;
        return v;
    }

    FreeElement from_vec(const RatVec& v, int k) const {
        const auto& basis = free_basis(k);
        FreeElement e;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) e.emplace(basis[i], v[i]);
        return e;
    }

    /*
     * Structure map on elements: expand multilinearly, compose through the
     * operad left-to-right, and apply the Koszul shuffle sign interleaving
     * the operad factors past the earlier generator tuples.
     */
    FreeElement theta(int l, const RatVec& mu, const std::vector<FreeElement>& args) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (static_cast<int>(args.size()) != l)
            throw PreconditionError("theta: arity/argument mismatch");
        FreeElement out;
        expand_theta(l, mu, args, 0, Rat(1), {}, out);
        return out;
    }

    FreeElement theta_basis(int l, int mu_idx, const std::vector<FreeElement>& args) const {
        return theta(l, operad_->basis_vec(l, mu_idx), args);
    }

    /// Derivation applied to an element.
    FreeElement differentiate(const FreeElement& e) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        FreeElement out;
        for (const auto& [m, c] : e) free_acc(out, differentiate_monomial(m), c);
        return out;
    }

    /*
     * Differential matrices on the monomial bases for every degree k with k
     * and k+delta inside the truncation; d*d = 0 verified with a witness on
     * failure.
     */
    RatMatrix differential_matrix(int k) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = dmat_cache_.find(k);
        if (it != dmat_cache_.end()) return it->second;
        int dl = delta(convention());
        const auto& basis = free_basis(k);
        RatMatrix d(dim(k + dl), dim(k));
        for (size_t j = 0; j < basis.size(); ++j) {
            FreeElement img = differentiate_monomial(basis[j]);
            for (const auto& [m, c] : img)
                d.set(basis_index(k + dl, m), static_cast<int>(j), c);
        }
        dmat_cache_.emplace(k, d);
        return d;
    }

    /// d*d = 0 as exact matrix identities for all degrees inside [lo, hi].
    void check_d_squared(int lo, int hi) const {
        int dl = delta(convention());
        for (int k = lo; k <= hi; ++k) {
            if (k + 2 * dl < lo || k + 2 * dl > hi) continue;
            RatMatrix dd = differential_matrix(k + dl).mul(differential_matrix(k));
            if (!dd.is_zero()) {
                int witness = -1;
                for (int r = 0; r < dd.rows() && witness < 0; ++r)
                    if (!dd.row(r).empty()) witness = dd.row(r).begin()->first;
                throw ValidationError("d^2 != 0 at degree " + std::to_string(k) +
                                      " on monomial " +
                                      render(free_basis(k)[witness]));
            }
        }
    }

    /// Sullivan/minimality flags of the stage structure.
    bool stages_nondecreasing(int r) const {
        int prev = r;
        for (const auto& members : stages_) {
            if (members.empty()) continue;
            int deg = gens_[members[0]].degree;
            if (deg <= r || deg < prev) return false;
            prev = deg;
        }
        return true;
    }

    std::string render(const Monomial& m) const {
        const TupleSpace& ts = tuple_space_q(m.gens, m.q);
        int rep = ts.rep_basis_idx.at(m.cls);
        std::vector<std::string> labels;
        for (int g : m.gens) labels.push_back(gens_[g].label);
        return operad_->render(static_cast<int>(m.gens.size()), rep, labels);
    }

    std::string render(const FreeElement& e) const {
        if (e.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : e) {
            std::string cs = rat_str(c);
            if (first) {
                if (cs == "1")
                    s = render(m);
                else if (cs == "-1")
                    s = "-" + render(m);
                else
                    s = cs + "*" + render(m);
            } else {
                if (c > 0)
                    s += " + " + (cs == "1" ? render(m) : cs + "*" + render(m));
                else {
                    std::string mag = rat_str(-c);
                    s += " - " + (mag == "1" ? render(m) : mag + "*" + render(m));
                }
            }
            first = false;
        }
        return s;
    }

    /// Normalize an operad vector against an arbitrary generator tuple.
    FreeElement normalize(int arity, const RatVec& opvec,
                          const std::vector<int>& tuple) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        std::vector<std::tuple<int, std::string, int, int>> keys;
        std::vector<int> degrees;
        for (size_t t = 0; t < tuple.size(); ++t) {
            const Generator& g = gens_[tuple[t]];
            keys.emplace_back(g.degree, g.label, g.stage, tuple[t]);
            degrees.push_back(g.degree);
        }
        auto [sigma, sign] = sorting_perm(keys, degrees);
        std::vector<int> sorted(tuple.size());
        for (size_t t = 0; t < tuple.size(); ++t) sorted[sigma[t]] = tuple[t];

        RatVec acted = operad_->act(arity, perm_inverse(sigma), opvec);
        if (sign < 0)
            for (auto& x : acted) x = -x;

        FreeElement out;
        // Split by operad degree and project through the tuple quotients.
        std::map<int, RatVec> by_degree;
        for (int i = 0; i < operad_->dim(arity); ++i) {
            if (acted[i] == 0) continue;
            int q = operad_->degree_of(arity, i);
            auto& sub = by_degree[q];
            if (sub.empty()) sub.assign(operad_->dim(arity), Rat(0));
            sub[i] = acted[i];
        }
        int tuple_deg = 0;
        for (int g : sorted) tuple_deg += gens_[g].degree;
        for (const auto& [q, vec] : by_degree) {
            if (q + tuple_deg > truncation_)
                throw WindowError("element exceeds free-algebra truncation " +
                                  std::to_string(truncation_));
            const TupleSpace& ts = tuple_space_q(sorted, q);
            RatVec local(ts.graded_idx.size(), Rat(0));
            for (size_t t = 0; t < ts.graded_idx.size(); ++t)
                local[t] = vec[ts.graded_idx[t]];
            RatVec classes = ts.projection.apply(local);
            for (size_t c = 0; c < classes.size(); ++c)
                free_add(out, Monomial{sorted, q, static_cast<int>(c)}, classes[c]);
        }
        return out;
    }

    /// Lift a monomial's class to a full operad coefficient vector.
    RatVec lift(const Monomial& m) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        const TupleSpace& ts = tuple_space_q(m.gens, m.q);
        RatVec local = ts.section.column_dense(m.cls);
        RatVec full(operad_->dim(static_cast<int>(m.gens.size())), Rat(0));
        for (size_t t = 0; t < ts.graded_idx.size(); ++t)
            if (local[t] != 0) full[ts.graded_idx[t]] = local[t];
        return full;
    }

    int operad_degree(const Monomial& m) const { return m.q; }

    /*
     * Largest contributing arity at total degree k. Derived from tameness
     * when every generator degree is >= r+2; otherwise an explicit cap is
     * demanded. Arities 0 and 1 are always available.
     */
    int arity_limit(int k) const {
        int bound = operad_->arity_bound();
        if (arity_cap_) return std::min(*arity_cap_, bound);
        if (gens_.empty()) return std::min(1, bound);
        if (!tame_r_)
            throw PreconditionError(
                "operad not tame within the search cap: an explicit arity cap "
                "is required");
        int r = *tame_r_;
        int dmin = gens_[0].degree;
        for (const auto& g : gens_) dmin = std::min(dmin, g.degree);
        if (dmin <= r + 1)
            throw PreconditionError(
                "unbounded arity: generators of degree <= r+1 over an r-tame "
                "operad need an explicit arity cap");
        // Arities beyond the table cannot reach degree k when the smallest
        // conceivable degree there already exceeds it. The operad-side lower
        // bound at arity n is the tameness estimate (1-n)(1+r)+1, improved
        // by a declared degree floor when one is present; both slopes are
        // positive in n, so checking n = bound+1 suffices.
        {
            int n1 = bound + 1;
            int lower = (1 - n1) * (1 + r) + 1;
            if (auto fl = operad_->degree_floor()) lower = std::max(lower, *fl);
            if (lower + n1 * dmin <= k)
                throw WindowError(
                    "operad table truncated below the derived arity cap at "
                    "degree " +
                    std::to_string(k));
        }
        // Within the table, use the actual degree support per arity.
        int limit = std::min(1, bound);
        for (int n = 2; n <= bound; ++n) {
            if (operad_->dim(n) == 0) continue;
            int qmin = operad_->degree_of(n, 0);
            for (const auto& b : operad_->basis(n)) qmin = std::min(qmin, b.degree);
            if (qmin + n * dmin <= k) limit = n;
        }
        return limit;
    }

private:
    struct TupleSpace {
        int q = 0;
        std::vector<int> graded_idx;  // full-basis indices of degree q
        RatMatrix projection;         // dim x |graded_idx|
        RatMatrix section;            // |graded_idx| x dim
        std::vector<int> rep_basis_idx;  // representative full-basis index per class
        int dim = 0;
    };

    void reset_caches() {
        basis_cache_.clear();
        basis_index_.clear();
        dmat_cache_.clear();
        tuple_cache_.clear();
        dmono_cache_.clear();
    }

    std::vector<int> sorted_gen_ids() const {
        std::vector<int> ids(gens_.size());
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return std::tuple_cat(gens_[a].key(), std::make_tuple(a)) <
                   std::tuple_cat(gens_[b].key(), std::make_tuple(b));
        });
        return ids;
    }

    /// Non-decreasing tuples (by canonical order) of the given size.
    void enumerate_tuples(const std::vector<int>& order, int size, int from,
                          int acc_deg, int k, std::vector<int>& cur,
                          std::vector<std::vector<int>>& out) const {
        if (static_cast<int>(cur.size()) == size) {
            int n = size;
            int q = k - acc_deg;
            auto dd = operad_->degree_dims(n);
            auto it = dd.find(q);
            if (it != dd.end() && it->second > 0) out.push_back(cur);
            return;
        }
        for (int t = from; t < static_cast<int>(order.size()); ++t) {
            cur.push_back(order[t]);
            enumerate_tuples(order, size, t, acc_deg + gens_[order[t]].degree, k,
                             cur, out);
            cur.pop_back();
        }
    }

    const TupleSpace& tuple_space_q(const std::vector<int>& tuple, int q) const {
        auto key = std::make_pair(tuple, q);
        auto it = tuple_cache_.find(key);
        if (it != tuple_cache_.end()) return it->second;

        int n = static_cast<int>(tuple.size());
        TupleSpace ts;
        ts.q = q;
        for (int i = 0; i < operad_->dim(n); ++i)
            if (operad_->degree_of(n, i) == q) ts.graded_idx.push_back(i);

        int gdim = static_cast<int>(ts.graded_idx.size());
        std::map<int, int> to_local;
        for (int t = 0; t < gdim; ++t) to_local[ts.graded_idx[t]] = t;

        std::vector<RatVec> relations;
        for (int j = 0; j + 1 < n; ++j) {
            if (tuple[j] != tuple[j + 1]) continue;
            int chi = (gens_[tuple[j]].degree % 2) ? -1 : 1;
            RatMatrix t = operad_->transposition(n, j);
            for (int col = 0; col < gdim; ++col) {
                RatVec rel(gdim, Rat(0));
                RatVec e(operad_->dim(n), Rat(0));
                e[ts.graded_idx[col]] = 1;
                RatVec img = t.apply(e);
                for (int row = 0; row < gdim; ++row) rel[row] = img[ts.graded_idx[row]];
                rel[col] -= Rat(chi);
                relations.push_back(std::move(rel));
            }
        }
        SubspaceBasis sub = SubspaceBasis::from_vectors(gdim, relations);
        QuotientSection qs = quotient_section(gdim, sub);
        ts.projection = std::move(qs.projection);
        ts.section = std::move(qs.section);
        ts.dim = ts.projection.rows();
        for (int c = 0; c < ts.dim; ++c) {
            // Canonical section columns are coordinate vectors.
            int found = -1;
            for (int t = 0; t < gdim; ++t)
                if (ts.section.at(t, c) != 0) {
                    found = ts.graded_idx[t];
                    break;
                }
            ts.rep_basis_idx.push_back(found);
        }
        auto [pos, ok] = tuple_cache_.emplace(std::move(key), std::move(ts));
        (void)ok;
        return pos->second;
    }

    void expand_theta(int l, const RatVec& mu, const std::vector<FreeElement>& args,
                      size_t j, Rat coeff, std::vector<const Monomial*> picked,
                      FreeElement& out) const {
        if (j == args.size()) {
            // Shuffle sign: each operad factor q_t passes the generator
            // tuples of the earlier arguments.
            int exp = 0;
            int deg_prefix = 0;
            std::vector<int> tuple;
            for (size_t t = 0; t < picked.size(); ++t) {
                int q = operad_degree(*picked[t]);
                exp += q * deg_prefix;
                for (int g : picked[t]->gens) {
                    deg_prefix += gens_[g].degree;
                    tuple.push_back(g);
                }
            }
            Rat c = coeff;
            if (exp % 2) c = -c;

            RatVec acc = mu;
            int acc_arity = l;
            int pos = 1;
            for (size_t t = 0; t < picked.size(); ++t) {
                int nt = static_cast<int>(picked[t]->gens.size());
                acc = operad_->compose(acc_arity, nt, pos, acc, lift(*picked[t]));
                acc_arity += nt - 1;
                pos += nt;
            }
            free_acc(out, normalize(acc_arity, acc, tuple), c);
            return;
        }
        for (const auto& [m, c] : args[j]) {
            picked.push_back(&m);
            expand_theta(l, mu, args, j + 1, coeff * c, picked, out);
            picked.pop_back();
        }
    }

    FreeElement differentiate_monomial(const Monomial& m) const {
        auto it = dmono_cache_.find(m);
        if (it != dmono_cache_.end()) return it->second;

        int n = static_cast<int>(m.gens.size());
        RatVec p = lift(m);
        int q = operad_degree(m);
        FreeElement out;

        RatVec dp = operad_->differential(n).apply(p);
        bool nonzero = false;
        for (const auto& x : dp)
            if (x != 0) nonzero = true;
        if (nonzero) free_acc(out, normalize(n, dp, m.gens));

        int deg_prefix = 0;
        for (int t = 0; t < n; ++t) {
            int g = m.gens[t];
            const FreeElement& dg = generator_diff(g);
            if (!dg.empty()) {
                std::vector<FreeElement> args;
                for (int u = 0; u < n; ++u)
                    args.push_back(u == t ? dg : gen_element(m.gens[u]));
                int exp = q + deg_prefix;
                free_acc(out, theta(n, p, args), (exp % 2) ? Rat(-1) : Rat(1));
            }
            deg_prefix += gens_[g].degree;
        }
        dmono_cache_.emplace(m, out);
        return out;
    }

    OperadPtr operad_;
    int truncation_;
    std::optional<int> arity_cap_;
    std::optional<int> tame_r_;
    std::vector<Generator> gens_;
    std::map<std::string, int> by_label_;
    std::map<int, FreeElement> diff_;
    std::vector<std::vector<int>> stages_;

    mutable std::recursive_mutex mu_;
    mutable std::map<int, std::vector<Monomial>> basis_cache_;
    mutable std::map<int, std::map<Monomial, int>> basis_index_;
    mutable std::map<int, RatMatrix> dmat_cache_;
    mutable std::map<std::pair<std::vector<int>, int>, TupleSpace> tuple_cache_;
    mutable std::map<Monomial, FreeElement> dmono_cache_;
};

}  // namespace minop
