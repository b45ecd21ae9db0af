#pragma once

#include <minop/free_algebra.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace minop {

/*
 * What the engine needs from a concrete P-algebra: its complex, multilinear
 * theta-evaluation on coefficient vectors, and the unit map. Tabular
 * algebras, free algebras and path/pullback constructions all implement it.
 */
class AlgebraTarget {
public:
    virtual ~AlgebraTarget() = default;
    virtual OperadPtr operad() const = 0;
    virtual ComplexPtr complex() const = 0;
    /// theta(l)(mu; a_1..a_l) with args given as (degree, coefficients).
    virtual RatVec theta(int l, const RatVec& mu,
                         const std::vector<std::pair<int, RatVec>>& args) const = 0;
    /// Unit map eta: P(0) -> A^0 as a dim(A^0) x dim(P(0)) matrix.
    virtual RatMatrix unit_map() const = 0;

    Convention convention() const { return operad()->convention(); }
    int dim(int k) const { return complex()->dim(k); }
};

using TargetPtr = std::shared_ptr<const AlgebraTarget>;

namespace detail {

inline bool same_operad_shape(const OperadTable& a, const OperadTable& b) {
    if (a.convention() != b.convention() || a.unitality() != b.unitality() ||
        a.arity_bound() != b.arity_bound())
        return false;
    for (int n = 0; n <= a.arity_bound(); ++n)
        if (a.degree_dims(n) != b.degree_dims(n)) return false;
    return true;
}

}  // namespace detail

/*
 * Finite-type P-algebra with explicit sparse structure tables: one
 * multilinear map per operad basis element, stored on basis tensors.
 * Missing arities are hard errors at evaluation time, never zeros.
 */
class TabularAlgebra : public AlgebraTarget {
public:
    struct InputKey {
        int arity;
        int mu;
        std::vector<std::pair<int, int>> inputs;  // (degree, basis index)
        bool operator<(const InputKey& o) const {
            return std::tie(arity, mu, inputs) < std::tie(o.arity, o.mu, o.inputs);
        }
        bool operator==(const InputKey& o) const = default;
    };

    TabularAlgebra(OperadPtr op, ComplexPtr cx, int max_arity)
        : operad_(std::move(op)), cx_(std::move(cx)), max_arity_(max_arity) {
        unit_ = RatMatrix(cx_->space().in_window(0) ? cx_->dim(0) : 0,
                          operad_->dim(0));
    }

    OperadPtr operad() const override { return operad_; }
    ComplexPtr complex() const override { return cx_; }
    int max_arity() const { return max_arity_; }
    RatMatrix unit_map() const override { return unit_; }

    void set_unit(RatMatrix eta) { unit_ = std::move(eta); }

    void add_entry(int arity, int mu, std::vector<std::pair<int, int>> inputs,
                   int out_idx, const Rat& coeff) {
        if (coeff == 0) return;
        entries_[InputKey{arity, mu, std::move(inputs)}].emplace_back(out_idx, coeff);
    }

    const std::map<InputKey, std::vector<std::pair<int, Rat>>>& entries() const {
        return entries_;
    }

    /// Output degree of theta(mu in P(l)^q; inputs of the given degrees).
    static int out_degree(int q, const std::vector<std::pair<int, int>>& inputs) {
        int s = q;
        for (const auto& [d, i] : inputs) {
            (void)i;
            s += d;
        }
        return s;
    }

    RatVec theta(int l, const RatVec& mu,
                 const std::vector<std::pair<int, RatVec>>& args) const override {
        if (l > max_arity_)
            throw PreconditionError("theta table missing at arity " +
                                    std::to_string(l) + " (declared cap " +
                                    std::to_string(max_arity_) + ")");
        int deg = 0;
        for (const auto& [d, v] : args) {
            (void)v;
            deg += d;
        }
        int out_deg = 0;
        bool found_mu = false;
        for (int i = 0; i < operad_->dim(l); ++i)
            if (mu[i] != 0) {
                out_deg = operad_->degree_of(l, i) + deg;
                found_mu = true;
                break;
            }
        if (!found_mu) return RatVec(0, Rat(0));
        RatVec out(cx_->dim(out_deg), Rat(0));
        std::vector<std::pair<int, int>> inputs(l);
        expand(l, mu, args, 0, Rat(1), inputs, out);
        return out;
    }

    /// theta on one basis tuple (used by validators and restriction).
    RatVec theta_basis(int l, int mu_idx,
                       const std::vector<std::pair<int, int>>& inputs) const {
        int out_deg = out_degree(operad_->degree_of(l, mu_idx), inputs);
        RatVec out(cx_->space().in_window(out_deg) ? cx_->dim(out_deg) : 0, Rat(0));
        auto it = entries_.find(InputKey{l, mu_idx, inputs});
        if (it != entries_.end())
            for (const auto& [o, c] : it->second) out[o] += c;
        return out;
    }

    ValidationReport validate() const;

    /// Structure maps composed through an operad morphism; the complex is
    /// untouched, so (co)homology and quasi-isomorphisms are preserved.
    static TabularAlgebra restrict_scalars(const OperadMorphism& f,
                                           const TabularAlgebra& b) {
        if (!detail::same_operad_shape(*f.dst(), *b.operad()))
            throw PreconditionError(
                "restriction: algebra is not over the morphism target");
        TabularAlgebra out(f.src(), b.complex(),
                           std::min(b.max_arity(), f.src()->arity_bound()));
        for (int n = 0; n <= out.max_arity(); ++n) {
            const RatMatrix& m = f.at(n);
            // Collect all input tuples present for this arity in b.
            for (const auto& [key, outs] : b.entries_) {
                (void)outs;
                if (key.arity != n) continue;
                for (int src = 0; src < f.src()->dim(n); ++src) {
                    Rat c = m.at(key.mu, src);
                    if (c == 0) continue;
                    for (const auto& [o, v] : b.entries_.at(key))
                        out.add_entry(n, src, key.inputs, o, c * v);
                }
            }
        }
        RatMatrix eta = b.unit_map().mul(f.at(0));
        out.set_unit(std::move(eta));
        out.dedupe();
        return out;
    }

    void dedupe() {
        std::map<InputKey, std::vector<std::pair<int, Rat>>> clean;
        for (auto& [key, outs] : entries_) {
            std::map<int, Rat> acc;
            for (const auto& [o, c] : outs) {
                acc[o] += c;
            }
            std::vector<std::pair<int, Rat>> v;
            for (const auto& [o, c] : acc)
                if (c != 0) v.emplace_back(o, c);
            if (!v.empty()) clean.emplace(key, std::move(v));
        }
        entries_ = std::move(clean);
    }

private:
    void expand(int l, const RatVec& mu, const std::vector<std::pair<int, RatVec>>& args,
                size_t j, Rat coeff, std::vector<std::pair<int, int>>& inputs,
                RatVec& out) const {
        if (j == args.size()) {
            for (int i = 0; i < operad_->dim(l); ++i) {
                if (mu[i] == 0) continue;
                auto it = entries_.find(InputKey{l, i, inputs});
                if (it == entries_.end()) continue;
                for (const auto& [o, c] : it->second) out[o] += coeff * mu[i] * c;
            }
            return;
        }
        const auto& [deg, vec] = args[j];
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i] == 0) continue;
            inputs[j] = {deg, static_cast<int>(i)};
            expand(l, mu, args, j + 1, coeff * vec[i], inputs, out);
        }
    }

    OperadPtr operad_;
    ComplexPtr cx_;
    int max_arity_;
    RatMatrix unit_;
    std::map<InputKey, std::vector<std::pair<int, Rat>>> entries_;
};

/*
 * Exhaustive structure check within the complex window and the declared
 * arity cap: unit law, equivariance along adjacent transpositions with
 * Koszul signs, gamma-associativity against partial compositions, the
 * derivation law, and the unit map landing in cocycles.
 */
inline ValidationReport TabularAlgebra::validate() const {
    ValidationReport rep;
    auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
    const GradedSpace& sp = cx_->space();
    int dl = delta(convention());

    auto degrees_in_window = [&]() {
        std::vector<int> out;
        for (int k = sp.lo(); k <= sp.hi(); ++k)
            if (cx_->dim(k) > 0) out.push_back(k);
        return out;
    }();

    // Enumerate basis tuples of a given size with in-window output degree.
    auto for_tuples = [&](int l, int q,
                          const std::function<void(const std::vector<std::pair<int, int>>&)>& fn) {
        std::vector<std::pair<int, int>> cur(l);
        std::function<void(int, int)> rec = [&](int pos, int acc) {
            if (pos == l) {
                if (sp.in_window(acc)) fn(cur);
                return;
            }
            for (int d : degrees_in_window)
                for (int i = 0; i < cx_->dim(d); ++i) {
                    cur[pos] = {d, i};
                    rec(pos + 1, acc + d);
                }
        };
        rec(0, q);
    };

    // Unit law theta(id; a) = a.
    int uid = operad_->unit_index();
    for (int d : degrees_in_window)
        for (int i = 0; i < cx_->dim(d); ++i) {
            RatVec got = theta_basis(1, uid, {{d, i}});
            RatVec want(cx_->dim(d), Rat(0));
            want[i] = 1;
            if (got != want)
                fail("unit operation is not the identity at degree " +
                     std::to_string(d));
        }

    // Unit map: d о eta = 0 and arity-0 tables realize eta.
    if (operad_->unitary() && sp.in_window(0) && sp.in_window(dl)) {
        RatMatrix deta = cx_->d(0).mul(unit_);
        if (!deta.is_zero()) fail("unit map does not land in cocycles");
        for (int u = 0; u < operad_->dim(0); ++u) {
            RatVec got = theta_basis(0, u, {});
            if (got != unit_.column_dense(u))
                fail("arity-0 table disagrees with the unit map");
        }
    }

    // Equivariance on adjacent transpositions.
    for (int l = 2; l <= max_arity_; ++l)
        for (int m = 0; m < operad_->dim(l); ++m) {
            int q = operad_->degree_of(l, m);
            for_tuples(l, q, [&](const std::vector<std::pair<int, int>>& inputs) {
                for (int j = 0; j + 1 < l; ++j) {
                    RatVec acted(operad_->dim(l), Rat(0));
                    acted[m] = 1;
                    acted = operad_->transposition(l, j).apply(acted);
                    RatVec lhs(cx_->dim(out_degree(q, inputs)), Rat(0));
                    for (int t = 0; t < operad_->dim(l); ++t) {
                        if (acted[t] == 0) continue;
                        RatVec part = theta_basis(l, t, inputs);
                        for (size_t z = 0; z < lhs.size(); ++z)
                            lhs[z] += acted[t] * part[z];
                    }
                    auto swapped = inputs;
                    std::swap(swapped[j], swapped[j + 1]);
                    int sgn = (inputs[j].first * inputs[j + 1].first) % 2 ? -1 : 1;
                    RatVec rhs = theta_basis(l, m, swapped);
                    for (auto& x : rhs) x *= sgn;
                    if (lhs != rhs)
                        fail("theta not equivariant at arity " + std::to_string(l));
                }
            });
        }

    // Associativity against partial compositions.
    for (int m = 1; m <= max_arity_; ++m)
        for (int n = 0; n <= max_arity_; ++n) {
            if (m + n - 1 > max_arity_ || m + n - 1 < 0) continue;
            for (int a = 0; a < operad_->dim(m); ++a)
                for (int b = 0; b < operad_->dim(n); ++b) {
                    int qa = operad_->degree_of(m, a), qb = operad_->degree_of(n, b);
                    for (int i = 1; i <= m; ++i) {
                        RatVec comp = operad_->compose(m, n, i, operad_->basis_vec(m, a),
                                                       operad_->basis_vec(n, b));
                        for_tuples(m + n - 1, qa + qb,
                                   [&](const std::vector<std::pair<int, int>>& inputs) {
                            int outd = out_degree(qa + qb, inputs);
                            RatVec lhs(cx_->dim(outd), Rat(0));
                            for (int t = 0; t < operad_->dim(m + n - 1); ++t) {
                                if (comp[t] == 0) continue;
                                RatVec part = theta_basis(m + n - 1, t, inputs);
                                for (size_t z = 0; z < lhs.size(); ++z)
                                    lhs[z] += comp[t] * part[z];
                            }
                            // rhs: theta(a; ..., theta(b; inner), ...) with the
                            // Koszul sign of moving b past the first i-1 args.
                            int prefix = 0;
                            for (int t = 0; t < i - 1; ++t)
                                prefix += inputs[t].first;
                            int sgn = (qb * prefix) % 2 ? -1 : 1;
                            std::vector<std::pair<int, int>> inner(
                                inputs.begin() + (i - 1), inputs.begin() + (i - 1) + n);
                            RatVec innerv = theta_basis(n, b, inner);
                            int innerd = out_degree(qb, inner);
                            std::vector<std::pair<int, RatVec>> outer_args;
                            for (int t = 0; t < i - 1; ++t) {
                                RatVec e(cx_->dim(inputs[t].first), Rat(0));
                                e[inputs[t].second] = 1;
                                outer_args.emplace_back(inputs[t].first, e);
                            }
                            outer_args.emplace_back(innerd, innerv);
                            for (int t = i - 1 + n; t < m + n - 1; ++t) {
                                RatVec e(cx_->dim(inputs[t].first), Rat(0));
                                e[inputs[t].second] = 1;
                                outer_args.emplace_back(inputs[t].first, e);
                            }
                            RatVec rhs = theta(m, operad_->basis_vec(m, a), outer_args);
                            for (auto& x : rhs) x *= sgn;
                            if (lhs != rhs)
                                fail("theta not associative at (" + std::to_string(m) +
                                     "," + std::to_string(n) + ") slot " +
                                     std::to_string(i));
                        });
                    }
                }
        }

    // Derivation law.
    for (int l = 1; l <= max_arity_; ++l)
        for (int m = 0; m < operad_->dim(l); ++m) {
            int q = operad_->degree_of(l, m);
            for_tuples(l, q, [&](const std::vector<std::pair<int, int>>& inputs) {
                int outd = out_degree(q, inputs);
                if (!sp.in_window(outd + dl)) return;
                for (const auto& [d, i] : inputs) {
                    (void)i;
                    if (!sp.in_window(d + dl)) return;
                }
                RatVec lhs = cx_->d(outd).apply(theta_basis(l, m, inputs));

                RatVec rhs(cx_->dim(outd + dl), Rat(0));
                RatVec dmu = operad_->differential(l).apply(operad_->basis_vec(l, m));
                for (int t = 0; t < operad_->dim(l); ++t) {
                    if (dmu[t] == 0) continue;
                    RatVec part = theta_basis(l, t, inputs);
                    for (size_t z = 0; z < rhs.size(); ++z) rhs[z] += dmu[t] * part[z];
                }
                int prefix = q;
                for (int pos = 0; pos < l; ++pos) {
                    RatVec da = cx_->d(inputs[pos].first)
                                    .column_dense(inputs[pos].second);
                    int sgn = prefix % 2 ? -1 : 1;
                    std::vector<std::pair<int, RatVec>> args;
                    for (int t = 0; t < l; ++t) {
                        if (t == pos) {
                            args.emplace_back(inputs[t].first + dl, da);
                        } else {
                            RatVec e(cx_->dim(inputs[t].first), Rat(0));
                            e[inputs[t].second] = 1;
                            args.emplace_back(inputs[t].first, e);
                        }
                    }
                    RatVec part = theta(l, operad_->basis_vec(l, m), args);
                    for (size_t z = 0; z < rhs.size(); ++z)
                        rhs[z] += Rat(sgn) * part[z];
                    prefix += inputs[pos].first;
                }
                if (lhs != rhs)
                    fail("theta is not a chain map at arity " + std::to_string(l));
            });
        }

    return rep;
}

/*
 * Free algebra viewed through the target interface: the complex on the
 * monomial bases over a window, theta via the coinvariant machinery.
 */
class FreeAlgebraTarget : public AlgebraTarget {
public:
    FreeAlgebraTarget(std::shared_ptr<const FreeAlgebra> alg, int lo, int hi)
        : alg_(std::move(alg)) {
        GradedSpace sp(lo, hi);
        for (int k = lo; k <= hi; ++k) {
            std::vector<std::string> labels;
            for (const auto& m : alg_->free_basis(k)) labels.push_back(alg_->render(m));
            sp.set_basis(k, labels);
        }
        std::map<int, RatMatrix> d;
        int dl = delta(alg_->convention());
        for (int k = lo; k <= hi; ++k) {
            if (k + dl < lo || k + dl > hi) continue;
            d.emplace(k, alg_->differential_matrix(k));
        }
        cx_ = std::make_shared<ChainComplex>(std::move(sp), alg_->convention(),
                                             std::move(d));
    }

    OperadPtr operad() const override { return alg_->operad(); }
    ComplexPtr complex() const override { return cx_; }
    const std::shared_ptr<const FreeAlgebra>& algebra() const { return alg_; }

    RatVec theta(int l, const RatVec& mu,
                 const std::vector<std::pair<int, RatVec>>& args) const override {
        std::vector<FreeElement> fargs;
        int deg = 0;
        for (const auto& [d, v] : args) {
            fargs.push_back(alg_->from_vec(v, d));
            deg += d;
        }
        int q = -1;
        for (int i = 0; i < operad()->dim(l); ++i)
            if (mu[i] != 0) {
                q = operad()->degree_of(l, i);
                break;
            }
        if (q == -1) return RatVec(0, Rat(0));
        FreeElement out = alg_->theta(l, mu, fargs);
        return alg_->to_vec(out, q + deg);
    }

    RatMatrix unit_map() const override {
        RatMatrix eta(cx_->dim(0), operad()->dim(0));
        if (operad()->unitary()) {
            RatVec u = alg_->to_vec(alg_->unit_element(), 0);
            for (size_t i = 0; i < u.size(); ++i)
                if (u[i] != 0) eta.set(static_cast<int>(i), 0, u[i]);
        }
        return eta;
    }

private:
    std::shared_ptr<const FreeAlgebra> alg_;
    ComplexPtr cx_;
};

/*
 * Strict P-algebra morphism from a free algebra, determined by generator
 * images (Lemma-style universal property). d phi = f d is validated per
 * generator at construction.
 */
class AlgebraMorphism {
public:
    AlgebraMorphism(std::shared_ptr<const FreeAlgebra> source, TargetPtr target,
                    std::map<int, RatVec> images, bool validate_compat = true)
        : src_(std::move(source)), dst_(std::move(target)), images_(std::move(images)) {
        for (const auto& g : src_->generators()) {
            int id = src_->generator_id(g.label);
            auto it = images_.find(id);
            if (it == images_.end())
                throw PreconditionError("missing image for generator " + g.label);
            if (static_cast<int>(it->second.size()) != dst_->dim(g.degree))
                throw PreconditionError("image of " + g.label +
                                        " has the wrong degree/shape");
        }
        if (validate_compat) {
            int dl = delta(src_->convention());
            for (const auto& g : src_->generators()) {
                int id = src_->generator_id(g.label);
                RatVec lhs = dst_->complex()->d(g.degree).apply(images_.at(id));
                RatVec rhs = apply(src_->generator_diff(id), g.degree + dl);
                if (lhs != rhs)
                    throw ValidationError("d phi != f d for generator " + g.label);
            }
        }
    }

    const std::shared_ptr<const FreeAlgebra>& source() const { return src_; }
    const TargetPtr& target() const { return dst_; }
    const RatVec& image(int gen_id) const { return images_.at(gen_id); }
    const std::map<int, RatVec>& images_map() const { return images_; }

    /// Push a homogeneous element through the morphism.
    RatVec apply(const FreeElement& e, int degree) const {
        RatVec out(dst_->dim(degree), Rat(0));
        for (const auto& [m, c] : e) {
            const RatVec& part = monomial_image(m);
            for (size_t i = 0; i < part.size(); ++i) out[i] += c * part[i];
        }
        return out;
    }

    /// Degreewise matrix on the free basis.
    RatMatrix matrix(int k) const {
        const auto& basis = src_->free_basis(k);
        RatMatrix m(dst_->dim(k), static_cast<int>(basis.size()));
        for (size_t j = 0; j < basis.size(); ++j) {
            const RatVec& img = monomial_image(basis[j]);
            for (size_t i = 0; i < img.size(); ++i)
                if (img[i] != 0) m.set(static_cast<int>(i), static_cast<int>(j), img[i]);
        }
        return m;
    }

    /// Chain map on the free side computed over [lo, hi], matrices on the
    /// intersection with the target window.
    ComplexMap complex_map(int lo, int hi) const {
        auto src_target = std::make_shared<FreeAlgebraTarget>(src_, lo, hi);
        const GradedSpace& tsp = dst_->complex()->space();
        std::map<int, RatMatrix> maps;
        for (int k = std::max(lo, tsp.lo()); k <= std::min(hi, tsp.hi()); ++k)
            maps.emplace(k, matrix(k));
        return ComplexMap(src_target->complex(), dst_->complex(), std::move(maps));
    }

private:
    const RatVec& monomial_image(const Monomial& m) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        int n = static_cast<int>(m.gens.size());
        std::vector<std::pair<int, RatVec>> args;
        for (int g : m.gens)
            args.emplace_back(src_->generator(g).degree, images_.at(g));
        RatVec out;
        if (n == 0) {
            // Unit monomial: push through the target's unit map.
            RatVec u = dst_->unit_map().apply(lift_unit(m));
            out = u;
        } else {
            out = dst_->theta(n, src_->lift(m), args);
        }
        return cache_.emplace(m, std::move(out)).first->second;
    }

    RatVec lift_unit(const Monomial& m) const {
        RatVec v(src_->operad()->dim(0), Rat(0));
        RatVec lifted = src_->lift(m);
        for (size_t i = 0; i < lifted.size(); ++i) v[i] = lifted[i];
        return v;
    }

    std::shared_ptr<const FreeAlgebra> src_;
    TargetPtr dst_;
    std::map<int, RatVec> images_;
    mutable std::mutex mu_;
    mutable std::map<Monomial, RatVec> cache_;
};

/// The unique morphism extending generator images (universal property).
inline AlgebraMorphism extend_morphism(std::shared_ptr<const FreeAlgebra> source,
                                       TargetPtr target, std::map<int, RatVec> images) {
    return AlgebraMorphism(std::move(source), std::move(target), std::move(images));
}

/// f after g, where g's target wraps f's source.
inline AlgebraMorphism compose_morphisms(const AlgebraMorphism& f,
                                         const AlgebraMorphism& g) {
    auto gt = std::dynamic_pointer_cast<const FreeAlgebraTarget>(g.target());
    if (!gt || gt->algebra().get() != f.source().get())
        throw PreconditionError("compose_morphisms: targets do not chain");
    std::map<int, RatVec> images;
    for (const auto& gen : g.source()->generators()) {
        int id = g.source()->generator_id(gen.label);
        FreeElement mid = f.source()->from_vec(g.image(id), gen.degree);
        images.emplace(id, f.apply(mid, gen.degree));
    }
    return AlgebraMorphism(g.source(), f.target(), std::move(images));
}

/*
 * Build full theta tables from binary data, for operads generated in
 * arities <= 2: each higher basis element is decomposed once as a
 * combination of alpha o_i beta with beta of arity 2, and the tables are
 * materialized bottom-up over all in-window basis tuples with the sign
 *   theta(alpha o_i beta; a) =
 *     (-1)^{|beta|(|a_1|+...+|a_{i-1}|)} theta(alpha; ..., theta(beta;..), ..).
 */
inline TabularAlgebra build_tabular_from_binary(
    OperadPtr op, ComplexPtr cx, int max_arity,
    const std::map<std::tuple<int, std::pair<int, int>, std::pair<int, int>>,
                   std::vector<std::pair<int, Rat>>>& binary,
    RatMatrix unit) {
    TabularAlgebra out(op, cx, max_arity);
    out.set_unit(std::move(unit));
    const GradedSpace& sp = cx->space();

    std::vector<int> degrees;
    for (int k = sp.lo(); k <= sp.hi(); ++k)
        if (cx->dim(k) > 0) degrees.push_back(k);

    auto for_tuples = [&](int l, int q,
                          const std::function<void(const std::vector<std::pair<int, int>>&)>& fn) {
        std::vector<std::pair<int, int>> cur(l);
        std::function<void(int, int)> rec = [&](int pos, int acc) {
            if (pos == l) {
                if (sp.in_window(acc)) fn(cur);
                return;
            }
            for (int d : degrees)
                for (int i = 0; i < cx->dim(d); ++i) {
                    cur[pos] = {d, i};
                    rec(pos + 1, acc + d);
                }
        };
        rec(0, q);
    };

    // Arity 0: the unit map; arity 1: the identity.
    if (op->unitary() && sp.in_window(0))
        for (int u = 0; u < op->dim(0); ++u)
            for (int o = 0; o < cx->dim(0); ++o)
                if (out.unit_map().at(o, u) != 0)
                    out.add_entry(0, u, {}, o, out.unit_map().at(o, u));
    int uid = op->unit_index();
    for (int d : degrees)
        for (int i = 0; i < cx->dim(d); ++i) out.add_entry(1, uid, {{d, i}}, i, Rat(1));

    // Arity 2 from the given binary data.
    if (max_arity >= 2)
        for (int m = 0; m < op->dim(2); ++m) {
            int q = op->degree_of(2, m);
            for_tuples(2, q, [&](const std::vector<std::pair<int, int>>& in) {
                auto it = binary.find({m, in[0], in[1]});
                if (it == binary.end()) return;
                for (const auto& [o, c] : it->second)
                    out.add_entry(2, m, in, o, c);
            });
        }

    // Higher arities through decompositions mu = sum c_t (alpha_t o_i beta_t).
    for (int n = 3; n <= max_arity; ++n) {
        struct Cand {
            int alpha, slot, beta;
        };
        std::vector<Cand> cands;
        std::vector<RatVec> cols;
        for (int a = 0; a < op->dim(n - 1); ++a)
            for (int i = 1; i <= n - 1; ++i)
                for (int b = 0; b < op->dim(2); ++b) {
                    cands.push_back({a, i, b});
                    cols.push_back(op->compose(n - 1, 2, i, op->basis_vec(n - 1, a),
                                               op->basis_vec(2, b)));
                }
        RatMatrix cmat = RatMatrix::from_columns(op->dim(n), cols);
        LinearSolver solver(cmat);
        for (int m = 0; m < op->dim(n); ++m) {
            auto sol = solver.solve(op->basis_vec(n, m));
            if (!sol)
                throw PreconditionError(
                    "operad not generated in arity <= 2 at arity " +
                    std::to_string(n));
            int q = op->degree_of(n, m);
            for_tuples(n, q, [&](const std::vector<std::pair<int, int>>& in) {
                std::map<int, Rat> acc;
                for (size_t t = 0; t < cands.size(); ++t) {
                    if ((*sol)[t] == 0) continue;
                    const Cand& cd = cands[t];
                    int qb = op->degree_of(2, cd.beta);
                    int prefix = 0;
                    for (int z = 0; z < cd.slot - 1; ++z) prefix += in[z].first;
                    int sgn = (qb * prefix) % 2 ? -1 : 1;

                    std::vector<std::pair<int, int>> inner(
                        in.begin() + (cd.slot - 1), in.begin() + (cd.slot + 1));
                    RatVec innerv = out.theta_basis(2, cd.beta, inner);
                    int innerd = TabularAlgebra::out_degree(qb, inner);
                    if (!sp.in_window(innerd)) continue;

                    std::vector<std::pair<int, RatVec>> args;
                    for (int z = 0; z < cd.slot - 1; ++z) {
                        RatVec e(cx->dim(in[z].first), Rat(0));
                        e[in[z].second] = 1;
                        args.emplace_back(in[z].first, e);
                    }
                    args.emplace_back(innerd, innerv);
                    for (int z = cd.slot + 1; z < n; ++z) {
                        RatVec e(cx->dim(in[z].first), Rat(0));
                        e[in[z].second] = 1;
                        args.emplace_back(in[z].first, e);
                    }
                    RatVec part = out.theta(n - 1, op->basis_vec(n - 1, cd.alpha), args);
                    for (size_t z = 0; z < part.size(); ++z)
                        if (part[z] != 0)
                            acc[static_cast<int>(z)] +=
                                (*sol)[t] * Rat(sgn) * part[z];
                }
                for (const auto& [o, c] : acc)
                    if (c != 0) out.add_entry(n, m, in, o, c);
            });
        }
    }
    out.dedupe();
    return out;
}

struct QuasiIsoCertificate {
    bool ok = false;
    int up_to = 0;
    std::map<int, int> cone_h_dims;  // per checked cone degree
    int first_failure = 0;           // first degree where H(f) is not an iso
};

/*
 * Quasi-isomorphism test through the cone: H^k(C(f)) must vanish for every
 * checkable k <= up_to. The free side is computed two degrees past up_to so
 * the top cone differential exists; the target side must be supplied through
 * up_to + 1.
 */
inline QuasiIsoCertificate is_quasi_iso(const AlgebraMorphism& f, int up_to) {
    QuasiIsoCertificate cert;
    cert.up_to = up_to;
    // The free side is computed on [-2, up_to+2]: one spare degree below for
    // the chain-convention cone block, two above for the top cone d.
    ComplexMap cm = f.complex_map(-2, up_to + 2);
    Cone cn = cone(cm);
    const GradedSpace& csp = cn.complex->space();
    cert.ok = true;
    for (int k = csp.lo() + 1; k <= std::min(up_to, csp.hi() - 1); ++k) {
        int h = cohomology(*cn.complex, k).dimension;
        cert.cone_h_dims[k] = h;
        if (h != 0) cert.ok = false;
    }
    if (!cert.ok) {
        // Locate the first degree where the induced map on cohomology
        // stops being an isomorphism.
        const ChainComplex& src = *cm.src();
        const ChainComplex& dst = *cm.dst();
        int lo = std::max(src.space().lo(), dst.space().lo()) + 1;
        int hi = std::min({src.space().hi() - 1, dst.space().hi() - 1, up_to + 1});
        for (int d = lo; d <= hi; ++d) {
            auto hs = cohomology(src, d);
            auto hd = cohomology(dst, d);
            RatMatrix induced = hd.classifier.mul(cm.at(d)).mul(hs.section);
            if (hs.dimension != hd.dimension || rank(induced) != hs.dimension) {
                cert.first_failure = d;
                break;
            }
        }
    }
    return cert;
}

struct ConnectivityReport {
    bool ok = false;
    std::string witness;
};

/*
 * r-connectivity: H^i = 0 for i < 0 within the window, the unit map realizes
 * P(0) = H^0, and H^1..H^r vanish.
 */
inline ConnectivityReport check_connected(const AlgebraTarget& a, int r) {
    ConnectivityReport rep;
    const ChainComplex& cx = *a.complex();
    const GradedSpace& sp = cx.space();
    if (!sp.in_window(r + 1))
        throw PreconditionError("window must cover degrees up to r+1");

    for (int i = sp.lo() + 1; i < 0; ++i) {
        if (cohomology(cx, i).dimension != 0) {
            rep.witness = "H^" + std::to_string(i) + " != 0";
            return rep;
        }
    }
    auto h0 = cohomology(cx, 0);
    int p0 = a.operad()->dim(0);
    if (h0.dimension != p0) {
        rep.witness = "H^0 has dimension " + std::to_string(h0.dimension) +
                      ", expected " + std::to_string(p0);
        return rep;
    }
    if (p0 > 0) {
        RatMatrix cls = h0.classifier.mul(a.unit_map());
        if (rank(cls) != p0) {
            rep.witness = "unit map does not induce P(0) = H^0";
            return rep;
        }
    }
    for (int i = 1; i <= r; ++i)
        if (cohomology(cx, i).dimension != 0) {
            rep.witness = "H^" + std::to_string(i) + " != 0";
            return rep;
        }
    rep.ok = true;
    return rep;
}

}  // namespace minop
