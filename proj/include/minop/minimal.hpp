#pragma once

#include <minop/algebra.hpp>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace minop {

enum class SectionMode { Canonical, SeededRandom };

struct EngineOptions {
    SectionMode section_mode = SectionMode::Canonical;
    uint64_t seed = 0;
    int iteration_cap = 32;
    std::optional<int> arity_cap;
};

struct StageRecord {
    int degree = 0;
    int iteration = 0;  // inner index at this degree
    int attached = 0;   // dim of the attached space
    bool kill_step = true;  // chain engine: killers vs cokernel fillers
};

/*
 * A staged minimal model: the Sullivan r-minimal algebra, the comparison
 * quasi-isomorphism, the per-stage log, and the final cone certificate.
 * Everything is certified only through the truncation degree.
 */
struct MinimalModel {
    std::shared_ptr<const FreeAlgebra> model;
    std::shared_ptr<const AlgebraMorphism> comparison;
    TargetPtr target;
    int r = 0;
    int truncation = 0;
    std::vector<StageRecord> stages;
    bool iteration_cap_hit = false;
    QuasiIsoCertificate certificate;

    /// Generator count per degree.
    std::map<int, int> generator_dims() const {
        std::map<int, int> out;
        for (const auto& g : model->generators()) out[g.degree]++;
        return out;
    }

    int extensions_at_degree(int n) const {
        int c = 0;
        for (const auto& s : stages)
            if (s.degree == n && s.attached > 0) ++c;
        return c;
    }
};

namespace detail {

inline void require_engine_preconditions(const TargetPtr& a, int r, int N,
                                         Convention conv) {
    if (a->convention() != conv)
        throw PreconditionError("target has the wrong degree convention");
    auto cert = a->operad()->tameness_index();
    if (!cert.r || *cert.r > r)
        throw PreconditionError(
            "operad is not " + std::to_string(r) +
            "-tame within its truncation (tameness index " +
            (cert.r ? std::to_string(*cert.r) : std::string("none")) + ")");
    const GradedSpace& sp = a->complex()->space();
    if (!sp.in_window(N + 1) || !sp.in_window(-1))
        throw PreconditionError(
            "target must be supplied through degree N+1 (window padded below "
            "0 as well)");
    auto conn = check_connected(*a, r);
    if (!conn.ok)
        throw PreconditionError("target is not " + std::to_string(r) +
                                "-connected: " + conn.witness);
}

inline std::shared_ptr<AlgebraMorphism> initial_morphism(
    const std::shared_ptr<const FreeAlgebra>& model, const TargetPtr& a) {
    return std::make_shared<AlgebraMorphism>(model, a, std::map<int, RatVec>{});
}

/// Cone of the comparison map, free side computed over [-2, hi].
inline Cone comparison_cone(const AlgebraMorphism& f, int hi) {
    return cone(f.complex_map(-2, hi));
}

/// Assert condition (b_n): H^k(C(f_n)) = 0 for all k <= n.
inline void assert_stage_condition(const AlgebraMorphism& f, int n, int hi) {
    Cone cn = comparison_cone(f, hi);
    const GradedSpace& sp = cn.complex->space();
    for (int k = sp.lo() + 1; k <= std::min(n, sp.hi() - 1); ++k)
        if (cohomology(*cn.complex, k).dimension != 0)
            throw ValidationError("stage condition failed at degree " +
                                  std::to_string(k) + " (stage " +
                                  std::to_string(n) + ")");
}

}  // namespace detail

/*
 * Step-by-step Sullivan r-minimal model in the cochain convention, the
 * inductive KS-extension tower over the cone cohomology of the comparison
 * map: V[n,0] = H^n(C(f_{n-1})), then V[n,i] = H^n(C(f_{n,i-1})) until the
 * kernel vanishes or the iteration cap fires (partial model, flagged).
 */
inline MinimalModel minimal_model_cochain(TargetPtr a, int r, int N,
                                          const EngineOptions& opt = {}) {
    detail::require_engine_preconditions(a, r, N, Convention::Cochain);
    std::mt19937_64 rng(opt.seed);
    std::mt19937_64* rng_ptr =
        opt.section_mode == SectionMode::SeededRandom ? &rng : nullptr;

    MinimalModel out;
    out.target = a;
    out.r = r;
    out.truncation = N;

    auto model = std::make_shared<FreeAlgebra>(
        FreeAlgebra(a->operad(), N + 2, opt.arity_cap));
    auto f = detail::initial_morphism(model, a);

    for (int n = r + 1; n <= N; ++n) {
        for (int iter = 0;; ++iter) {
            Cone cn = detail::comparison_cone(*f, N + 2);
            CohomologyResult h = cohomology(*cn.complex, n, rng_ptr);
            out.stages.push_back({n, iter, h.dimension, true});
            if (h.dimension == 0) break;
            if (iter >= opt.iteration_cap) {
                out.iteration_cap_hit = true;
                break;
            }

            std::vector<std::pair<std::string, int>> gens;
            std::vector<FreeElement> diffs;
            std::map<int, RatVec> images;
            for (const auto& [id, img] : f->images_map()) images.emplace(id, img);

            for (int c = 0; c < h.dimension; ++c) {
                auto [mpart, apart] = cn.split(n, h.representatives[c]);
                std::string label = "v" + std::to_string(n) + "_" +
                                    std::to_string(iter) + "_" + std::to_string(c);
                gens.push_back({label, n});
                // Cone cocycle (m, a): d m = 0 and f m = d a, so d v := m is a
                // cocycle differential and phi v := a satisfies d phi = f d.
                diffs.push_back(model->from_vec(mpart, n + 1));
                (void)apart;
            }
            auto extended =
                std::make_shared<FreeAlgebra>(model->ks_extend(gens, diffs));
            for (int c = 0; c < h.dimension; ++c) {
                auto [mpart, apart] = cn.split(n, h.representatives[c]);
                (void)mpart;
                images.emplace(extended->generator_id(gens[c].first), apart);
            }
            model = extended;
            f = std::make_shared<AlgebraMorphism>(model, a, images);
        }
        detail::assert_stage_condition(*f, n, N + 2);
    }

    if (!model->stages_nondecreasing(r))
        throw ValidationError("emitted stages violate the minimal ordering");
    out.model = model;
    out.comparison = f;
    out.certificate = is_quasi_iso(*f, N);
    if (!out.iteration_cap_hit && !out.certificate.ok)
        throw ValidationError("comparison map failed its final certificate");
    return out;
}

/*
 * Chain-convention variant (homological degrees): per degree m, first kill
 * ker H_{m-1}(f) by degree-m extensions sourced in Z_{m-1}, then fill
 * coker H_m(f) by degree-m generators with zero differential. The emitted
 * stage list is ordered by non-decreasing degree.
 */
inline MinimalModel minimal_model_chain(TargetPtr a, int r, int N,
                                        const EngineOptions& opt = {}) {
    detail::require_engine_preconditions(a, r, N, Convention::Chain);
    std::mt19937_64 rng(opt.seed);
    std::mt19937_64* rng_ptr =
        opt.section_mode == SectionMode::SeededRandom ? &rng : nullptr;

    MinimalModel out;
    out.target = a;
    out.r = r;
    out.truncation = N;

    auto model = std::make_shared<FreeAlgebra>(
        FreeAlgebra(a->operad(), N + 2, opt.arity_cap));
    auto f = detail::initial_morphism(model, a);

    const ChainComplex& acx = *a->complex();

    for (int m = r + 1; m <= N; ++m) {
        // Kill kernels of H_{m-1}(f), iterating until none remain.
        for (int iter = 0;; ++iter) {
            auto src_target = std::make_shared<FreeAlgebraTarget>(model, -2, N + 2);
            auto hm = cohomology(*src_target->complex(), m - 1, rng_ptr);
            auto ha = cohomology(acx, m - 1);
            RatMatrix induced =
                ha.classifier.mul(f->matrix(m - 1)).mul(hm.section);
            SubspaceBasis ker = kernel(induced);
            out.stages.push_back({m, iter, ker.dim(), true});
            if (ker.dim() == 0) break;
            if (iter >= opt.iteration_cap) {
                out.iteration_cap_hit = true;
                break;
            }

            LinearSolver da(acx.d(m));  // A_m -> A_{m-1}
            std::vector<std::pair<std::string, int>> gens;
            std::vector<FreeElement> diffs;
            std::map<int, RatVec> images;
            for (const auto& [id, img] : f->images_map()) images.emplace(id, img);
            std::vector<RatVec> phis;
            for (int c = 0; c < ker.dim(); ++c) {
                RatVec z = hm.section.apply(ker.basis.row_dense(c));
                RatVec fz = f->matrix(m - 1).apply(z);
                auto sol = da.solve(fz);
                if (!sol)
                    throw ValidationError(
                        "kernel class image is not a boundary (degree " +
                        std::to_string(m - 1) + ")");
                gens.push_back({"v" + std::to_string(m) + "_" +
                                    std::to_string(iter) + "_" + std::to_string(c),
                                m});
                diffs.push_back(model->from_vec(z, m - 1));
                phis.push_back(*sol);
            }
            auto extended =
                std::make_shared<FreeAlgebra>(model->ks_extend(gens, diffs));
            for (int c = 0; c < ker.dim(); ++c)
                images.emplace(extended->generator_id(gens[c].first), phis[c]);
            model = extended;
            f = std::make_shared<AlgebraMorphism>(model, a, images);
        }

        // Fill the cokernel of H_m(f) with zero-differential generators.
        {
            auto src_target = std::make_shared<FreeAlgebraTarget>(model, -2, N + 2);
            auto hm = cohomology(*src_target->complex(), m);
            auto ha = cohomology(acx, m, rng_ptr);
            RatMatrix induced = ha.classifier.mul(f->matrix(m)).mul(hm.section);
            SubspaceBasis im = image(induced);
            QuotientSection qs = quotient_section(ha.dimension, im);
            int fill = qs.projection.rows();
            out.stages.push_back({m, 0, fill, false});
            if (fill > 0) {
                std::vector<std::pair<std::string, int>> gens;
                std::vector<FreeElement> diffs(fill);
                std::map<int, RatVec> images;
                for (const auto& [id, img] : f->images_map())
                    images.emplace(id, img);
                for (int c = 0; c < fill; ++c)
                    gens.push_back({"u" + std::to_string(m) + "_" +
                                        std::to_string(c),
                                    m});
                auto extended =
                    std::make_shared<FreeAlgebra>(model->ks_extend(gens, diffs));
                for (int c = 0; c < fill; ++c) {
                    RatVec hclass = qs.section.column_dense(c);
                    RatVec rep = ha.section.apply(hclass);
                    images.emplace(extended->generator_id(gens[c].first), rep);
                }
                model = extended;
                f = std::make_shared<AlgebraMorphism>(model, a, images);
            }
        }
    }

    if (!model->stages_nondecreasing(r))
        throw ValidationError("emitted stages violate the minimal ordering");
    out.model = model;
    out.comparison = f;
    out.certificate = is_quasi_iso(*f, N);
    if (!out.iteration_cap_hit && !out.certificate.ok)
        throw ValidationError("comparison map failed its final certificate");
    return out;
}

struct FreeHomologyResult {
    std::optional<MinimalModel> model;
    std::optional<int> refuted_degree;
    bool ok() const { return model.has_value(); }
};

/*
 * Shortcut for targets whose homology is free on candidate generators: lift
 * the designated classes to cocycles through a section, extend with zero
 * differential, and certify. A failing certificate refutes freeness at the
 * reported degree.
 */
inline FreeHomologyResult model_from_free_homology(
    TargetPtr a, const std::vector<std::pair<std::string, int>>& candidates, int N,
    int r = 0, const EngineOptions& opt = {}) {
    if (!a->operad()->has_zero_differential())
        throw PreconditionError(
            "free-homology shortcut expects an operad with zero differential "
            "(or truncated P-infinity data supplied as such)");
    std::mt19937_64 rng(opt.seed);
    std::mt19937_64* rng_ptr =
        opt.section_mode == SectionMode::SeededRandom ? &rng : nullptr;

    FreeHomologyResult out;
    auto model = std::make_shared<FreeAlgebra>(
        FreeAlgebra(a->operad(), N + 2, opt.arity_cap));
    auto f = detail::initial_morphism(model, a);

    // Group candidates by degree, ascending.
    std::map<int, std::vector<std::string>> by_degree;
    for (const auto& [label, deg] : candidates) by_degree[deg].push_back(label);

    for (const auto& [deg, labels] : by_degree) {
        auto src_target = std::make_shared<FreeAlgebraTarget>(model, -2, N + 2);
        auto hm = cohomology(*src_target->complex(), deg);
        auto ha = cohomology(*a->complex(), deg, rng_ptr);
        RatMatrix induced = ha.classifier.mul(f->matrix(deg)).mul(hm.section);
        QuotientSection qs = quotient_section(ha.dimension, image(induced));
        if (qs.projection.rows() < static_cast<int>(labels.size())) {
            out.refuted_degree = deg;
            return out;
        }
        std::vector<std::pair<std::string, int>> gens;
        std::vector<FreeElement> diffs(labels.size());
        std::map<int, RatVec> images;
        for (const auto& [id, img] : f->images_map()) images.emplace(id, img);
        for (size_t c = 0; c < labels.size(); ++c) gens.push_back({labels[c], deg});
        auto extended = std::make_shared<FreeAlgebra>(model->ks_extend(gens, diffs));
        for (size_t c = 0; c < labels.size(); ++c) {
            RatVec rep = ha.section.apply(
                qs.section.column_dense(static_cast<int>(c)));
            images.emplace(extended->generator_id(labels[c]), rep);
        }
        model = extended;
        f = std::make_shared<AlgebraMorphism>(model, a, images);
    }

    MinimalModel mm;
    mm.target = a;
    mm.r = r;
    mm.truncation = N;
    mm.model = model;
    mm.comparison = f;
    mm.certificate = is_quasi_iso(*f, N);
    if (!mm.certificate.ok) {
        out.refuted_degree = mm.certificate.first_failure;
        return out;
    }
    out.model = std::move(mm);
    return out;
}

}  // namespace minop
