#include <minop/builtin.hpp>
#include <minop/minimal.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace minop;
using namespace minop::builtins;

namespace {

Rat R(long n, long d = 1) { return Rat(Int(n), Int(d)); }

GradedSpace space_of(std::map<int, std::vector<std::string>> per_degree, int lo,
                     int hi) {
    GradedSpace s(lo, hi);
    for (auto& [k, labels] : per_degree) s.set_basis(k, labels);
    return s;
}

std::shared_ptr<TabularAlgebra> sphere_algebra(OperadPtr com, int hi, int max_arity) {
    auto cx = std::make_shared<ChainComplex>(
        space_of({{0, {"1"}}, {2, {"x"}}}, -1, hi), Convention::Cochain,
        std::map<int, RatMatrix>{});
    std::map<std::tuple<int, std::pair<int, int>, std::pair<int, int>>,
             std::vector<std::pair<int, Rat>>>
        binary;
    binary[{0, {0, 0}, {0, 0}}] = {{0, R(1)}};
    binary[{0, {0, 0}, {2, 0}}] = {{0, R(1)}};
    binary[{0, {2, 0}, {0, 0}}] = {{0, R(1)}};
    RatMatrix eta(1, 1);
    eta.set(0, 0, R(1));
    return std::make_shared<TabularAlgebra>(
        build_tabular_from_binary(com, cx, max_arity, binary, eta));
}

std::shared_ptr<TabularAlgebra> point_algebra(OperadPtr com, int hi) {
    auto cx = std::make_shared<ChainComplex>(space_of({{0, {"1"}}}, -1, hi),
                                             com->convention(),
                                             std::map<int, RatMatrix>{});
    std::map<std::tuple<int, std::pair<int, int>, std::pair<int, int>>,
             std::vector<std::pair<int, Rat>>>
        binary;
    binary[{0, {0, 0}, {0, 0}}] = {{0, R(1)}};
    RatMatrix eta(1, 1);
    eta.set(0, 0, R(1));
    return std::make_shared<TabularAlgebra>(
        build_tabular_from_binary(com, cx, 4, binary, eta));
}

/// Contractible chain Com-algebra: 1 in degree 0, dv = u with u_1, v_2; all
/// positive-degree products vanish.
std::shared_ptr<TabularAlgebra> acyclic_chain_algebra(OperadPtr com_chain, int hi) {
    std::map<int, RatMatrix> d;
    RatMatrix d2(1, 1);
    d2.set(0, 0, R(1));
    d.emplace(2, d2);  // d v = u
    auto cx = std::make_shared<ChainComplex>(
        space_of({{0, {"1"}}, {1, {"u"}}, {2, {"v"}}}, -1, hi), Convention::Chain,
        d);
    std::map<std::tuple<int, std::pair<int, int>, std::pair<int, int>>,
             std::vector<std::pair<int, Rat>>>
        binary;
    binary[{0, {0, 0}, {0, 0}}] = {{0, R(1)}};
    binary[{0, {0, 0}, {1, 0}}] = {{0, R(1)}};
    binary[{0, {1, 0}, {0, 0}}] = {{0, R(1)}};
    binary[{0, {0, 0}, {2, 0}}] = {{0, R(1)}};
    binary[{0, {2, 0}, {0, 0}}] = {{0, R(1)}};
    RatMatrix eta(1, 1);
    eta.set(0, 0, R(1));
    return std::make_shared<TabularAlgebra>(
        build_tabular_from_binary(com_chain, cx, 4, binary, eta));
}

}  // namespace

TEST_CASE("minimal model of H*(S^2): generators in degrees 2 and 3 only") {
    auto com = make_com_table(Convention::Cochain, 6);
    auto s2 = sphere_algebra(com, 9, 6);
    MinimalModel mm = minimal_model_cochain(s2, 1, 8);

    auto dims = mm.generator_dims();
    CHECK(dims == std::map<int, int>{{2, 1}, {3, 1}});
    CHECK(mm.certificate.ok);
    CHECK_FALSE(mm.iteration_cap_hit);

    // d(gen3) is a nonzero multiple of gen2^2.
    int y = -1, x = -1;
    for (const auto& g : mm.model->generators()) {
        if (g.degree == 3) y = mm.model->generator_id(g.label);
        if (g.degree == 2) x = mm.model->generator_id(g.label);
    }
    REQUIRE(x >= 0);
    REQUIRE(y >= 0);
    FreeElement dy = mm.model->generator_diff(y);
    FreeElement x2 = mm.model->theta_basis(
        2, 0, {mm.model->gen_element(x), mm.model->gen_element(x)});
    REQUIRE(dy.size() == 1);
    REQUIRE(x2.size() == 1);
    CHECK(dy.begin()->first == x2.begin()->first);
    CHECK(dy.begin()->second != 0);

    // One KS-extension per degree (1-connected finite-type input, r = 0 run).
    MinimalModel mm0 = minimal_model_cochain(s2, 0, 8);
    CHECK(mm0.generator_dims() == dims);
    for (int n = 1; n <= 8; ++n) CHECK(mm0.extensions_at_degree(n) <= 1);
}

TEST_CASE("already-minimal target: free Com<x3> with zero differential") {
    auto com = make_com_table(Convention::Cochain, 6);
    FreeAlgebra base(com, 12);
    auto alg = std::make_shared<FreeAlgebra>(
        base.ks_extend({{"x", 3}}, {FreeElement{}}));
    auto target = std::make_shared<FreeAlgebraTarget>(alg, -1, 11);

    MinimalModel mm = minimal_model_cochain(target, 0, 10);
    CHECK(mm.generator_dims() == std::map<int, int>{{3, 1}});
    CHECK(mm.certificate.ok);
}

TEST_CASE("cohomology concentrated in degree zero gives the empty model") {
    auto com = make_com_table(Convention::Cochain, 4);
    auto pt = point_algebra(com, 7);
    MinimalModel mm = minimal_model_cochain(pt, 1, 6);
    CHECK(mm.model->generators().empty());
    CHECK(mm.certificate.ok);
}

TEST_CASE("precondition failures are loud") {
    auto com = make_com_table(Convention::Cochain, 4);
    auto s2 = sphere_algebra(com, 7, 4);
    SECTION("window too small") {
        CHECK_THROWS_AS(minimal_model_cochain(s2, 1, 8), PreconditionError);
    }
    SECTION("Ger cochain is not 0-tame") {
        auto ger = make_ger_table(Convention::Cochain, 3);
        auto cx = std::make_shared<ChainComplex>(
            space_of({{2, {"a"}}}, -1, 4), Convention::Cochain,
            std::map<int, RatMatrix>{});
        auto a = std::make_shared<TabularAlgebra>(ger, cx, 3);
        CHECK_THROWS_AS(minimal_model_cochain(a, 0, 3), PreconditionError);
    }
    SECTION("not connected") {
        auto lie = make_lie_table(Convention::Cochain, 3);
        auto cx = std::make_shared<ChainComplex>(
            space_of({{0, {"bad"}}}, -1, 4), Convention::Cochain,
            std::map<int, RatMatrix>{});
        auto a = std::make_shared<TabularAlgebra>(lie, cx, 3);
        CHECK_THROWS_AS(minimal_model_cochain(a, 0, 3), PreconditionError);
    }
}

TEST_CASE("chain engine: free Ger<e2> with zero differential is its own model") {
    auto ger = make_ger_table(Convention::Chain, 5);
    FreeAlgebra base(ger, 10);
    auto alg = std::make_shared<FreeAlgebra>(
        base.ks_extend({{"e", 2}}, {FreeElement{}}));
    auto target = std::make_shared<FreeAlgebraTarget>(alg, -1, 9);

    MinimalModel mm = minimal_model_chain(target, 0, 8);
    CHECK(mm.generator_dims() == std::map<int, int>{{2, 1}});
    CHECK(mm.certificate.ok);

    // Stage list ordered by non-decreasing degree.
    int prev = 0;
    for (const auto& s : mm.stages) {
        if (s.attached == 0) continue;
        CHECK(s.degree >= prev);
        prev = s.degree;
    }
}

TEST_CASE("chain engine: acyclic augmented algebra has the empty model") {
    auto com = make_com_table(Convention::Chain, 4);
    auto a = acyclic_chain_algebra(com, 7);
    MinimalModel mm = minimal_model_chain(a, 0, 6);
    CHECK(mm.model->generators().empty());
    CHECK(mm.certificate.ok);
}

TEST_CASE("chain engine: two-step complex over reduced Lie with zero bracket") {
    auto lie = make_lie_table(Convention::Chain, 4);
    std::map<int, RatMatrix> d;
    RatMatrix d2(1, 1);
    d2.set(0, 0, R(1));
    d.emplace(2, d2);  // d u2 = v1
    auto cx = std::make_shared<ChainComplex>(
        space_of({{1, {"v"}}, {2, {"u"}}}, -1, 7), Convention::Chain, d);
    auto a = std::make_shared<TabularAlgebra>(lie, cx, 4);
    // zero bracket tables; identity arity-1 entries
    auto at = std::const_pointer_cast<TabularAlgebra>(
        std::static_pointer_cast<const TabularAlgebra>(a));
    for (int k : {1, 2})
        at->add_entry(1, 0, {{k, 0}}, 0, R(1));

    MinimalModel mm = minimal_model_chain(a, 0, 6);
    CHECK(mm.model->generators().empty());
    CHECK(mm.certificate.ok);
}

TEST_CASE("free-homology shortcut certifies and refutes") {
    SECTION("a free algebra is its own model (inclusion section)") {
        auto com = make_com_table(Convention::Cochain, 6);
        FreeAlgebra base(com, 10);
        auto alg = std::make_shared<FreeAlgebra>(
            base.ks_extend({{"e", 2}}, {FreeElement{}}));
        auto target = std::make_shared<FreeAlgebraTarget>(alg, -1, 9);
        auto res = model_from_free_homology(target, {{"e", 2}}, 8);
        REQUIRE(res.ok());
        CHECK(res.model->certificate.ok);
        CHECK(res.model->generator_dims() == std::map<int, int>{{2, 1}});
    }
    SECTION("truncated polynomial homology is refuted at the first gap") {
        auto com = make_com_table(Convention::Cochain, 6);
        auto s2 = sphere_algebra(com, 9, 6);
        auto res = model_from_free_homology(s2, {{"e", 2}}, 8);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.refuted_degree == 4);  // x^2 = 0 in the target, not free
    }
    SECTION("chain Ger<e2>: the double-loop-space toy model") {
        auto ger = make_ger_table(Convention::Chain, 5);
        FreeAlgebra base(ger, 10);
        auto alg = std::make_shared<FreeAlgebra>(
            base.ks_extend({{"e", 2}}, {FreeElement{}}));
        auto target = std::make_shared<FreeAlgebraTarget>(alg, -1, 9);
        auto res = model_from_free_homology(target, {{"e", 2}}, 8);
        REQUIRE(res.ok());
        CHECK(res.model->certificate.ok);
    }
}

TEST_CASE("seeded-random sections keep generator dimensions") {
    auto com = make_com_table(Convention::Cochain, 6);
    auto s2 = sphere_algebra(com, 9, 6);
    EngineOptions canonical;
    EngineOptions randomized;
    randomized.section_mode = SectionMode::SeededRandom;
    randomized.seed = 20240809;
    MinimalModel a = minimal_model_cochain(s2, 1, 8, canonical);
    MinimalModel b = minimal_model_cochain(s2, 1, 8, randomized);
    CHECK(a.generator_dims() == b.generator_dims());
    CHECK(b.certificate.ok);
}
