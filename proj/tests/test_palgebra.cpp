#include <minop/algebra.hpp>
#include <minop/builtin.hpp>

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

/// Tabular H*(S^2; Q) over Com, window padded through `hi`.
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
    // x*x lands in degree 4 = 0; no entry.
    RatMatrix eta(1, 1);
    eta.set(0, 0, R(1));
    return std::make_shared<TabularAlgebra>(
        build_tabular_from_binary(com, cx, max_arity, binary, eta));
}

/// Upper-triangular 2x2 matrices: basis 1, E = e11, N = e12, all degree 0.
/// Noncommutative: EN = N, NE = 0.
std::shared_ptr<TabularAlgebra> triangular_algebra(OperadPtr ass, int max_arity) {
    auto cx = std::make_shared<ChainComplex>(
        space_of({{0, {"1", "E", "N"}}}, -1, 1), Convention::Cochain,
        std::map<int, RatMatrix>{});
    // Multiplication table in the word basis mu_e of Ass(2).
    auto mul = [](int a, int b) -> std::vector<std::pair<int, Rat>> {
        // indices: 0 = 1, 1 = E, 2 = N
        if (a == 0) return {{b, Rat(1)}};
        if (b == 0) return {{a, Rat(1)}};
        if (a == 1 && b == 1) return {{1, Rat(1)}};
        if (a == 1 && b == 2) return {{2, Rat(1)}};
        return {};  // NE = NN = 0
    };
    std::map<std::tuple<int, std::pair<int, int>, std::pair<int, int>>,
             std::vector<std::pair<int, Rat>>>
        binary;
    // Ass(2) basis: mu_e ("a*b") and mu_s ("b*a"); with degree-0 entries the
    // second is plain opposite multiplication.
    auto perms = builtins::detail::all_perms(2);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            for (int m = 0; m < 2; ++m) {
                Perm w = builtins::detail::word_of(perms[m]);
                int first = w[0] == 0 ? a : b;
                int second = w[0] == 0 ? b : a;
                auto prod = mul(first, second);
                if (!prod.empty()) binary[{m, {0, a}, {0, b}}] = prod;
            }
        }
    RatMatrix eta(3, 1);
    eta.set(0, 0, R(1));
    return std::make_shared<TabularAlgebra>(
        build_tabular_from_binary(ass, cx, max_arity, binary, eta));
}

std::shared_ptr<FreeAlgebra> sphere_model(OperadPtr com, int truncation) {
    FreeAlgebra base(com, truncation);
    auto a = std::make_shared<FreeAlgebra>(
        base.ks_extend({{"x", 2}}, {FreeElement{}}));
    int x = a->generator_id("x");
    FreeElement x2 = a->theta_basis(2, 0, {a->gen_element(x), a->gen_element(x)});
    return std::make_shared<FreeAlgebra>(a->ks_extend({{"y", 3}}, {x2}));
}

}  // namespace

TEST_CASE("tabular H*(S^2) validates and is 1-connected") {
    auto com = make_com_table(Convention::Cochain, 4);
    auto s2 = sphere_algebra(com, 6, 4);
    CHECK(s2->validate().ok());
    auto rep = check_connected(*s2, 1);
    CHECK(rep.ok);
}

TEST_CASE("connectivity failures carry witnesses") {
    auto com = make_com_table(Convention::Cochain, 3);
    SECTION("reduced operad needs H^0 = 0") {
        auto lie = make_lie_table(Convention::Cochain, 3);
        auto cx = std::make_shared<ChainComplex>(
            space_of({{0, {"u"}}}, -1, 2), Convention::Cochain,
            std::map<int, RatMatrix>{});
        TabularAlgebra a(lie, cx, 2);
        auto rep = check_connected(a, 0);
        CHECK_FALSE(rep.ok);
        CHECK(rep.witness.find("H^0") != std::string::npos);
    }
    SECTION("negative-degree cohomology is rejected") {
        auto cx = std::make_shared<ChainComplex>(
            space_of({{-1, {"w"}}, {0, {"1"}}}, -2, 2), Convention::Cochain,
            std::map<int, RatMatrix>{});
        TabularAlgebra a(com, cx, 2);
        RatMatrix eta(1, 1);
        eta.set(0, 0, R(1));
        a.set_unit(eta);
        auto rep = check_connected(a, 0);
        CHECK_FALSE(rep.ok);
        CHECK(rep.witness.find("H^-1") != std::string::npos);
    }
}

TEST_CASE("extend_morphism: the classical S^2 comparison map") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto s2 = sphere_algebra(com, 9, 6);
    auto model = sphere_model(com, 10);
    int x = model->generator_id("x"), y = model->generator_id("y");

    std::map<int, RatVec> images;
    images[x] = RatVec{R(1)};  // x |-> x
    images[y] = RatVec{};      // A^3 = 0
    images[y].resize(s2->dim(3), R(0));
    AlgebraMorphism f(model, s2, images);

    SECTION("identity-like matrices in low degrees") {
        CHECK(f.matrix(0) == RatMatrix::identity(1));
        CHECK(f.matrix(2) == RatMatrix::identity(1));
    }
    SECTION("certified quasi-isomorphism through degree 8") {
        auto cert = is_quasi_iso(f, 8);
        CHECK(cert.ok);
        for (const auto& [k, h] : cert.cone_h_dims) {
            (void)k;
            CHECK(h == 0);
        }
    }
    SECTION("x |-> 0 fails at degree 2") {
        std::map<int, RatVec> zero_images;
        zero_images[x] = RatVec(s2->dim(2), R(0));
        zero_images[y] = RatVec(s2->dim(3), R(0));
        AlgebraMorphism g(model, s2, zero_images);
        auto cert = is_quasi_iso(g, 4);
        CHECK_FALSE(cert.ok);
        CHECK(cert.first_failure == 2);
    }
    SECTION("wrong-degree image is rejected") {
        std::map<int, RatVec> bad;
        bad[x] = RatVec(s2->dim(2), R(0));
        bad[y] = RatVec{R(1)};  // shape of degree 2, not 3
        if (s2->dim(3) != 1)
            CHECK_THROWS_AS(AlgebraMorphism(model, s2, bad), PreconditionError);
        else
            SUCCEED();
    }
}

TEST_CASE("identity morphism on a free algebra and functoriality") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto model = sphere_model(com, 9);
    auto target = std::make_shared<FreeAlgebraTarget>(model, -1, 9);

    std::map<int, RatVec> images;
    for (const auto& g : model->generators()) {
        int id = model->generator_id(g.label);
        images[id] = model->to_vec(model->gen_element(id), g.degree);
    }
    AlgebraMorphism ident(model, target, images);
    for (int k = 0; k <= 7; ++k)
        CHECK(ident.matrix(k) == RatMatrix::identity(model->dim(k)));

    // Functoriality: scaling x by 2 then mapping to the sphere equals the
    // composite with doubled image.
    std::map<int, RatVec> scale;
    int x = model->generator_id("x"), y = model->generator_id("y");
    scale[x] = model->to_vec(free_scaled(model->gen_element(x), R(2)), 2);
    scale[y] = model->to_vec(free_scaled(model->gen_element(y), R(4)), 3);
    AlgebraMorphism gmap(model, target, scale);

    auto s2 = sphere_algebra(com, 9, 6);
    std::map<int, RatVec> fimg;
    fimg[x] = RatVec{R(1)};
    fimg[y] = RatVec(s2->dim(3), R(0));
    AlgebraMorphism f(model, s2, fimg);

    AlgebraMorphism composite = compose_morphisms(f, gmap);
    for (int k = 0; k <= 7; ++k)
        CHECK(composite.matrix(k) == f.matrix(k).mul(gmap.matrix(k)));
}

TEST_CASE("morphisms commute with differentials degreewise") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto s2 = sphere_algebra(com, 9, 6);
    auto model = sphere_model(com, 10);
    std::map<int, RatVec> images;
    images[model->generator_id("x")] = RatVec{R(1)};
    images[model->generator_id("y")] = RatVec(s2->dim(3), R(0));
    AlgebraMorphism f(model, s2, images);
    for (int k = 0; k <= 7; ++k) {
        RatMatrix lhs = s2->complex()->d(k).mul(f.matrix(k));
        RatMatrix rhs = f.matrix(k + 1).mul(model->differential_matrix(k));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("restriction of scalars along Lie -> Ass is the graded commutator") {
    auto lie2ass = lie_to_ass_morphism(Convention::Cochain, 3);
    auto tri = triangular_algebra(lie2ass.dst(), 3);
    REQUIRE(tri->validate().ok());

    TabularAlgebra restricted = TabularAlgebra::restrict_scalars(lie2ass, *tri);

    // theta'(bracket; a, b) = a*b - (-1)^{|a||b|} b*a on every basis pair.
    auto perms = builtins::detail::all_perms(2);
    int mu_e = -1, mu_s = -1;
    for (int m = 0; m < 2; ++m)
        (builtins::detail::word_of(perms[m])[0] == 0 ? mu_e : mu_s) = m;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            RatVec lhs = restricted.theta_basis(2, 0, {{0, a}, {0, b}});
            RatVec ab = tri->theta_basis(2, mu_e, {{0, a}, {0, b}});
            RatVec ba = tri->theta_basis(2, mu_e, {{0, b}, {0, a}});
            RatVec want(ab.size(), R(0));
            for (size_t z = 0; z < ab.size(); ++z) want[z] = ab[z] - ba[z];
            CHECK(lhs == want);
        }

    // The bracket [E, N] = N is genuinely nonzero.
    RatVec en = restricted.theta_basis(2, 0, {{0, 1}, {0, 2}});
    CHECK(en == RatVec{R(0), R(0), R(1)});

    // Underlying complex untouched: cohomology dimensions equal degreewise.
    for (int k = 0; k <= 0; ++k)
        CHECK(cohomology(*restricted.complex(), k).dimension ==
              cohomology(*tri->complex(), k).dimension);

    // Composition identity: theta_{F*B}(mu; ...) = theta_B(F mu; ...).
    for (int n = 1; n <= 3; ++n)
        for (int m = 0; m < lie2ass.src()->dim(n); ++m) {
            RatVec fmu = lie2ass.at(n).apply(lie2ass.src()->basis_vec(n, m));
            std::vector<std::pair<int, int>> inputs(n, {0, 1});
            RatVec lhs = restricted.theta_basis(n, m, inputs);
            RatVec rhs(tri->dim(0), R(0));
            for (int t = 0; t < lie2ass.dst()->dim(n); ++t) {
                if (fmu[t] == 0) continue;
                RatVec part = tri->theta_basis(n, t, inputs);
                for (size_t z = 0; z < rhs.size(); ++z) rhs[z] += fmu[t] * part[z];
            }
            CHECK(lhs == rhs);
        }
}

TEST_CASE("restriction along the identity morphism is structural identity") {
    auto com = make_com_table(Convention::Cochain, 3);
    auto s2 = sphere_algebra(com, 6, 3);
    std::vector<RatMatrix> mats;
    for (int n = 0; n <= 3; ++n) mats.push_back(RatMatrix::identity(com->dim(n)));
    OperadMorphism idm(com, com, mats);
    TabularAlgebra r = TabularAlgebra::restrict_scalars(idm, *s2);
    CHECK(r.entries() == s2->entries());
    CHECK(r.unit_map() == s2->unit_map());
}

TEST_CASE("restriction rejects mismatched operads") {
    auto lie2ass = lie_to_ass_morphism(Convention::Cochain, 3);
    auto com = make_com_table(Convention::Cochain, 3);
    auto s2 = sphere_algebra(com, 6, 3);
    CHECK_THROWS_AS(TabularAlgebra::restrict_scalars(lie2ass, *s2),
                    PreconditionError);
}

TEST_CASE("theta table cap is a hard error, not a zero") {
    auto com = make_com_table(Convention::Cochain, 6);
    auto s2 = sphere_algebra(com, 6, 2);
    RatVec one(1, R(1));
    std::vector<std::pair<int, RatVec>> args(3, {0, one});
    CHECK_THROWS_AS(s2->theta(3, com->basis_vec(3, 0), args), PreconditionError);
}
