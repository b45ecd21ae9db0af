#include <minop/builtin.hpp>
#include <minop/free_algebra.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace minop;
using namespace minop::builtins;

namespace {

Rat R(long n, long d = 1) { return Rat(Int(n), Int(d)); }

/*
 * Brute-force coinvariant oracle: the full tensor space P(n) (x) V^{(x)n} on
 * ordered tuples, modulo the relations  (mu s_j) (x) w  ~  koszul * mu (x)
 * (w with j, j+1 swapped),  dimension by rank. No canonicalization, no reuse
 * of the tuple-space quotients.
 */
int oracle_dim(const OperadTable& p, const std::vector<int>& gen_degrees, int k,
               int max_arity) {
    struct Key {
        int mu;
        std::vector<int> tuple;
        bool operator<(const Key& o) const {
            return std::tie(mu, tuple) < std::tie(o.mu, o.tuple);
        }
    };

    int total = 0;
    std::map<Key, int> index;
    std::vector<Key> keys;
    int g = static_cast<int>(gen_degrees.size());

    for (int n = 0; n <= std::min(max_arity, p.arity_bound()); ++n) {
        std::vector<std::vector<int>> tuples;
        std::vector<int> cur;
        std::function<void()> rec = [&]() {
            if (static_cast<int>(cur.size()) == n) {
                tuples.push_back(cur);
                return;
            }
            for (int t = 0; t < g; ++t) {
                cur.push_back(t);
                rec();
                cur.pop_back();
            }
        };
        rec();
        for (const auto& w : tuples) {
            int deg = 0;
            for (int t : w) deg += gen_degrees[t];
            for (int i = 0; i < p.dim(n); ++i) {
                if (p.degree_of(n, i) + deg != k) continue;
                Key key{i, w};
                index.emplace(key, total++);
                keys.push_back(key);
            }
        }
    }

    std::vector<RatVec> relations;
    for (const auto& key : keys) {
        int n = static_cast<int>(key.tuple.size());
        for (int j = 0; j + 1 < n; ++j) {
            RatVec rel(total, R(0));
            RatMatrix t = p.transposition(n, j);
            RatVec e(p.dim(n), R(0));
            e[key.mu] = 1;
            RatVec img = t.apply(e);
            for (int r = 0; r < p.dim(n); ++r)
                if (img[r] != 0) rel[index.at(Key{r, key.tuple})] += img[r];
            std::vector<int> sw = key.tuple;
            std::swap(sw[j], sw[j + 1]);
            int sgn = (gen_degrees[key.tuple[j]] * gen_degrees[key.tuple[j + 1]]) % 2
                          ? -1
                          : 1;
            rel[index.at(Key{key.mu, sw})] -= R(sgn);
            bool nonzero = false;
            for (const auto& x : rel)
                if (x != 0) nonzero = true;
            if (nonzero) relations.push_back(std::move(rel));
        }
    }
    return total - SubspaceBasis::from_vectors(total, relations).dim();
}

/// Attach zero-differential generators as one stage per degree, ascending.
FreeAlgebra attach_free(FreeAlgebra a,
                        std::vector<std::pair<std::string, int>> gens) {
    std::stable_sort(gens.begin(), gens.end(),
                     [](const auto& x, const auto& y) { return x.second < y.second; });
    size_t i = 0;
    while (i < gens.size()) {
        size_t j = i;
        while (j < gens.size() && gens[j].second == gens[i].second) ++j;
        std::vector<std::pair<std::string, int>> stage(gens.begin() + i,
                                                       gens.begin() + j);
        a = a.ks_extend(stage, std::vector<FreeElement>(stage.size()));
        i = j;
    }
    return a;
}

FreeAlgebra algebra_on(OperadPtr op, const std::vector<std::pair<std::string, int>>& gens,
                       int truncation, std::optional<int> cap = std::nullopt) {
    return attach_free(FreeAlgebra(std::move(op), truncation, cap), gens);
}

// Random valid symmetric collection: trivial/sign/regular blocks at random
// tame degrees, unit in arity 1, zero differential and no compositions
// (free_basis never composes). Dimension-testing scaffolding only.
std::shared_ptr<OperadTable> random_tame_table(std::mt19937_64& rng, int r,
                                               int bound, bool unitary) {
    auto p = std::make_shared<OperadTable>(
        "Rnd", Convention::Cochain, unitary ? Unitality::Unitary : Unitality::Reduced,
        bound);
    if (unitary) p->add_basis_elt(0, 0, "1", "1");
    p->add_basis_elt(1, 0, "id", "%1");
    std::uniform_int_distribution<int> nblocks(1, 2), kind(0, 2), offset(1, 3);
    for (int n = 2; n <= bound; ++n) {
        int lowest = (1 - n) * (1 + r);  // tame needs q strictly above this
        struct Block {
            int kind, degree;
        };
        std::vector<Block> blocks;
        int nb = nblocks(rng);
        for (int b = 0; b < nb; ++b)
            blocks.push_back({kind(rng), lowest + offset(rng)});
        std::vector<int> block_start;
        for (const auto& b : blocks) {
            block_start.push_back(p->dim(n));
            int dim = b.kind == 2 ? 1 : 1;
            if (b.kind == 0) dim = 1;  // trivial
            if (b.kind == 1) dim = 1;  // sign
            if (b.kind == 2) {         // regular
                dim = 1;
                for (int t = 2; t <= n; ++t) dim *= t;
            }
            for (int i = 0; i < dim; ++i)
                p->add_basis_elt(n, b.degree,
                                 "b" + std::to_string(n) + "_" +
                                     std::to_string(block_start.back() + i),
                                 "op(...)");
        }
        std::vector<RatMatrix> ts;
        auto perms = builtins::detail::all_perms(n);
        std::map<Perm, int> pidx;
        for (int a = 0; a < static_cast<int>(perms.size()); ++a) pidx[perms[a]] = a;
        for (int j = 0; j + 1 < n; ++j) {
            RatMatrix t(p->dim(n), p->dim(n));
            for (size_t b = 0; b < blocks.size(); ++b) {
                int s = block_start[b];
                if (blocks[b].kind == 0) t.set(s, s, R(1));
                if (blocks[b].kind == 1) t.set(s, s, R(-1));
                if (blocks[b].kind == 2) {
                    Perm sj = perm_transposition(n, j);
                    for (int a = 0; a < static_cast<int>(perms.size()); ++a)
                        t.set(s + pidx[perm_compose(perms[a], sj)], s + a, R(1));
                }
            }
            ts.push_back(std::move(t));
        }
        p->set_transpositions(n, std::move(ts));
    }
    return p;
}

}  // namespace

TEST_CASE("Com free algebra on one even generator") {
    auto com = make_com_table(Convention::Cochain, 6);
    auto a = algebra_on(com, {{"x", 2}}, 10);
    CHECK(a.dim(0) == 1);  // the unit from P(0)
    CHECK(a.dim(2) == 1);
    CHECK(a.dim(3) == 0);
    CHECK(a.dim(4) == 1);  // x*x
    CHECK(a.dim(6) == 1);
    CHECK(a.dim(1) == 0);
}

TEST_CASE("classical exterior/polynomial dimensions of Com<x2,y3>") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto a = algebra_on(com, {{"x", 2}, {"y", 3}}, 10);
    std::vector<int> expected = {1, 0, 1, 1, 1, 1, 1, 1, 1};  // degrees 0..8
    for (int k = 0; k <= 8; ++k) CHECK(a.dim(k) == expected[k]);
    CHECK(a.dim(9) == 1);  // x^3 y
}

TEST_CASE("Lie free algebra on one odd generator (explicit arity cap)") {
    auto lie = make_lie_table(Convention::Cochain, 4);
    FreeAlgebra base(lie, 8, 4);
    auto a = base.ks_extend({{"x", 1}}, {FreeElement{}});
    CHECK(a.dim(1) == 1);
    CHECK(a.dim(2) == 1);  // [x,x] survives for odd x
    CHECK(a.dim(3) == 0);  // graded Jacobi kills [x,[x,x]]
}

TEST_CASE("free_basis dimensions match the brute-force coinvariant oracle") {
    std::mt19937_64 rng(7721);
    std::uniform_int_distribution<int> ndeg(1, 4), ngens(1, 3);
    std::vector<std::shared_ptr<OperadTable>> ops = {
        make_com_table(Convention::Cochain, 4),
        make_ass_table(Convention::Cochain, 4),
        make_lie_table(Convention::Cochain, 4),
        make_ger_table(Convention::Cochain, 4),
    };
    int cases = 0;
    for (const auto& op : ops) {
        for (int trial = 0; trial < 6; ++trial) {
            int g = ngens(rng);
            std::vector<std::pair<std::string, int>> gens;
            std::vector<int> degs;
            for (int t = 0; t < g; ++t) {
                int d = ndeg(rng);
                gens.push_back({"g" + std::to_string(t), d});
                degs.push_back(d);
            }
            auto a = algebra_on(op, gens, 9, 4);
            for (int k = 0; k <= 8; ++k) {
                CHECK(a.dim(k) == oracle_dim(*op, degs, k, 4));
                ++cases;
            }
        }
    }
    CHECK(cases >= 150);
}

TEST_CASE("theta: unit slot, Com square, Lie brackets") {
    auto com = make_com_table(Convention::Cochain, 6);
    auto a = algebra_on(com, {{"x", 2}}, 10);
    int x = a.generator_id("x");

    SECTION("identity operation is the identity") {
        FreeElement e = a.theta_basis(1, 0, {a.gen_element(x)});
        CHECK(e == a.gen_element(x));
    }
    SECTION("Com product of x with x is the degree-4 basis monomial") {
        FreeElement e =
            a.theta_basis(2, 0, {a.gen_element(x), a.gen_element(x)});
        REQUIRE(e.size() == 1);
        CHECK(e.begin()->second == R(1));
        CHECK(a.degree_of(e) == 4);
    }
    SECTION("product with the unit is the identity map") {
        FreeElement e = a.theta_basis(2, 0, {a.gen_element(x), a.unit_element()});
        CHECK(e == a.gen_element(x));
    }

    auto lie = make_lie_table(Convention::Cochain, 4);
    FreeAlgebra lbase(lie, 8, 4);
    auto al = lbase.ks_extend({{"x", 1}}, {FreeElement{}});
    int lx = al.generator_id("x");
    SECTION("[x,x] nonzero, [x,[x,x]] zero for odd x") {
        FreeElement br =
            al.theta_basis(2, 0, {al.gen_element(lx), al.gen_element(lx)});
        CHECK_FALSE(br.empty());
        FreeElement nested = al.theta_basis(2, 0, {al.gen_element(lx), br});
        CHECK(nested.empty());
    }
}

TEST_CASE("derivation: Leibniz on Com<x2,y3> with dy = x^2") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto a0 = algebra_on(com, {{"x", 2}}, 12);
    int x = a0.generator_id("x");
    FreeElement x2 = a0.theta_basis(2, 0, {a0.gen_element(x), a0.gen_element(x)});
    auto a = a0.ks_extend({{"y", 3}}, {x2});
    int y = a.generator_id("y");

    // d(x*y) = x^3 with coefficient +1 (x even).
    FreeElement xy = a.theta_basis(2, 0, {a.gen_element(x), a.gen_element(y)});
    FreeElement dxy = a.differentiate(xy);
    FreeElement x3 = a.theta_basis(2, 0, {a.gen_element(x),
                                          a.theta_basis(2, 0, {a.gen_element(x),
                                                               a.gen_element(x)})});
    CHECK(dxy == x3);

    // d^2 = 0 on the whole window.
    a.check_d_squared(0, 10);

    // d(y*y) vanishes: y odd means y*y = 0 already.
    FreeElement yy = a.theta_basis(2, 0, {a.gen_element(y), a.gen_element(y)});
    CHECK(yy.empty());
}

TEST_CASE("ks_extend validates cocycles and degree bookkeeping") {
    auto com = make_com_table(Convention::Cochain, 8);
    auto a = algebra_on(com, {{"x", 2}}, 12);
    int x = a.generator_id("x");
    FreeElement x2 = a.theta_basis(2, 0, {a.gen_element(x), a.gen_element(x)});

    SECTION("attaching y3 with dy = x^2 bumps degree-5 dimension") {
        auto ext = a.ks_extend({{"y", 3}}, {x2});
        CHECK(ext.dim(5) == 1);  // x*y
        CHECK(ext.dim(3) == 1);  // y
    }
    SECTION("zero differential extension") {
        auto ext = a.ks_extend({{"z", 3}}, {FreeElement{}});
        CHECK(ext.dim(3) == 1);
        ext.check_d_squared(0, 10);
    }
    SECTION("non-cocycle differential is rejected by name") {
        // First make x non-closed by attaching u with du = x impossible:
        // instead attach w4 with dw = x*y where y has dy = x^2, so
        // d(x*y) = x^3 != 0.
        auto ext = a.ks_extend({{"y", 3}}, {x2});
        int yy = ext.generator_id("y");
        FreeElement xy = ext.theta_basis(
            2, 0, {ext.gen_element(ext.generator_id("x")), ext.gen_element(yy)});
        try {
            ext.ks_extend({{"w", 4}}, {xy});
            FAIL("expected a cocycle violation");
        } catch (const PreconditionError& e) {
            CHECK(std::string(e.what()).find("w") != std::string::npos);
        }
    }
    SECTION("wrong-degree differential is rejected") {
        CHECK_THROWS_AS(a.ks_extend({{"y", 5}}, {x2}), PreconditionError);
    }
}

TEST_CASE("unbounded arity demands an explicit cap") {
    auto com = make_com_table(Convention::Cochain, 4);
    FreeAlgebra base(com, 8);
    auto a = base.ks_extend({{"t", 1}}, {FreeElement{}});
    CHECK_THROWS_AS(a.dim(3), PreconditionError);
    FreeAlgebra capped(com, 8, 4);
    auto b = capped.ks_extend({{"t", 1}}, {FreeElement{}});
    CHECK(b.dim(1) == 1);
    CHECK(b.dim(3) == 0);  // odd generator squares to zero over Com
}

TEST_CASE("Lemma 4.5-style vanishing over randomized tame tables") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 12; ++trial) {
        int r = std::uniform_int_distribution<int>(0, 2)(rng);
        bool unitary = trial % 2 == 0;
        auto p = random_tame_table(rng, r, 3, unitary);
        REQUIRE(p->tameness_index().r.has_value());
        REQUIRE(*p->tameness_index().r <= r);

        int g = std::uniform_int_distribution<int>(1, 3)(rng);
        std::vector<std::pair<std::string, int>> gens;
        for (int t = 0; t < g; ++t)
            gens.push_back({"v" + std::to_string(t),
                            r + 1 + std::uniform_int_distribution<int>(0, 4)(rng)});
        auto a = attach_free(FreeAlgebra(p, r + 9, 3), gens);

        CHECK(a.dim(0) == p->dim(0));
        for (int k = -4; k <= r; ++k)
            if (k != 0) CHECK(a.dim(k) == 0);
    }
}

TEST_CASE("Lemma 4.6-style stability of KS-extension dimensions") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 12; ++trial) {
        int r = std::uniform_int_distribution<int>(0, 1)(rng);
        auto p = random_tame_table(rng, r, 3, trial % 2 == 0);
        int pdeg = r + 2 + std::uniform_int_distribution<int>(0, 2)(rng);

        int g = std::uniform_int_distribution<int>(1, 2)(rng);
        std::vector<std::pair<std::string, int>> gens;
        bool has_rp1 = false;
        for (int t = 0; t < g; ++t) {
            int d = r + 1 + std::uniform_int_distribution<int>(0, pdeg - r - 1)(rng);
            if (d == r + 1) has_rp1 = true;
            gens.push_back({"v" + std::to_string(t), d});
        }
        auto a = attach_free(FreeAlgebra(p, pdeg + 4, 3), gens);
        int vprime = std::uniform_int_distribution<int>(1, 2)(rng);
        std::vector<std::pair<std::string, int>> extra;
        for (int t = 0; t < vprime; ++t) extra.push_back({"w" + std::to_string(t), pdeg});
        auto b = a.ks_extend(extra, std::vector<FreeElement>(vprime));

        for (int k = r; k < pdeg; ++k) CHECK(b.dim(k) == a.dim(k));
        CHECK(b.dim(pdeg) == a.dim(pdeg) + vprime);
        if (r + 1 < pdeg && !has_rp1) CHECK(b.dim(pdeg + 1) == a.dim(pdeg + 1));
    }
}
