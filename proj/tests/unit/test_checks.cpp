#include <doctest.h>

#include "finitopos/checks.hpp"
#include "finitopos/fixtures.hpp"

using namespace finitopos;

namespace {

// Order-theoretic model of a poset category, independent of the limit search.
struct Order {
    int n = 0;
    std::vector<std::vector<char>> le;

    explicit Order(const FinCategory& c) : n(c.num_objects()), le(n, std::vector<char>(n, 0)) {
        for (const auto& m : c.morphisms()) le[m.dom][m.cod] = 1;
    }
    int meet(int x, int y) const {
        for (int z = 0; z < n; ++z) {
            if (!le[z][x] || !le[z][y]) continue;
            bool top = true;
            for (int w = 0; w < n; ++w)
                if (le[w][x] && le[w][y] && !le[w][z]) top = false;
            if (top) return z;
        }
        return -1;
    }
};

bool oracle_stable_units(const Reflection& r) {
    Order b(*r.big()), a(*r.small());
    for (int t = 0; t < a.n; ++t) {
        int ft = r.right.obj(t);
        for (int x = 0; x < b.n; ++x)
            for (int y = 0; y < b.n; ++y) {
                if (!b.le[x][ft] || !b.le[y][ft]) continue;
                if (r.left.obj(b.meet(x, y)) != a.meet(r.left.obj(x), r.left.obj(y))) return false;
            }
    }
    return true;
}

bool oracle_semi_left_exact(const Reflection& r) {
    Order b(*r.big()), a(*r.small());
    for (int t = 0; t < a.n; ++t)
        for (int t2 = 0; t2 < a.n; ++t2) {
            if (!a.le[t2][t]) continue;
            for (int x = 0; x < b.n; ++x) {
                if (!b.le[x][r.right.obj(t)]) continue;
                if (r.left.obj(b.meet(x, r.right.obj(t2))) != a.meet(r.left.obj(x), t2)) return false;
            }
        }
    return true;
}

bool oracle_frobenius(const Reflection& r) {
    Order b(*r.big()), a(*r.small());
    for (int i = 0; i < a.n; ++i)
        for (int x = 0; x < b.n; ++x)
            if (r.left.obj(b.meet(r.right.obj(i), x)) != a.meet(i, r.left.obj(x))) return false;
    return true;
}

// Heyting-style right adjoints to pullback in every slice of a lattice.
bool oracle_lcc(const FinCategory& c) {
    Order o(c);
    for (int a = 0; a < o.n; ++a)
        for (int top = 0; top < o.n; ++top) {
            if (!o.le[a][top]) continue;
            for (int y = 0; y < o.n; ++y) {
                if (!o.le[y][a]) continue;
                std::vector<int> s;
                for (int x = 0; x < o.n; ++x)
                    if (o.le[x][top] && o.le[o.meet(x, a)][y]) s.push_back(x);
                bool greatest = false;
                for (int x : s) {
                    bool g = true;
                    for (int x2 : s) g = g && o.le[x2][x];
                    greatest = greatest || g;
                }
                if (!greatest) return false;
            }
        }
    return true;
}

const char* kPosets[] = {"lattice-3-2", "m3", "bool-2", "chain-2", "terminal"};

}  // namespace

TEST_CASE("products and pullbacks in a lattice are meets") {
    auto c = m3();
    Order o(*c);
    for (int x = 0; x < o.n; ++x)
        for (int y = 0; y < o.n; ++y) {
            auto p = find_product(*c, x, y);
            REQUIRE(p);
            CHECK(p->apex == o.meet(x, y));
        }
    auto top = find_terminal(*c);
    REQUIRE(top);
    CHECK(c->object_name(*top) == "top");
    int f = c->morphism_index("a<top"), g = c->morphism_index("b<top");
    auto pb = find_pullback(*c, f, g);
    REQUIRE(pb);
    CHECK(c->object_name(pb->apex) == "bot");
}

TEST_CASE("walking parallel pair has no product of its two objects") {
    CategoryData d;
    d.objects = {"x", "y"};
    d.morphisms = {{"f", "x", "y"}, {"g", "x", "y"}};
    auto c = make_category(d);
    CHECK_FALSE(find_product(*c, 1, 1));  // y × y would need a map to x with two legs
    CHECK(find_product(*c, 0, 0));
    CHECK_FALSE(find_terminal(*c));
    int f = c->morphism_index("f"), g = c->morphism_index("g");
    auto m = analyze_cone(*c, Cone{0, c->identity(0), c->identity(0)}, 0, 0, f, g);
    CHECK(m.kind == Mediators::Unique);
    CHECK_FALSE(find_pullback(*c, f, g));  // the equalizer of f, g is empty
}

TEST_CASE("isomorphisms in the walking isomorphism") {
    auto c = walking_iso();
    for (int m = 0; m < c->num_morphisms(); ++m) CHECK(is_isomorphism(*c, m));
    auto ch = chain(3);
    CHECK_FALSE(is_isomorphism(*ch, ch->morphism_index("c0<c1")));
}

TEST_CASE("exponentials in a Boolean lattice are implications") {
    auto c = bool2();
    Order o(*c);
    for (int b = 0; b < o.n; ++b)
        for (int t = 0; t < o.n; ++t) {
            auto e = find_exponential(*c, b, t);
            REQUIRE(e);
            // greatest x with x ∧ b <= t
            int best = -1;
            for (int x = 0; x < o.n; ++x)
                if (o.le[o.meet(x, b)][t] && (best < 0 || o.le[best][x])) best = x;
            CHECK(e->object == best);
        }
    bool missing = false;
    CHECK_FALSE(find_exponential(*m3(), 1, 0, &missing));
    CHECK_FALSE(missing);
}

TEST_CASE("limit-preservation checks agree with the order-theoretic oracle on poset fixtures") {
    for (const char* name : kPosets) {
        CAPTURE(name);
        auto r = fixture(name).reflection;
        auto su = check_stable_units(r);
        auto sle = check_semi_left_exact(r);
        auto fr = check_frobenius(r);
        CHECK(su.passed() == oracle_stable_units(r));
        CHECK(sle.passed() == oracle_semi_left_exact(r));
        CHECK(fr.passed() == oracle_frobenius(r));
        CHECK(su.status != Status::Inconclusive);
        if (su.passed()) CHECK(sle.passed());
    }
}

TEST_CASE("m3 is semi-left-exact without stable units, bool-2 has stable units") {
    auto m = fixture("m3").reflection;
    CHECK(check_semi_left_exact(m).passed());
    auto su = check_stable_units(m);
    REQUIRE(su.failed());
    CHECK(su.witness->at("level") == "category");
    CHECK(su.witness->at("mediators") != "unique");
    auto ei = check_exponential_ideal(m);
    CHECK(ei.products.failed());

    auto b = fixture("bool-2").reflection;
    CHECK(check_stable_units(b).passed());
    CHECK(check_exponential_ideal(b).products.passed());
}

TEST_CASE("Frobenius holds at the terminal object") {
    for (const char* name : kPosets) {
        auto r = fixture(name).reflection;
        auto t = find_terminal(*r.small());
        REQUIRE(t);
        for (int a = 0; a < r.big()->num_objects(); ++a) CHECK(check_frobenius(r, *t, a).passed());
    }
}

TEST_CASE("identity reflections satisfy every property") {
    for (auto c : {chain(3), m3(), bool2()}) {
        auto r = identity_reflection(c);
        CHECK(check_frobenius(r).passed());
        CHECK(check_semi_left_exact(r).passed());
        CHECK(check_stable_units(r).passed());
        CHECK(check_exponential_ideal(r).products.passed());
    }
}

TEST_CASE("checks refuse a broken reflection") {
    auto lat = fixture("lattice-3-2").reflection;
    auto broken = lat;
    broken.left = monotone_functor(lat.big(), lat.small(),
                                   {lat.small()->object_index("c0"), lat.small()->object_index("c0"),
                                    lat.small()->object_index("c2")});
    CHECK_THROWS_AS(check_semi_left_exact(broken), ShapeMismatch);
    CHECK_THROWS_AS(check_frobenius(broken), ShapeMismatch);
}

TEST_CASE("stored square witnesses replay from their own data") {
    auto su = check_stable_units(fixture("m3").reflection);
    REQUIRE(su.failed());
    auto replayed = replay_category_square(*su.witness);
    CHECK(replayed.failed());
    CHECK(replayed.stats.at("mediators") != 1);

    auto wrong_kind = *su.witness;
    wrong_kind["mediators"] = su.witness->at("mediators") == "none" ? "many" : "none";
    CHECK(replay_category_square(wrong_kind).status == Status::Inconclusive);

    auto not_a_pullback = *su.witness;
    not_a_pullback["data"]["pullback"]["apex"] = "top";
    CHECK_THROWS_AS(replay_category_square(not_a_pullback), InvalidData);

    auto loose_cone = *su.witness;
    loose_cone["cone"]["left"] = "bot<top";
    CHECK_THROWS(replay_category_square(loose_cone));

    auto unknown = *su.witness;
    unknown["data"]["f"] = "no-such-arrow";
    CHECK_THROWS(replay_category_square(unknown));
}

TEST_CASE("local cartesian closure of small lattices") {
    for (auto c : {chain(2), chain(3), bool2(), m3(), walking_iso()}) {
        CAPTURE(c->objects().size());
        auto v = check_lcc(*c);
        REQUIRE(v.status != Status::Inconclusive);
        if (c->is_preorder()) CHECK(v.passed() == oracle_lcc(*c));
    }
    CHECK(check_lcc(*chain(2)).passed());
    CHECK(check_lcc(*bool2()).passed());

    auto v = check_lcc(*m3());
    REQUIRE(v.failed());
    CHECK(v.witness->at("f") == "a<top");
    CHECK(v.witness->at("y") == "bot<a");
    CHECK(replay_lcc(*v.witness).failed());

    auto fixed = *v.witness;
    fixed["y"] = "id(a)";
    CHECK(replay_lcc(fixed).passed());
}

TEST_CASE("lcc is inconclusive without a terminal object") {
    CategoryData d;
    d.objects = {"x", "y"};
    auto c = make_category(d);
    auto v = check_lcc(*c);
    CHECK(v.status == Status::Inconclusive);
}

TEST_CASE("locally connected check on the lattice reflection") {
    auto r = fixture("lattice-3-2").reflection;
    LocallyConnectedOptions opts;
    opts.max_squares = 400;
    opts.max_pi_checks = 20;
    auto v = check_locally_connected(r.left, opts);
    CHECK(v.passed());
    CHECK(v.stats.at("squares") > 0);
    CHECK(v.stats.at("pi_checks") > 0);

    opts.budget = 10;
    CHECK(check_locally_connected(r.left, opts).status == Status::Inconclusive);
}
