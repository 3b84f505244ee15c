#include <doctest.h>

#include <functional>
#include <numeric>

#include "finitopos/fixtures.hpp"
#include "finitopos/presheaf.hpp"
#include "helpers.hpp"

using namespace finitopos;
using namespace testing_support;

TEST_CASE("representables have hom-sets as carriers") {
    auto pt = terminal_category();
    CHECK(yoneda(pt, 0).total_size() == 1);
    for (auto c : {delta1(), chain(3), m3(), walking_iso()})
        for (int o = 0; o < c->num_objects(); ++o) {
            auto y = yoneda(c, o);
            CHECK(validate_presheaf(y).empty());
            for (int d = 0; d < c->num_objects(); ++d) CHECK(static_cast<std::size_t>(y.size(d)) == c->hom(d, o).size());
        }
}

TEST_CASE("representable on the vertex object is the terminal graph") {
    auto d = delta1();
    auto yv = yoneda(d, d->object_index("V"));
    CHECK(yv.size(d->object_index("V")) == 1);
    CHECK(yv.size(d->object_index("E")) == 1);
    CHECK(find_isomorphism(yv, terminal_presheaf(d)).has_value());
    auto ye = yoneda(d, d->object_index("E"));
    CHECK(ye.size(d->object_index("V")) == 2);
    CHECK(ye.size(d->object_index("E")) == 3);
    CHECK(find_isomorphism(ye, graph(2, {{0, 1}})).has_value());
}

TEST_CASE("graph builder satisfies the reflexive graph equations") {
    auto g = graph(3, {{0, 1}, {1, 2}, {1, 2}});
    CHECK(validate_presheaf(g).empty());
}

TEST_CASE("Yoneda lemma: natural transformations out of a representable") {
    for (auto c : {delta1(), chain(3), walking_iso()}) {
        for (const auto& x : presheaf_corpus(c, 2))
            for (int o = 0; o < c->num_objects(); ++o)
                CHECK(nat_components(yoneda(c, o), x).size() == static_cast<std::size_t>(x.size(o)));
    }
}

TEST_CASE("maps into the terminal and out of the empty presheaf are unique") {
    auto c = delta1();
    for (const auto& x : presheaf_corpus(c, 2)) {
        CHECK(nat_components(x, terminal_presheaf(c)).size() == 1);
        CHECK(nat_components(empty_presheaf(c), x).size() == 1);
    }
}

TEST_CASE("natural transformation enumeration matches graph homomorphism brute force") {
    std::vector<Presheaf> gs{graph(1, {}), graph(2, {{0, 1}}), graph(2, {{0, 1}, {1, 0}}), graph(3, {{0, 1}, {1, 2}}),
                             graph(2, {{0, 1}, {0, 1}}), graph(1, {{0, 0}})};
    for (const auto& g : gs)
        for (const auto& h : gs) {
            auto nats = nat_components(g, h);
            CHECK(nats.size() == count_graph_homs(g, h));
            for (std::size_t i = 1; i < nats.size(); ++i) CHECK_FALSE(nats[i] == nats[i - 1]);
        }
}

TEST_CASE("exponentials of finite sets are function sets") {
    auto e = exponential(set_presheaf(2), set_presheaf(3));
    CHECK(e.object.size(0) == 9);
    CHECK(validate_presheaf(e.object).empty());
}

TEST_CASE("vertices of a graph exponential are graph homomorphisms") {
    std::vector<Presheaf> gs{graph(1, {}), graph(2, {{0, 1}}), graph(2, {{0, 1}, {1, 0}}), graph(3, {{0, 1}, {1, 2}})};
    int V = delta1()->object_index("V");
    for (const auto& g : gs)
        for (const auto& h : gs) {
            auto e = exponential(g, h);
            CHECK(validate_presheaf(e.object).empty());
            CHECK(static_cast<std::size_t>(e.object.size(V)) == count_graph_homs(g, h));
        }
}

TEST_CASE("exponent by the terminal presheaf is the base") {
    for (auto c : {delta1(), chain(3)})
        for (const auto& y : presheaf_corpus(c, 2, false)) {
            auto e = exponential(terminal_presheaf(c), y);
            CHECK(find_isomorphism(e.object, y).has_value());
        }
}

TEST_CASE("exponential adjunction realized by currying") {
    auto c = delta1();
    auto corpus = presheaf_corpus(c, 2);
    std::vector<Presheaf> small;
    for (const auto& p : corpus)
        if (p.total_size() <= 4) small.push_back(p);
    REQUIRE(small.size() >= 4);
    int triples = 0;
    for (const auto& w : small)
        for (const auto& x : small)
            for (const auto& y : small) {
                auto e = exponential(x, y);
                auto wx = product(w, x);
                auto lhs = nat_components(wx.object, y);
                auto rhs = nat_components(w, e.object);
                CHECK(lhs.size() == rhs.size());
                for (const auto& t : lhs) {
                    auto s = curry(w, x, e, t);
                    CHECK(is_natural(s, w, e.object));
                    CHECK(uncurry(w, x, e, s) == t);
                }
                ++triples;
            }
    CHECK(triples == static_cast<int>(small.size() * small.size() * small.size()));
}

TEST_CASE("evaluation map is natural") {
    auto g = graph(2, {{0, 1}});
    auto h = graph(2, {{0, 1}, {1, 0}});
    auto e = exponential(g, h);
    CHECK(is_natural(e.eval, e.eval_domain, h));
}

TEST_CASE("pullback of presheaves satisfies its universal property") {
    auto x = graph(2, {{0, 1}});
    auto z = graph(1, {});
    auto f = nat_components(x, z).front();
    auto pb = pullback(x, x, f, f);
    CHECK(validate_presheaf(pb.object).empty());
    auto prod = product(x, x);
    CHECK(find_isomorphism(pb.object, prod.object).has_value());
    auto id = identity_map(x);
    auto diag = pair_maps(x, pb, x, x, id, id);
    CHECK(is_natural(diag, x, pb.object));
}

TEST_CASE("sieves") {
    auto pt = terminal_category();
    CHECK(sieves_on(pt, 0).size() == 2);

    auto c = chain(3);
    int top = c->object_index("c2");
    // down-closed subsets of the chain below c2
    int down_closed = 0;
    for (int mask = 0; mask < 8; ++mask) {
        bool ok = true;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < i; ++j)
                if ((mask >> i & 1) && !(mask >> j & 1)) ok = false;
        down_closed += ok;
    }
    auto ss = sieves_on(c, top);
    CHECK(static_cast<int>(ss.size()) == down_closed);
    CHECK(ss.front().members.empty());
    CHECK(ss.back().members.size() == 3);
    for (auto d : {delta1(), m3()})
        for (int o = 0; o < d->num_objects(); ++o) {
            auto s = sieves_on(d, o);
            CHECK(s.front().members.empty());
            CHECK(s.back().members.size() == static_cast<std::size_t>(yoneda(d, o).total_size()));
        }
}

TEST_CASE("category of elements counts elements") {
    for (const auto& x : presheaf_corpus(delta1(), 2)) {
        auto el = category_of_elements(x);
        CHECK(el.category->num_objects() == x.total_size());
        CHECK(validate_functor(el.projection).empty());
    }
}

TEST_CASE("corpus is duplicate-free up to isomorphism and ordered by size") {
    auto corpus = presheaf_corpus(delta1(), 2);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(validate_presheaf(corpus[i]).empty());
        if (i) CHECK(corpus[i - 1].total_size() <= corpus[i].total_size());
        for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(find_isomorphism(corpus[i], corpus[j]).has_value());
    }
    // sets up to size 2, plus nothing else on the terminal category
    CHECK(presheaf_corpus(terminal_category(), 2).size() == 3);
}

TEST_CASE("dependent product along the identity is the input") {
    auto x = graph(2, {{0, 1}});
    auto z = graph(3, {{0, 1}, {1, 2}});
    for (const auto& g : nat_components(z, x)) {
        auto pi = dependent_product(x, x, identity_map(x), z, g);
        CHECK(validate_presheaf(pi.object).empty());
        CHECK(find_isomorphism_over(pi.object, z, pi.projection, g).has_value());
    }
}

TEST_CASE("dependent products of finite sets count sections fiberwise") {
    // X = {0,1,2} -> Y = {0,1}, Z -> X with fiber sizes (2, 0, 3)
    auto x = set_presheaf(3), y = set_presheaf(2), z = set_presheaf(5);
    auto f = set_map({0, 0, 1}, 2);
    auto g = set_map({0, 0, 2, 2, 2}, 3);
    auto pi = dependent_product(x, y, f, z, g);
    std::vector<int> over(2, 0);
    for (int e = 0; e < pi.object.size(0); ++e) over[pi.projection[0](e)]++;
    std::vector<int> fiber(3, 0);
    for (int v : g[0].map) fiber[v]++;
    for (int yv = 0; yv < 2; ++yv) {
        int expect = 1;
        for (int xv = 0; xv < 3; ++xv)
            if (f[0](xv) == yv) expect *= fiber[xv];
        CHECK(over[yv] == expect);
    }
}

TEST_CASE("dependent product into a terminal base is an exponential") {
    auto c = delta1();
    auto one = terminal_presheaf(c);
    std::vector<Presheaf> xs{graph(1, {}), graph(2, {{0, 1}}), graph(2, {})};
    std::vector<Presheaf> vs{graph(2, {{0, 1}}), graph(2, {{0, 1}, {1, 0}})};
    for (const auto& x : xs)
        for (const auto& v : vs) {
            auto z = product(x, v);
            auto f = nat_components(x, one).front();
            auto pi = dependent_product(x, one, f, z.object, z.first);
            CHECK(find_isomorphism(pi.object, exponential(x, v).object).has_value());
        }
}

TEST_CASE("dependent product adjunction by enumeration over slices") {
    // maps W -> Π over Y correspond to maps W ×_Y X -> Z over X
    auto c = delta1();
    auto corpus = presheaf_corpus(c, 2);
    std::vector<Presheaf> small;
    for (const auto& p : corpus)
        if (p.total_size() <= 4) small.push_back(p);
    int instances = 0;
    for (const auto& x : small)
        for (const auto& y : small) {
            auto fs = nat_components(x, y);
            if (fs.empty()) continue;
            const auto& f = fs.back();
            for (const auto& z : small) {
                auto gs = nat_components(z, x);
                if (gs.empty()) continue;
                const auto& g = gs.front();
                auto pi = dependent_product(x, y, f, z, g);
                CHECK(validate_presheaf(pi.object).empty());
                CHECK(is_natural(pi.counit, pi.pulled_back, z));
                CHECK(compose(g, pi.counit) == pi.pulled_back_to_x);
                for (const auto& w : small) {
                    for (const auto& p : nat_components(w, y)) {
                        Budget b;
                        auto lhs = nat_over(w, pi.object, p, pi.projection, b).size();
                        auto wx = pullback(w, x, p, f);
                        auto rhs = nat_over(wx.object, z, wx.second, g, b).size();
                        CHECK(lhs == rhs);
                        ++instances;
                    }
                }
            }
        }
    CHECK(instances > 50);
}
