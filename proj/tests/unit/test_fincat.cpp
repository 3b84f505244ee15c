#include <doctest.h>

#include <map>
#include <set>

#include "finitopos/fixtures.hpp"
#include "finitopos/presheaf.hpp"

using namespace finitopos;

namespace {

// delta1 is the full subcategory of monotone maps on {[0], [1]}; words in the
// generators evaluated as functions give an independent count of its morphisms.
std::size_t delta1_morphisms_by_model() {
    using Fn = std::vector<int>;
    struct Arrow {
        int dom, cod;
        Fn fn;
    };
    std::map<std::string, Arrow> gens{{"d0", {0, 1, {0}}}, {"d1", {0, 1, {1}}}, {"s", {1, 0, {0, 0}}}};
    std::set<std::tuple<int, int, Fn>> seen{{0, 0, {0}}, {1, 1, {0, 1}}};
    std::vector<Arrow> frontier{{0, 0, {0}}, {1, 1, {0, 1}}};
    for (int len = 0; len < 5; ++len) {
        std::vector<Arrow> next;
        for (const auto& a : frontier)
            for (const auto& [name, g] : gens) {
                if (g.dom != a.cod) continue;
                Arrow c{a.dom, g.cod, {}};
                for (int x : a.fn) c.fn.push_back(g.fn[x]);
                if (seen.insert({c.dom, c.cod, c.fn}).second) next.push_back(c);
            }
        frontier = next;
    }
    return seen.size();
}

}  // namespace

TEST_CASE("terminal category validates with a single morphism") {
    auto t = terminal_category();
    CHECK(t->num_objects() == 1);
    CHECK(t->num_morphisms() == 1);
    CHECK(t->is_identity(0));
}

TEST_CASE("reflexive-graph base saturates to the morphisms of its monotone-map model") {
    auto d = delta1();
    CHECK(static_cast<std::size_t>(d->num_morphisms()) == delta1_morphisms_by_model());
    CHECK(d->num_morphisms() == 7);
    int V = d->object_index("V"), E = d->object_index("E");
    CHECK(d->hom(V, E).size() == 2);
    CHECK(d->hom(E, E).size() == 3);
    CHECK(d->hom(E, V).size() == 1);
    CHECK(d->find_morphism("d0.s").has_value());
    CHECK(d->compose(d->morphism_index("s"), d->morphism_index("d1")) == d->identity(V));
}

TEST_CASE("omitting a composite is reported as MissingComposite naming both factors") {
    auto data = delta1()->to_data();
    std::erase_if(data.composites, [](const auto& c) { return c.g == "d0" && c.f == "s"; });
    auto v = validate_category(data);
    REQUIRE_FALSE(v.ok());
    bool found = false;
    for (const auto& x : v.violations)
        if (x.kind == ViolationKind::MissingComposite && x.data.size() >= 2 && x.data[0] == "d0" && x.data[1] == "s")
            found = true;
    CHECK(found);
}

TEST_CASE("validator reports broken identity, associativity and dangling references") {
    SUBCASE("dangling") {
        CategoryData d;
        d.objects = {"a"};
        d.morphisms = {{"f", "a", "b"}};
        auto v = validate_category(d);
        REQUIRE_FALSE(v.ok());
        CHECK(v.violations.front().kind == ViolationKind::DanglingReference);
    }
    SUBCASE("identity") {
        CategoryData d;
        d.objects = {"a"};
        d.morphisms = {{"e", "a", "a"}};
        d.composites = {{"e", "e", "e"}, {"id(a)", "e", "id(a)"}};
        auto v = validate_category(d);
        REQUIRE_FALSE(v.ok());
        CHECK(v.violations.front().kind == ViolationKind::BrokenIdentity);
    }
    SUBCASE("associativity") {
        // e.e = id on one side of a broken monoid table
        CategoryData d;
        d.objects = {"a"};
        d.morphisms = {{"e", "a", "a"}, {"z", "a", "a"}};
        d.composites = {{"e", "e", "z"}, {"e", "z", "e"}, {"z", "e", "z"}, {"z", "z", "z"}};
        auto v = validate_category(d);
        REQUIRE_FALSE(v.ok());
        CHECK(v.violations.front().kind == ViolationKind::BrokenAssociativity);
    }
}

TEST_CASE("opposite is an involution and transposes hom-sets") {
    for (auto c : {delta1(), chain(3), m3(), walking_iso()}) {
        auto op = opposite(*c);
        CHECK(*opposite(*op) == *c);
        for (int a = 0; a < c->num_objects(); ++a)
            for (int b = 0; b < c->num_objects(); ++b) CHECK(op->hom(a, b).size() == c->hom(b, a).size());
    }
    auto op = opposite(*delta1());
    CHECK(op->hom(op->object_index("E"), op->object_index("V")).size() == 2);
}

TEST_CASE("category of elements of the terminal presheaf is the base") {
    for (auto c : {delta1(), chain(3), bool2()}) {
        auto el = category_of_elements(terminal_presheaf(c));
        CHECK(el.category->num_objects() == c->num_objects());
        CHECK(find_isomorphism(el.category, c).has_value());
    }
}

TEST_CASE("category of elements of a representable is the slice") {
    for (auto c : {delta1(), chain(3), m3(), bool2(), walking_iso()}) {
        for (int o = 0; o < c->num_objects(); ++o) {
            auto y = yoneda(c, o);
            auto el = category_of_elements(y);
            CHECK(el.category->num_objects() == y.total_size());
            CHECK(find_isomorphism(el.category, slice(*c, o)).has_value());
        }
    }
}

TEST_CASE("isomorphism search separates non-isomorphic categories") {
    CHECK_FALSE(find_isomorphism(chain(3), m3()).has_value());
    CHECK_FALSE(find_isomorphism(bool2(), chain(4)).has_value());
    CHECK(find_isomorphism(walking_iso(), walking_iso()).has_value());
}

TEST_CASE("adjunction check on fixtures") {
    auto id = identity_reflection(delta1());
    CHECK(check_adjunction(id).passed());

    auto lat = fixture("lattice-3-2").reflection;
    auto v = check_adjunction(lat);
    CHECK(v.passed());
    const auto& B = *lat.big();
    const auto& A = *lat.small();
    std::int64_t instances = 0;
    for (int b = 0; b < B.num_objects(); ++b)
        for (int a = 0; a < A.num_objects(); ++a) instances += B.hom(b, lat.right.obj(a)).size();
    CHECK(v.stats["hom_pairs"] == 6);
    CHECK(v.stats["factorizations"] == instances);

    // redirect the reflection of c1 to c0, which leaves no unit arrow c1 -> F(c0)
    auto bad = lat;
    int c1 = B.object_index("c1");
    auto objs = bad.left.obj_map;
    objs[c1] = A.object_index("c0");
    bad.left = monotone_functor(lat.big(), lat.small(), objs);
    auto w = check_adjunction(bad);
    REQUIRE(w.failed());
    CHECK((*w.witness)["b"] == "c1");
    CHECK((*w.witness)["kind"] == "unit-ill-typed");
}

TEST_CASE("every fixture reflection passes and reflects strictly") {
    for (const auto& f : all_fixtures()) {
        CAPTURE(f.name);
        CHECK(check_adjunction(f.reflection).passed());
        auto lf = compose(f.reflection.left, f.reflection.right);
        auto id = identity_functor(f.reflection.small());
        CHECK(lf.obj_map == id.obj_map);
        CHECK(lf.mor_map == id.mor_map);
    }
}

TEST_CASE("functor and transformation validators reject corrupted data") {
    auto r = fixture("lattice-3-2").reflection;
    CHECK(validate_functor(r.left).empty());
    auto bad = r.left;
    bad.mor_map[0] = bad.mor_map[1] == bad.mor_map[0] ? bad.mor_map[2] : bad.mor_map[1];
    CHECK_FALSE(validate_functor(bad).empty());

    FinNatTrans unit{identity_functor(r.big()), compose(r.right, r.left), r.unit};
    CHECK(validate_nat_trans(unit).empty());
}

TEST_CASE("saturation fails loudly past its bound") {
    Presentation p;
    p.objects = {"a"};
    p.generators = {{"f", "a", "a"}};
    CHECK_THROWS_AS(saturate(p, 8), InvalidData);
    p.relations = {{Word{{"f", "f", "f"}, ""}, Word{{}, "a"}}};
    CHECK(make_category(saturate(p, 8))->num_morphisms() == 3);
}
