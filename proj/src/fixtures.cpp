#include "finitopos/fixtures.hpp"

#include <algorithm>

namespace finitopos {

CategoryPtr delta1() {
    static const CategoryPtr c = [] {
        Presentation p;
        p.objects = {"V", "E"};
        p.generators = {{"d0", "V", "E"}, {"d1", "V", "E"}, {"s", "E", "V"}};
        p.relations = {{Word{{"s", "d0"}, ""}, Word{{}, "V"}}, {Word{{"s", "d1"}, ""}, Word{{}, "V"}}};
        return make_category(saturate(p, 16));
    }();
    return c;
}

const std::string& delta1_source() {
    static const std::string text =
        "category delta1 {\n"
        "  objects: V, E;\n"
        "  morphisms: d0: V -> E; d1: V -> E; s: E -> V;\n"
        "  relations: s.d0 = id(V); s.d1 = id(V);\n"
        "  close: 16;\n"
        "}\n";
    return text;
}

CategoryPtr chain(int n) {
    std::vector<std::string> els;
    std::vector<std::pair<std::string, std::string>> order;
    for (int i = 0; i < n; ++i) {
        els.push_back("c" + std::to_string(i));
        if (i > 0) order.emplace_back(els[i - 1], els[i]);
    }
    return poset_category(els, order);
}

CategoryPtr walking_iso() {
    Presentation p;
    p.objects = {"x", "y"};
    p.generators = {{"i", "x", "y"}, {"j", "y", "x"}};
    p.relations = {{Word{{"j", "i"}, ""}, Word{{}, "x"}}, {Word{{"i", "j"}, ""}, Word{{}, "y"}}};
    return make_category(saturate(p, 16));
}

CategoryPtr m3() {
    return poset_category({"bot", "a", "b", "c", "top"}, {{"bot", "a"},
                                                          {"bot", "b"},
                                                          {"bot", "c"},
                                                          {"a", "top"},
                                                          {"b", "top"},
                                                          {"c", "top"}});
}

CategoryPtr bool2() {
    return poset_category({"bot", "a", "b", "top"}, {{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}});
}

FinFunctor monotone_functor(CategoryPtr source, CategoryPtr target, const std::vector<int>& obj_map) {
    FinFunctor f{source, target, obj_map, {}};
    for (int m = 0; m < source->num_morphisms(); ++m) {
        const auto& h = target->hom(obj_map[source->dom(m)], obj_map[source->cod(m)]);
        if (h.size() != 1) throw InvalidData("object map is not monotone at " + source->morphism_name(m));
        f.mor_map.push_back(h.front());
    }
    return f;
}

Reflection poset_reflection(CategoryPtr big, const std::vector<std::string>& keep) {
    const auto& b = *big;
    std::vector<std::string> names = keep;
    std::sort(names.begin(), names.end());
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& x : names)
        for (const auto& y : names)
            if (x != y && !b.hom(b.object_index(x), b.object_index(y)).empty()) order.emplace_back(x, y);
    auto small = poset_category(names, order);
    const auto& a = *small;

    std::vector<int> incl(a.num_objects());
    for (int o = 0; o < a.num_objects(); ++o) incl[o] = b.object_index(a.object_name(o));
    std::vector<int> refl(b.num_objects(), -1);
    for (int x = 0; x < b.num_objects(); ++x) {
        for (int o = 0; o < a.num_objects(); ++o) {
            if (b.hom(x, incl[o]).empty()) continue;
            bool least = true;
            for (int o2 = 0; o2 < a.num_objects(); ++o2)
                if (!b.hom(x, incl[o2]).empty() && b.hom(incl[o], incl[o2]).empty()) least = false;
            if (least) refl[x] = o;
        }
        if (refl[x] < 0) throw InvalidData("no least kept object above " + b.object_name(x));
    }
    Reflection r{monotone_functor(big, small, refl), monotone_functor(small, big, incl), {}};
    for (int x = 0; x < b.num_objects(); ++x) r.unit.push_back(b.hom(x, incl[refl[x]]).front());
    return r;
}

namespace {

/// L : C -> pt with F picking `object`, which must be terminal in C.
Reflection to_point(CategoryPtr c, const std::string& object) {
    auto pt = terminal_category();
    int o = c->object_index(object);
    Reflection r{to_terminal(c), FinFunctor{pt, c, {o}, {c->identity(o)}}, {}};
    for (int x = 0; x < c->num_objects(); ++x) {
        const auto& h = c->hom(x, o);
        if (h.size() != 1) throw InvalidData(object + " is not terminal");
        r.unit.push_back(h.front());
    }
    return r;
}

}  // namespace

std::vector<std::string> fixture_names() {
    return {"lattice-3-2", "m3", "bool-2", "delta1", "chain-2", "walking-iso", "terminal"};
}

Fixture fixture(const std::string& name) {
    if (name == "lattice-3-2")
        return {name, "chain c0<c1<c2 reflected onto {c0,c2} by ceiling", poset_reflection(chain(3), {"c0", "c2"})};
    if (name == "m3") return {name, "M3 reflected onto {bot,top}", poset_reflection(m3(), {"bot", "top"})};
    if (name == "bool-2") return {name, "Boolean lattice on {a,b} reflected onto {a,top} by x|a", poset_reflection(bool2(), {"a", "top"})};
    if (name == "delta1") return {name, "reflexive-graph base reflected onto its terminal object V", to_point(delta1(), "V")};
    if (name == "chain-2") return {name, "identity reflection on the chain c0<c1", identity_reflection(chain(2))};
    if (name == "walking-iso") return {name, "walking isomorphism reflected onto a point (an equivalence)", to_point(walking_iso(), "x")};
    if (name == "terminal") return {name, "identity reflection on the terminal category", identity_reflection(terminal_category())};
    throw InvalidData("unknown fixture '" + name + "'");
}

std::vector<Fixture> all_fixtures() {
    std::vector<Fixture> out;
    for (const auto& n : fixture_names()) out.push_back(fixture(n));
    return out;
}

}  // namespace finitopos
