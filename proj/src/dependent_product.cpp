#include <map>

#include "finitopos/kan.hpp"
#include "finitopos/presheaf.hpp"

namespace finitopos {

namespace {

/// el(f) : el(X) -> el(Y) for f : X -> Y, (c, x) ↦ (c, f_c x).
FinFunctor elements_functor(const Elements& ex, const Elements& ey, const Components& f) {
    std::map<std::pair<int, int>, int> mor_index;
    for (std::size_t m = 0; m < ey.morphism_of.size(); ++m) mor_index[ey.morphism_of[m]] = static_cast<int>(m);
    FinFunctor out{ex.category, ey.category, {}, {}};
    for (auto [c, x] : ex.object_of) out.obj_map.push_back(ey.index[c][f[c](x)]);
    const auto& base = *ex.projection.target;
    for (auto [h, x] : ex.morphism_of) out.mor_map.push_back(mor_index.at({h, f[base.cod(h)](x)}));
    return out;
}

}  // namespace

DependentProduct dependent_product(const Presheaf& x, const Presheaf& y, const Components& f, const Presheaf& z,
                                   const Components& g) {
    Budget b;
    return dependent_product(x, y, f, z, g, b);
}

DependentProduct dependent_product(const Presheaf& x, const Presheaf& y, const Components& f, const Presheaf& z,
                                   const Components& g, Budget& budget) {
    if (!same_base(x, y) || !same_base(x, z)) throw ShapeMismatch("dependent product over different bases");
    if (!is_natural(f, x, y)) throw ShapeMismatch("f is not a map X -> Y");
    if (!is_natural(g, z, x)) throw ShapeMismatch("g is not a map Z -> X");
    const auto& c = *x.base;
    auto ex = category_of_elements(x);
    auto ey = category_of_elements(y);
    auto ef = elements_functor(ex, ey, f);
    auto fibers = fibers_over(ex, z, g);
    auto pi = ran(ef, fibers, budget);
    const auto& r = pi.output;

    DependentProduct out;
    out.object.base = x.base;
    // (Π_f g)(c) = Σ_{y ∈ Y(c)} R(c, y)
    std::vector<std::vector<int>> offset(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) {
        FinSet s;
        FinFn proj;
        proj.cod_size = y.size(o);
        for (int v = 0; v < y.size(o); ++v) {
            int k = ey.index[o][v];
            offset[o].push_back(s.size());
            for (const auto& name : r.at[k].elements) {
                s.elements.push_back(tuple_name({y.at[o].elements[v], name}));
                proj.map.push_back(v);
            }
        }
        out.object.at.push_back(std::move(s));
        out.projection.push_back(std::move(proj));
    }
    std::map<std::pair<int, int>, int> el_mor;
    for (std::size_t m = 0; m < ey.morphism_of.size(); ++m) el_mor[ey.morphism_of[m]] = static_cast<int>(m);
    for (int h = 0; h < c.num_morphisms(); ++h) {
        int a = c.dom(h), d = c.cod(h);
        FinFn fn;
        fn.cod_size = out.object.size(a);
        for (int v = 0; v < y.size(d); ++v) {
            int m = el_mor.at({h, v});
            int v2 = y.act[h](v);
            for (int e : r.act[m].map) fn.map.push_back(offset[a][v2] + e);
        }
        out.object.act.push_back(std::move(fn));
    }

    auto pb = pullback(out.object, x, out.projection, f);
    out.pulled_back = pb.object;
    out.pulled_back_to_x = pb.second;
    auto counit = ran_counit(pi);  // restrict(ef, R) -> fibers, on el(X)
    for (int o = 0; o < c.num_objects(); ++o) {
        FinFn fn;
        fn.cod_size = z.size(o);
        std::vector<std::vector<int>> fiber(x.size(o));
        for (int w = 0; w < z.size(o); ++w) fiber[g[o](w)].push_back(w);
        for (int e = 0; e < pb.object.size(o); ++e) {
            int p = pb.first[o](e), xe = pb.second[o](e);
            int v = out.projection[o](p);
            int k = ex.index[o][xe];
            int local = counit[k](p - offset[o][v]);
            fn.map.push_back(fiber[xe][local]);
        }
        out.counit.push_back(std::move(fn));
    }
    return out;
}

}  // namespace finitopos
