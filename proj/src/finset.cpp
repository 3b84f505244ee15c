#include "finitopos/finset.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace finitopos {

FinSet FinSet::range(int n) {
    FinSet s;
    for (int i = 0; i < n; ++i) s.elements.push_back(std::to_string(i));
    return s;
}

bool FinSet::has_duplicates() const {
    std::set<std::string> seen(elements.begin(), elements.end());
    return seen.size() != elements.size();
}

int FinSet::index_of(const std::string& e) const {
    auto it = std::find(elements.begin(), elements.end(), e);
    return it == elements.end() ? -1 : static_cast<int>(it - elements.begin());
}

FinFn FinFn::identity(int n) {
    FinFn f;
    f.map.resize(n);
    std::iota(f.map.begin(), f.map.end(), 0);
    f.cod_size = n;
    return f;
}

bool FinFn::valid() const {
    return std::all_of(map.begin(), map.end(), [&](int y) { return y >= 0 && y < cod_size; });
}

bool FinFn::injective() const {
    std::vector<char> hit(cod_size, 0);
    for (int y : map) {
        if (hit[y]) return false;
        hit[y] = 1;
    }
    return true;
}

bool FinFn::surjective() const {
    std::vector<char> hit(cod_size, 0);
    for (int y : map) hit[y] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

FinFn compose(const FinFn& g, const FinFn& f) {
    if (f.cod_size != g.dom_size()) throw ShapeMismatch("functions are not composable");
    FinFn h;
    h.cod_size = g.cod_size;
    h.map.reserve(f.map.size());
    for (int x : f.map) h.map.push_back(g.map[x]);
    return h;
}

std::string tuple_name(const std::vector<std::string>& parts) {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
    }
    return s + ")";
}

std::vector<Violation> validate_diagram(const SetDiagram& d) {
    std::vector<Violation> vs;
    const auto& c = *d.index;
    if (static_cast<int>(d.on_objects.size()) != c.num_objects() ||
        static_cast<int>(d.on_morphisms.size()) != c.num_morphisms()) {
        vs.push_back({ViolationKind::Malformed, "diagram tables do not cover the index category", {}});
        return vs;
    }
    for (int m = 0; m < c.num_morphisms(); ++m) {
        const auto& f = d.on_morphisms[m];
        if (f.dom_size() != d.on_objects[c.dom(m)].size() || f.cod_size != d.on_objects[c.cod(m)].size() || !f.valid())
            vs.push_back({ViolationKind::Malformed, "image of " + c.morphism_name(m) + " is ill-typed", {c.morphism_name(m)}});
    }
    if (!vs.empty()) return vs;
    for (int o = 0; o < c.num_objects(); ++o)
        if (!(d.on_morphisms[c.identity(o)] == FinFn::identity(d.on_objects[o].size())))
            vs.push_back({ViolationKind::BrokenFunctoriality, "identity of " + c.object_name(o) + " not preserved",
                          {c.object_name(o)}});
    for (int g = 0; g < c.num_morphisms(); ++g)
        for (int f = 0; f < c.num_morphisms(); ++f) {
            int h = c.compose(g, f);
            if (h >= 0 && !(d.on_morphisms[h] == compose(d.on_morphisms[g], d.on_morphisms[f])))
                vs.push_back({ViolationKind::BrokenFunctoriality,
                              "composite " + c.morphism_name(g) + "." + c.morphism_name(f) + " not preserved",
                              {c.morphism_name(g), c.morphism_name(f)}});
        }
    return vs;
}

LimitResult limit(const SetDiagram& d) {
    Budget b;
    return limit(d, b);
}

LimitResult limit(const SetDiagram& d, Budget& budget) {
    const auto& c = *d.index;
    const int n = c.num_objects();
    // morphisms between earlier and later objects constrain the product enumeration
    std::vector<std::vector<int>> checks(n);  // morphisms whose later endpoint is k
    std::vector<int> forced_by(n, -1);         // a morphism j -> k with j < k
    for (int m = 0; m < c.num_morphisms(); ++m) {
        if (c.is_identity(m)) continue;
        int j = c.dom(m), k = c.cod(m);
        int later = std::max(j, k);
        checks[later].push_back(m);
        if (j < k && forced_by[k] < 0) forced_by[k] = m;
    }
    LimitResult out;
    std::vector<int> tuple(n, 0);
    auto consistent = [&](int k) {
        for (int m : checks[k])
            if (d.on_morphisms[m](tuple[c.dom(m)]) != tuple[c.cod(m)]) return false;
        return true;
    };
    auto recurse = [&](auto&& self, int k) -> void {
        budget.charge();
        if (k == n) {
            out.tuples.push_back(tuple);
            return;
        }
        if (forced_by[k] >= 0) {
            int m = forced_by[k];
            tuple[k] = d.on_morphisms[m](tuple[c.dom(m)]);
            if (consistent(k)) self(self, k + 1);
            return;
        }
        for (int x = 0; x < d.on_objects[k].size(); ++x) {
            tuple[k] = x;
            if (consistent(k)) self(self, k + 1);
        }
    };
    recurse(recurse, 0);

    out.projections.resize(n);
    for (int o = 0; o < n; ++o) out.projections[o].cod_size = d.on_objects[o].size();
    for (const auto& t : out.tuples) {
        std::vector<std::string> parts;
        for (int o = 0; o < n; ++o) {
            parts.push_back(d.on_objects[o].elements[t[o]]);
            out.projections[o].map.push_back(t[o]);
        }
        out.set.elements.push_back(tuple_name(parts));
    }
    return out;
}

ColimitResult colimit(const SetDiagram& d) {
    const auto& c = *d.index;
    const int n = c.num_objects();
    std::vector<int> offset(n + 1, 0);
    for (int o = 0; o < n; ++o) offset[o + 1] = offset[o] + d.on_objects[o].size();
    UnionFind uf(offset[n]);
    for (int m = 0; m < c.num_morphisms(); ++m) {
        const auto& f = d.on_morphisms[m];
        for (int x = 0; x < f.dom_size(); ++x) uf.unite(offset[c.dom(m)] + x, offset[c.cod(m)] + f(x));
    }
    ColimitResult out;
    std::vector<int> class_of(offset[n], -1);
    for (int o = 0; o < n; ++o)
        for (int x = 0; x < d.on_objects[o].size(); ++x) {
            int id = offset[o] + x;
            int root = static_cast<int>(uf.find(id));
            if (root == id) {
                class_of[id] = out.set.size();
                out.set.elements.push_back(c.object_name(o) + "|" + d.on_objects[o].elements[x]);
            }
        }
    out.injections.resize(n);
    for (int o = 0; o < n; ++o) {
        out.injections[o].cod_size = out.set.size();
        for (int x = 0; x < d.on_objects[o].size(); ++x)
            out.injections[o].map.push_back(class_of[uf.find(offset[o] + x)]);
    }
    return out;
}

std::vector<int> equalizer(const FinFn& f, const FinFn& g) {
    if (f.dom_size() != g.dom_size() || f.cod_size != g.cod_size) throw ShapeMismatch("equalizer of non-parallel maps");
    std::vector<int> out;
    for (int x = 0; x < f.dom_size(); ++x)
        if (f(x) == g(x)) out.push_back(x);
    return out;
}

FinFn coequalizer(const FinFn& f, const FinFn& g) {
    if (f.dom_size() != g.dom_size() || f.cod_size != g.cod_size) throw ShapeMismatch("coequalizer of non-parallel maps");
    UnionFind uf(f.cod_size);
    for (int x = 0; x < f.dom_size(); ++x) uf.unite(f(x), g(x));
    FinFn q;
    std::vector<int> cls(f.cod_size, -1);
    int next = 0;
    for (int y = 0; y < f.cod_size; ++y) {
        int r = static_cast<int>(uf.find(y));
        if (cls[r] < 0) cls[r] = next++;
        q.map.push_back(cls[r]);
    }
    q.cod_size = next;
    return q;
}

}  // namespace finitopos
