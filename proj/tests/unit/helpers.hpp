#pragma once

#include <utility>
#include <vector>

#include "finitopos/fixtures.hpp"
#include "finitopos/presheaf.hpp"

namespace testing_support {

using namespace finitopos;

/// Reflexive graph on n vertices: one distinguished loop per vertex followed by `edges`.
inline Presheaf graph(int n, const std::vector<std::pair<int, int>>& edges) {
    auto base = delta1();
    const auto& c = *base;
    Presheaf p{base, std::vector<FinSet>(2), std::vector<FinFn>(c.num_morphisms())};
    int V = c.object_index("V"), E = c.object_index("E");
    p.at[V] = FinSet::range(n);
    std::vector<int> src, tgt;
    for (int v = 0; v < n; ++v) {
        src.push_back(v);
        tgt.push_back(v);
    }
    for (auto [a, b] : edges) {
        src.push_back(a);
        tgt.push_back(b);
    }
    p.at[E] = FinSet::range(static_cast<int>(src.size()));
    std::vector<char> known(c.num_morphisms(), 0);
    int d0 = c.morphism_index("d0"), d1 = c.morphism_index("d1"), s = c.morphism_index("s");
    p.act[d0] = FinFn{src, n};
    p.act[d1] = FinFn{tgt, n};
    std::vector<int> loops(n);
    for (int v = 0; v < n; ++v) loops[v] = v;
    p.act[s] = FinFn{loops, static_cast<int>(src.size())};
    known[d0] = known[d1] = known[s] = 1;
    complete_actions(p, known);
    return p;
}

/// Graph homomorphisms counted by brute force over vertex and edge maps.
inline std::size_t count_graph_homs(const Presheaf& g, const Presheaf& h) {
    const auto& c = *g.base;
    int V = c.object_index("V"), E = c.object_index("E");
    int d0 = c.morphism_index("d0"), d1 = c.morphism_index("d1"), s = c.morphism_index("s");
    const int gv = g.size(V), ge = g.size(E), hv = h.size(V), he = h.size(E);
    if (gv > 0 && hv == 0) return 0;
    std::size_t count = 0;
    std::vector<int> vm(gv, 0);
    while (true) {
        std::vector<int> em(ge, 0);
        if (ge == 0 || he > 0) {
            while (true) {
                bool ok = true;
                for (int e = 0; e < ge && ok; ++e)
                    ok = h.act[d0](em[e]) == vm[g.act[d0](e)] && h.act[d1](em[e]) == vm[g.act[d1](e)];
                for (int v = 0; v < gv && ok; ++v) ok = em[g.act[s](v)] == h.act[s](vm[v]);
                if (ok) ++count;
                int k = 0;
                while (k < ge && ++em[k] == he) em[k++] = 0;
                if (k == ge) break;
            }
        }
        int k = 0;
        while (k < gv && ++vm[k] == hv) vm[k++] = 0;
        if (k == gv || hv == 0) break;
    }
    return count;
}

/// Finite sets as presheaves on the terminal category.
inline Presheaf set_presheaf(int n) {
    auto pt = terminal_category();
    return Presheaf{pt, {FinSet::range(n)}, {FinFn::identity(n)}};
}

inline Components set_map(std::vector<int> m, int cod) { return Components{FinFn{std::move(m), cod}}; }

}  // namespace testing_support
