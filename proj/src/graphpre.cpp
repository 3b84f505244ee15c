#include "finitopos/graphpre.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "finitopos/fixtures.hpp"

namespace finitopos {

namespace {

struct Base {
    CategoryPtr cat = delta1();
    int V = cat->object_index("V");
    int E = cat->object_index("E");
    int d0 = cat->morphism_index("d0");
    int d1 = cat->morphism_index("d1");
    int s = cat->morphism_index("s");
};

const Base& base() {
    static const Base b;
    return b;
}

int src(const Presheaf& g, int e) { return g.act[base().d0](e); }
int tgt(const Presheaf& g, int e) { return g.act[base().d1](e); }
int loop(const Presheaf& g, int v) { return g.act[base().s](v); }

void require_graph(const Presheaf& g) {
    if (g.base != base().cat && !(*g.base == *base().cat)) throw ShapeMismatch("not a reflexive graph");
}

/// Reflexive-transitive closure of an adjacency matrix (Warshall).
void close_transitively(std::vector<std::vector<char>>& r) {
    const int n = static_cast<int>(r.size());
    for (int i = 0; i < n; ++i) r[i][i] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (r[i][k])
                for (int j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = 1;
}

/// Index of the edge x -> y in embed(p), by the layout of make_graph.
std::vector<std::vector<int>> embedded_edge_index(const Preorder& p) {
    const int n = p.size();
    std::vector<std::vector<int>> idx(n, std::vector<int>(n, -1));
    int next = n;
    for (int x = 0; x < n; ++x) idx[x][x] = x;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y && p.leq(x, y)) idx[x][y] = next++;
    return idx;
}

/// Calls `visit` on every function {0..n-1} -> {0..m-1} in lexicographic order
/// until it returns false.
template <class F>
void for_each_function(int n, int m, F&& visit) {
    if (n > 0 && m == 0) return;
    std::vector<int> f(n, 0);
    while (true) {
        if (!visit(f)) return;
        int k = n - 1;
        while (k >= 0 && ++f[k] == m) f[k--] = 0;
        if (k < 0) return;
    }
}

/// First index in [0, count) for which `bad` holds, evaluating with `jobs`
/// threads; -1 if none.
template <class F>
long first_failure(std::size_t count, int jobs, F&& bad) {
    std::atomic<long> best{-1};
    auto worker = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < count; i += stride) {
            long b = best.load();
            if (b >= 0 && static_cast<long>(i) > b) return;
            if (bad(i)) {
                long expected = best.load();
                while ((expected < 0 || static_cast<long>(i) < expected) &&
                       !best.compare_exchange_weak(expected, static_cast<long>(i))) {
                }
                return;
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, static_cast<std::size_t>(j), static_cast<std::size_t>(jobs));
        for (auto& t : pool) t.join();
    }
    return best.load();
}

std::vector<std::vector<int>> multiplicities(const Presheaf& g) {
    const int n = vertex_count(g);
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (auto [a, b] : extra_edges(g)) ++m[a][b];
    return m;
}

template <class M>
std::vector<int> min_encoding(const M& m, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    do {
        std::vector<int> enc{n};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) enc.push_back(m[perm[i]][perm[j]]);
        if (best.empty() || enc < best) best = std::move(enc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Whether no vertex permutation gives a smaller encoding than the identity.
template <class M>
bool is_canonical(const M& m, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
        for (int i = 0; i < n * n; ++i) {
            int a = m[perm[i / n]][perm[i % n]], b = m[i / n][i % n];
            if (a < b) return false;
            if (a > b) break;
        }
    }
    return true;
}

Presheaf graph_from_matrix(const std::vector<std::vector<int>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < m[i][j]; ++k) edges.emplace_back(i, j);
    return make_graph(n, edges);
}

json pairs_json(const std::vector<std::pair<int, int>>& ps) {
    json a = json::array();
    for (auto [x, y] : ps) a.push_back({x, y});
    return a;
}

}  // namespace

// --- preorders ---------------------------------------------------------------------------

bool is_valid(const Preorder& p) {
    const int n = p.size();
    if (static_cast<int>(p.rel.size()) != n || p.carrier.has_duplicates()) return false;
    for (const auto& row : p.rel)
        if (static_cast<int>(row.size()) != n) return false;
    for (int x = 0; x < n; ++x) {
        if (!p.leq(x, x)) return false;
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (p.leq(x, y) && p.leq(y, z) && !p.leq(x, z)) return false;
    }
    return true;
}

Preorder make_preorder(int n, const std::vector<std::pair<int, int>>& pairs) {
    Preorder p{FinSet::range(n), std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    for (auto [x, y] : pairs) {
        if (x < 0 || y < 0 || x >= n || y >= n) throw InvalidData("preorder pair out of range");
        p.rel[x][y] = 1;
    }
    close_transitively(p.rel);
    return p;
}

Preorder chain_preorder(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
    return make_preorder(n, pairs);
}

Preorder product(const Preorder& p, const Preorder& q) {
    const int n = p.size(), m = q.size();
    Preorder r{FinSet{}, std::vector<std::vector<char>>(n * m, std::vector<char>(n * m, 0))};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < m; ++y) r.carrier.elements.push_back(tuple_name({p.carrier.elements[x], q.carrier.elements[y]}));
    for (int i = 0; i < n * m; ++i)
        for (int j = 0; j < n * m; ++j) r.rel[i][j] = p.leq(i / m, j / m) && q.leq(i % m, j % m);
    return r;
}

bool is_monotone(const Preorder& p, const Preorder& q, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != p.size()) return false;
    for (int x : map)
        if (x < 0 || x >= q.size()) return false;
    for (int x = 0; x < p.size(); ++x)
        for (int y = 0; y < p.size(); ++y)
            if (p.leq(x, y) && !q.leq(map[x], map[y])) return false;
    return true;
}

std::vector<std::vector<int>> monotone_maps(const Preorder& p, const Preorder& q) {
    std::vector<std::vector<int>> out;
    for_each_function(p.size(), q.size(), [&](const std::vector<int>& f) {
        if (is_monotone(p, q, f)) out.push_back(f);
        return true;
    });
    return out;
}

json to_json(const Preorder& p) {
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < p.size(); ++x)
        for (int y = 0; y < p.size(); ++y)
            if (x != y && p.leq(x, y)) pairs.emplace_back(x, y);
    return json{{"elements", p.size()}, {"order", pairs_json(pairs)}};
}

Preorder preorder_from_json(const json& j) {
    int n = j.at("elements").get<int>();
    if (n < 0 || n > 64) throw InvalidData("preorder size out of range");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& pr : j.at("order")) pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
    return make_preorder(n, pairs);
}

// --- graphs ------------------------------------------------------------------------------

Presheaf make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    const auto& b = base();
    const auto& c = *b.cat;
    Presheaf p{b.cat, std::vector<FinSet>(c.num_objects()), std::vector<FinFn>(c.num_morphisms())};
    const int e = n + static_cast<int>(edges.size());
    p.at[b.V] = FinSet::range(n);
    p.at[b.E] = FinSet::range(e);
    std::vector<int> s(e), t(e), loops(n);
    for (int v = 0; v < n; ++v) s[v] = t[v] = loops[v] = v;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [a, z] = edges[i];
        if (a < 0 || z < 0 || a >= n || z >= n) throw InvalidData("edge endpoint out of range");
        s[n + i] = a;
        t[n + i] = z;
    }
    std::vector<char> known(c.num_morphisms(), 0);
    p.act[b.d0] = FinFn{s, n};
    p.act[b.d1] = FinFn{t, n};
    p.act[b.s] = FinFn{loops, e};
    known[b.d0] = known[b.d1] = known[b.s] = 1;
    complete_actions(p, known);
    return p;
}

int vertex_count(const Presheaf& g) { return g.size(base().V); }

std::vector<std::pair<int, int>> extra_edges(const Presheaf& g) {
    require_graph(g);
    std::vector<std::pair<int, int>> out;
    for (int e = 0; e < g.size(base().E); ++e)
        if (loop(g, src(g, e)) != e) out.emplace_back(src(g, e), tgt(g, e));
    std::sort(out.begin(), out.end());
    return out;
}

int graph_size(const Presheaf& g) { return vertex_count(g) + static_cast<int>(extra_edges(g).size()); }

json graph_to_json(const Presheaf& g) {
    return json{{"vertices", vertex_count(g)}, {"edges", pairs_json(extra_edges(g))}};
}

Presheaf graph_from_json(const json& j) {
    int n = j.at("vertices").get<int>();
    if (n < 0 || n > 64) throw InvalidData("graph size out of range");
    std::vector<std::pair<int, int>> edges;
    for (const auto& pr : j.at("edges")) edges.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
    return make_graph(n, edges);
}

Presheaf embed(const Preorder& p) {
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < p.size(); ++x)
        for (int y = 0; y < p.size(); ++y)
            if (x != y && p.leq(x, y)) edges.emplace_back(x, y);
    auto g = make_graph(p.size(), edges);
    g.at[base().V] = p.carrier;
    return g;
}

Components embed_map(const Preorder& p, const Preorder& q, const std::vector<int>& map) {
    if (!is_monotone(p, q, map)) throw InvalidData("map of preorders is not monotone");
    auto g = embed(p);
    auto t = map_into_embedded(g, q, map);
    return *t;
}

std::optional<Components> map_into_embedded(const Presheaf& g, const Preorder& h, const std::vector<int>& vertices) {
    const auto& b = base();
    auto idx = embedded_edge_index(h);
    Components t(b.cat->num_objects());
    t[b.V] = FinFn{vertices, h.size()};
    std::vector<int> edges(g.size(b.E));
    for (int e = 0; e < g.size(b.E); ++e) {
        int k = idx[vertices[src(g, e)]][vertices[tgt(g, e)]];
        if (k < 0) return std::nullopt;
        edges[e] = k;
    }
    t[b.E] = FinFn{edges, h.size() + static_cast<int>(extra_edges(embed(h)).size())};
    return t;
}

PreorderReflection preorder_reflection(const Presheaf& g) {
    require_graph(g);
    const auto& b = base();
    const int n = vertex_count(g);
    Preorder p{g.at[b.V], std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    for (int e = 0; e < g.size(b.E); ++e) p.rel[src(g, e)][tgt(g, e)] = 1;
    close_transitively(p.rel);
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return {p, *map_into_embedded(g, p, id)};
}

std::optional<Preorder> as_preorder(const Presheaf& g, std::string* why) {
    require_graph(g);
    const int n = vertex_count(g);
    Preorder p{g.at[base().V], std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
    auto fail = [&](const char* reason) -> std::optional<Preorder> {
        if (why) *why = reason;
        return std::nullopt;
    };
    for (auto [a, z] : extra_edges(g)) {
        if (a == z) return fail("extra-loop");
        if (p.rel[a][z]) return fail("parallel-edges");
        p.rel[a][z] = 1;
    }
    for (int v = 0; v < n; ++v) p.rel[v][v] = 1;
    if (!is_valid(p)) return fail("not-transitive");
    return p;
}

bool verify_unit_universal(const Presheaf& g, const Preorder& p) {
    auto r = preorder_reflection(g);
    auto fp = embed(p);
    auto into = nat_components(g, fp);
    auto through = nat_components(embed(r.order), fp);
    if (into.size() != through.size()) return false;
    std::vector<Components> images;
    for (const auto& s : through) images.push_back(compose(s, r.unit));
    for (const auto& t : into)
        if (std::count(images.begin(), images.end(), t) != 1) return false;
    return true;
}

// --- enumeration -------------------------------------------------------------------------

std::vector<int> graph_encoding(const Presheaf& g) { return min_encoding(multiplicities(g), vertex_count(g)); }

std::vector<Presheaf> graphs_with(int vertices, int edges) {
    std::vector<std::pair<std::vector<int>, Presheaf>> found;
    const int n = vertices, cells = n * n;
    if (n <= 0 || edges < 0) return {};
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    auto fill = [&](auto&& self, int cell, int left) -> void {
        if (cell == cells - 1) {
            m[cell / n][cell % n] = left;
            if (is_canonical(m, n)) {
                std::vector<int> enc{n};
                for (const auto& row : m) enc.insert(enc.end(), row.begin(), row.end());
                found.emplace_back(enc, graph_from_matrix(m));
            }
            m[cell / n][cell % n] = 0;
            return;
        }
        for (int k = left; k >= 0; --k) {
            m[cell / n][cell % n] = k;
            self(self, cell + 1, left - k);
        }
        m[cell / n][cell % n] = 0;
    };
    fill(fill, 0, edges);
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Presheaf> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

std::vector<Presheaf> enumerate_graphs(int max_vertices, int max_edges) {
    std::vector<Presheaf> out;
    for (int size = 1; size <= max_vertices + max_edges; ++size)
        for (int n = 1; n <= std::min(size, max_vertices); ++n) {
            int k = size - n;
            if (k > max_edges) continue;
            for (auto& g : graphs_with(n, k)) out.push_back(std::move(g));
        }
    return out;
}

std::vector<int> preorder_encoding(const Preorder& p) { return min_encoding(p.rel, p.size()); }

std::vector<Preorder> preorders_with(int elements) {
    const int n = elements;
    std::vector<std::pair<int, int>> off;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) off.emplace_back(x, y);
    std::vector<std::pair<std::vector<int>, Preorder>> found;
    if (n <= 0) return {};
    for (unsigned long mask = 0; mask < (1ul << off.size()); ++mask) {
        Preorder p{FinSet::range(n), std::vector<std::vector<char>>(n, std::vector<char>(n, 0))};
        for (int x = 0; x < n; ++x) p.rel[x][x] = 1;
        for (std::size_t i = 0; i < off.size(); ++i)
            if (mask >> i & 1) p.rel[off[i].first][off[i].second] = 1;
        if (!is_valid(p) || !is_canonical(p.rel, n)) continue;
        std::vector<int> enc{n};
        for (const auto& row : p.rel) enc.insert(enc.end(), row.begin(), row.end());
        found.emplace_back(enc, std::move(p));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Preorder> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

std::vector<Preorder> enumerate_preorders(int max_elements) {
    std::vector<Preorder> out;
    for (int n = 1; n <= max_elements; ++n)
        for (auto& p : preorders_with(n)) out.push_back(std::move(p));
    return out;
}

// --- exhaustive checks -------------------------------------------------------------------

namespace {

Presheaf random_graph(std::mt19937& rng, int max_vertices) {
    std::uniform_int_distribution<int> nv(1, max_vertices);
    int n = nv(rng);
    std::uniform_int_distribution<int> ne(0, 2 * n), v(0, n - 1);
    std::vector<std::pair<int, int>> edges;
    for (int k = ne(rng); k > 0; --k) edges.emplace_back(v(rng), v(rng));
    return make_graph(n, edges);
}

bool preserves_product(const Presheaf& g, const Presheaf& h) {
    auto lhs = preorder_reflection(product(g, h).object).order;
    auto rhs = product(preorder_reflection(g).order, preorder_reflection(h).order);
    return lhs.rel == rhs.rel;
}

}  // namespace

Verdict check_product_preservation(const GraphBounds& b) {
    Verdict v;
    v.property = "graph-product-preservation";
    v.bounds = json{{"max_vertices", b.max_vertices},
                    {"max_edges", b.max_edges},
                    {"random_pairs", b.random_pairs},
                    {"random_max_vertices", b.random_max_vertices},
                    {"exhaustive", true}};
    auto graphs = enumerate_graphs(b.max_vertices, b.max_edges);
    std::vector<std::pair<Presheaf, Presheaf>> pairs;
    for (const auto& g : graphs)
        for (const auto& h : graphs) pairs.emplace_back(g, h);
    const std::size_t exhaustive = pairs.size();
    std::mt19937 rng(20240611u);
    for (int i = 0; i < b.random_pairs; ++i) {
        auto g = random_graph(rng, b.random_max_vertices);
        auto h = random_graph(rng, b.random_max_vertices);
        pairs.emplace_back(std::move(g), std::move(h));
    }
    try {
        Budget budget(b.budget, "product preservation");
        budget.charge(pairs.size());
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
        return v;
    }
    long bad = first_failure(pairs.size(), b.jobs,
                             [&](std::size_t i) { return !preserves_product(pairs[i].first, pairs[i].second); });
    v.stats["graphs"] = static_cast<std::int64_t>(graphs.size());
    v.stats["pairs_exhaustive"] = static_cast<std::int64_t>(exhaustive);
    v.stats["pairs_random"] = static_cast<std::int64_t>(pairs.size() - exhaustive);
    if (bad >= 0) {
        v.status = Status::Fail;
        v.witness = json{{"G", graph_to_json(pairs[bad].first)}, {"H", graph_to_json(pairs[bad].second)}};
        v.note = "reflection of the product is not the product of reflections";
    }
    return v;
}

Verdict check_exponential_ideal_graphs(const GraphBounds& b) {
    Verdict v;
    v.property = "graph-exponential-ideal";
    v.bounds = json{{"max_elements", b.max_elements},
                    {"max_vertices", b.max_vertices},
                    {"max_edges", b.max_edges},
                    {"exhaustive", true}};
    auto graphs = enumerate_graphs(b.max_vertices, b.max_edges);
    auto orders = enumerate_preorders(b.max_elements);
    const std::size_t count = graphs.size() * orders.size();
    std::vector<std::string> reasons(count);
    std::atomic<bool> over_budget{false};
    long bad = first_failure(count, b.jobs, [&](std::size_t i) {
        const auto& p = orders[i / graphs.size()];
        const auto& g = graphs[i % graphs.size()];
        try {
            Budget budget(b.budget, "exponential");
            auto e = exponential(g, embed(p), budget);
            return !as_preorder(e.object, &reasons[i]).has_value();
        } catch (const BudgetExceeded&) {
            over_budget = true;
            return false;
        }
    });
    v.stats["preorders"] = static_cast<std::int64_t>(orders.size());
    v.stats["graphs"] = static_cast<std::int64_t>(graphs.size());
    v.stats["exponentials"] = static_cast<std::int64_t>(count);
    if (bad >= 0) {
        v.status = Status::Fail;
        v.witness = json{{"P", to_json(orders[bad / graphs.size()])},
                         {"G", graph_to_json(graphs[bad % graphs.size()])},
                         {"violation", reasons[bad]}};
        v.note = "exponential is not an embedded preorder";
    } else if (over_budget) {
        v.status = Status::Inconclusive;
        v.note = "some exponential exceeded the budget";
    }
    return v;
}

// --- finite reflections ------------------------------------------------------------------

namespace {

struct FiniteReflection {
    Reflection reflection;
    std::vector<Components> maps;  // components of each morphism of B
};

using MapKey = std::vector<std::vector<int>>;

MapKey key_of(const Components& t) {
    MapKey k;
    for (const auto& f : t) k.push_back(f.map);
    return k;
}

struct FullSubcategory {
    CategoryPtr category;
    std::vector<Components> maps;                         // by morphism index
    std::map<std::tuple<int, int, MapKey>, int> lookup;   // (dom, cod, components) -> index
};

FullSubcategory full_subcategory(const std::vector<std::string>& names, const std::vector<Presheaf>& objects) {
    struct Raw {
        std::string name;
        int dom, cod;
        Components t;
    };
    std::vector<Raw> raw;
    std::vector<int> ids(objects.size(), -1);
    std::map<std::tuple<int, int, MapKey>, int> by_key;
    for (std::size_t a = 0; a < objects.size(); ++a)
        for (std::size_t b = 0; b < objects.size(); ++b) {
            auto homs = nat_components(objects[a], objects[b]);
            for (std::size_t k = 0; k < homs.size(); ++k) {
                bool identity = a == b && homs[k] == identity_map(objects[a]);
                std::string name = identity ? "id(" + names[a] + ")" : names[a] + ">" + names[b] + "#" + std::to_string(k);
                int idx = static_cast<int>(raw.size());
                if (identity) ids[a] = idx;
                by_key[{static_cast<int>(a), static_cast<int>(b), key_of(homs[k])}] = idx;
                raw.push_back({name, static_cast<int>(a), static_cast<int>(b), homs[k]});
            }
        }
    const std::size_t n = raw.size();
    std::vector<int> table(n * n, -1);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t f = 0; f < n; ++f) {
            if (raw[f].cod != raw[g].dom) continue;
            auto it = by_key.find({raw[f].dom, raw[g].cod, key_of(compose(raw[g].t, raw[f].t))});
            table[g * n + f] = it->second;
        }
    std::vector<MorphismInfo> infos;
    for (const auto& r : raw) infos.push_back({r.name, r.dom, r.cod});
    auto v = FinCategory::from_tables(names, infos, ids, table, false);
    if (!v.ok()) throw InvalidData("full subcategory of graphs is not a category");
    FullSubcategory out;
    out.category = share(std::move(*v.value));
    const auto& c = *out.category;
    out.maps.resize(n);
    for (const auto& r : raw) {
        int m = c.morphism_index(r.name);
        out.maps[m] = r.t;
        out.lookup[{c.object_index(names[r.dom]), c.object_index(names[r.cod]), key_of(r.t)}] = m;
    }
    return out;
}

FiniteReflection build_finite_reflection(const std::vector<NamedGraph>& graphs, const std::vector<NamedPreorder>& preorders) {
    std::vector<std::string> b_names, a_names;
    std::vector<Presheaf> b_objects, a_objects;
    for (const auto& g : graphs) {
        b_names.push_back(g.name);
        b_objects.push_back(g.graph);
    }
    for (const auto& p : preorders) {
        b_names.push_back("F" + p.name);
        b_objects.push_back(embed(p.order));
        a_names.push_back(p.name);
        a_objects.push_back(embed(p.order));
    }
    auto B = full_subcategory(b_names, b_objects);
    auto A = full_subcategory(a_names, a_objects);
    const auto& bc = *B.category;
    const auto& ac = *A.category;

    FinFunctor right{A.category, B.category, std::vector<int>(ac.num_objects()), std::vector<int>(ac.num_morphisms())};
    for (int o = 0; o < ac.num_objects(); ++o) right.obj_map[o] = bc.object_index("F" + ac.object_name(o));
    for (int m = 0; m < ac.num_morphisms(); ++m)
        right.mor_map[m] = B.lookup.at({right.obj(ac.dom(m)), right.obj(ac.cod(m)), key_of(A.maps[m])});

    FinFunctor left{B.category, A.category, std::vector<int>(bc.num_objects()), std::vector<int>(bc.num_morphisms())};
    std::vector<int> unit(bc.num_objects());
    for (int o = 0; o < bc.num_objects(); ++o) {
        const auto& name = bc.object_name(o);
        auto listed = std::find(b_names.begin(), b_names.end(), name) - b_names.begin();
        const auto& g = b_objects[listed];
        if (static_cast<std::size_t>(listed) >= graphs.size()) {
            int a = ac.object_index(name.substr(1));
            left.obj_map[o] = a;
            unit[o] = bc.identity(o);
            continue;
        }
        auto r = preorder_reflection(g);
        auto lg = embed(r.order);
        bool placed = false;
        for (int a = 0; a < ac.num_objects() && !placed; ++a) {
            auto iso = find_isomorphism(lg, embed(preorders[std::find(a_names.begin(), a_names.end(), ac.object_name(a)) - a_names.begin()].order));
            if (!iso) continue;
            left.obj_map[o] = a;
            unit[o] = B.lookup.at({o, right.obj(a), key_of(compose(*iso, r.unit))});
            placed = true;
        }
        if (!placed) throw InvalidData("graph " + name + " reflects onto no listed preorder");
    }
    for (int m = 0; m < bc.num_morphisms(); ++m) {
        int x = bc.dom(m), y = bc.cod(m);
        auto target = compose(B.maps[unit[y]], B.maps[m]);
        int found = -1;
        for (int k : ac.hom(left.obj(x), left.obj(y)))
            if (compose(B.maps[right.mor(k)], B.maps[unit[x]]) == target) {
                found = k;
                break;
            }
        if (found < 0) throw InvalidData("reflection does not extend to " + bc.morphism_name(m));
        left.mor_map[m] = found;
    }
    return {Reflection{left, right, unit}, B.maps};
}

}  // namespace

Reflection finite_reflection(const std::vector<NamedGraph>& graphs, const std::vector<NamedPreorder>& preorders) {
    return build_finite_reflection(graphs, preorders).reflection;
}

// --- witness searches --------------------------------------------------------------------

namespace {

/// Vertex tables of the graph maps g -> F p, in lexicographic order.
std::vector<std::vector<int>> maps_into(const Presheaf& g, const Preorder& p) {
    std::vector<std::vector<int>> out;
    for_each_function(vertex_count(g), p.size(), [&](const std::vector<int>& f) {
        bool ok = true;
        for (int e = 0; e < g.size(base().E) && ok; ++e) ok = p.leq(f[src(g, e)], f[tgt(g, e)]);
        if (ok) out.push_back(f);
        return true;
    });
    return out;
}

class GraphCache {
public:
    const std::vector<Presheaf>& graphs(int n, int k) {
        auto it = graphs_.find({n, k});
        if (it == graphs_.end()) it = graphs_.emplace(std::make_pair(n, k), graphs_with(n, k)).first;
        return it->second;
    }
    const std::vector<Preorder>& preorders(int n) {
        auto it = preorders_.find(n);
        if (it == preorders_.end()) it = preorders_.emplace(n, preorders_with(n)).first;
        return it->second;
    }

private:
    std::map<std::pair<int, int>, std::vector<Presheaf>> graphs_;
    std::map<int, std::vector<Preorder>> preorders_;
};

json table_json(const std::vector<int>& t) { return json(t); }

SearchResult not_found(Verdict v, std::int64_t candidates) {
    v.status = Status::Pass;
    v.stats["candidates"] = candidates;
    v.note = "NOT-FOUND within bounds";
    return {false, v};
}

}  // namespace

SearchResult find_sle_failure(const GraphBounds& b) {
    Verdict v;
    v.property = "semi-left-exact";
    v.bounds = json{{"max_vertices", b.max_vertices}, {"max_edges", b.max_edges}, {"order", "total size, then canonical"}};
    GraphCache cache;
    Budget budget(b.budget, "sle-failure search");
    std::int64_t candidates = 0;
    const int max_graph = b.max_vertices + b.max_edges;
    try {
        for (int total = 3; total <= max_graph + 2 * b.max_vertices; ++total)
            for (int sx = 1; sx <= max_graph; ++sx)
                for (int na = 1; na <= b.max_vertices; ++na) {
                    int na2 = total - sx - na;
                    if (na2 < 1 || na2 > b.max_vertices) continue;
                    for (int n = 1; n <= std::min(sx, b.max_vertices); ++n) {
                        if (sx - n > b.max_edges) continue;
                        for (const auto& x : cache.graphs(n, sx - n)) {
                            auto lx = preorder_reflection(x).order;
                            for (const auto& a : cache.preorders(na))
                                for (const auto& a2 : cache.preorders(na2))
                                    for (const auto& u : monotone_maps(a2, a)) {
                                        auto fu = embed_map(a2, a, u);
                                        auto fa2 = embed(a2);
                                        for (const auto& ft : maps_into(x, a)) {
                                            budget.charge();
                                            ++candidates;
                                            auto f = *map_into_embedded(x, a, ft);
                                            auto pb = pullback(x, fa2, f, fu);
                                            auto lp = preorder_reflection(pb.object).order;
                                            const int m = lp.size();
                                            const auto& p1 = pb.first[base().V];
                                            const auto& p2 = pb.second[base().V];
                                            Preorder q{lp.carrier, std::vector<std::vector<char>>(m, std::vector<char>(m, 0))};
                                            for (int i = 0; i < m; ++i)
                                                for (int j = 0; j < m; ++j)
                                                    q.rel[i][j] = lx.leq(p1(i), p1(j)) && a2.leq(p2(i), p2(j));
                                            if (q.rel == lp.rel) continue;

                                            auto fr = build_finite_reflection(
                                                {{"X", x}, {"P", pb.object}},
                                                {{"A", a}, {"A2", a2}, {"LX", lx}, {"LP", lp}, {"Q", q}});
                                            const auto& r = fr.reflection;
                                            const auto& bc = *r.big();
                                            auto find = [&](const std::string& from, const std::string& to, const Components& t) {
                                                for (int k : bc.hom(bc.object_index(from), bc.object_index(to)))
                                                    if (fr.maps[k] == t) return k;
                                                throw std::logic_error("map missing from the finite reflection");
                                            };
                                            int fi = find("X", "FA", f);
                                            int ui = find("FA2", "FA", fu);
                                            auto w = test_pullback_square(r, fi, ui, "right", "semi-left-exact");
                                            if (!w) throw std::logic_error("finite reflection preserves the failing square");
                                            json instance{{"X", graph_to_json(x)},
                                                          {"A", to_json(a)},
                                                          {"A2", to_json(a2)},
                                                          {"u", table_json(u)},
                                                          {"f", table_json(ft)},
                                                          {"total_size", total},
                                                          {"pullback_vertices", m},
                                                          {"mediators", "none"}};
                                            json wj = to_json(*w);
                                            wj["data"]["graph"] = instance;
                                            v.status = Status::Fail;
                                            v.witness = wj;
                                            v.stats["candidates"] = candidates;
                                            v.stats["total_size"] = total;
                                            v.note = "reflection of a pullback along an embedded map is not a pullback";
                                            return {true, v};
                                        }
                                    }
                        }
                    }
                }
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
        v.stats["candidates"] = candidates;
        return {false, v};
    }
    return not_found(v, candidates);
}

SearchResult find_pi_witness(const GraphBounds& b) {
    Verdict v;
    v.property = "pi-closure";
    v.bounds = json{{"max_elements", b.max_elements}, {"order", "total size, then canonical"}};
    v.note = "evidence";
    GraphCache cache;
    Budget budget(b.budget, "pi-witness search");
    std::int64_t candidates = 0;
    const int m = b.max_elements;
    try {
        for (int total = 3; total <= 3 * m; ++total)
            for (int nx = 1; nx <= m; ++nx)
                for (int ny = 1; ny <= m; ++ny) {
                    int nz = total - nx - ny;
                    if (nz < 1 || nz > m) continue;
                    for (const auto& x : cache.preorders(nx))
                        for (const auto& y : cache.preorders(ny))
                            for (const auto& z : cache.preorders(nz))
                                for (const auto& f : monotone_maps(x, y))
                                    for (const auto& g : monotone_maps(z, x)) {
                                        budget.charge();
                                        ++candidates;
                                        auto pi = dependent_product(embed(x), embed(y), embed_map(x, y, f), embed(z),
                                                                    embed_map(z, x, g), budget);
                                        std::string why;
                                        if (as_preorder(pi.object, &why)) continue;
                                        v.status = Status::Fail;
                                        v.witness = json{{"level", "pi"},
                                                         {"X", to_json(x)},
                                                         {"Y", to_json(y)},
                                                         {"Z", to_json(z)},
                                                         {"f", table_json(f)},
                                                         {"g", table_json(g)},
                                                         {"pi", graph_to_json(pi.object)},
                                                         {"violation", why}};
                                        v.stats["candidates"] = candidates;
                                        v.stats["total_size"] = total;
                                        v.note = "evidence: the dependent product is not an embedded preorder (" + why + ")";
                                        return {true, v};
                                    }
                }
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
        v.stats["candidates"] = candidates;
        return {false, v};
    }
    return not_found(v, candidates);
}

SearchResult find_sieve_witness(const GraphBounds& b) {
    Verdict v;
    v.property = "sieve-reflection";
    v.bounds = json{{"max_vertices", b.max_vertices}, {"max_edges", b.max_edges}, {"order", "total size, then canonical"}};
    v.note = "evidence";
    GraphCache cache;
    Budget budget(b.budget, "sieve-witness search");
    std::int64_t candidates = 0;
    const int max_graph = b.max_vertices + b.max_edges;
    try {
        for (int total = 2; total <= max_graph + b.max_vertices; ++total)
            for (int sg = 1; sg <= max_graph; ++sg) {
                int na = total - sg;
                if (na < 1 || na > b.max_vertices) continue;
                for (int n = 1; n <= std::min(sg, b.max_vertices); ++n) {
                    if (sg - n > b.max_edges) continue;
                    for (const auto& g : cache.graphs(n, sg - n)) {
                        auto lg = preorder_reflection(g).order;
                        auto flg = embed(lg);
                        auto back = nat_components(flg, g, budget);
                        for (const auto& a : cache.preorders(na))
                            for (const auto& ut : maps_into(g, a)) {
                                budget.charge();
                                ++candidates;
                                auto u = *map_into_embedded(g, a, ut);
                                auto flu = embed_map(lg, a, ut);
                                bool factors = false;
                                for (const auto& h : back)
                                    if (compose(u, h) == flu) {
                                        factors = true;
                                        break;
                                    }
                                if (factors) continue;
                                v.status = Status::Fail;
                                v.witness = json{{"level", "sieve"},
                                                 {"A0", to_json(a)},
                                                 {"B0", graph_to_json(g)},
                                                 {"u", table_json(ut)},
                                                 {"sieve", "principal"},
                                                 {"maps_checked", back.size()}};
                                v.stats["candidates"] = candidates;
                                v.stats["total_size"] = total;
                                v.note = "evidence: u lies in its principal sieve but F(L u) does not";
                                return {true, v};
                            }
                    }
                }
            }
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
        v.stats["candidates"] = candidates;
        return {false, v};
    }
    return not_found(v, candidates);
}

// --- replay ------------------------------------------------------------------------------

namespace {

/// Raw graph data read back from a witness, kept apart from the presheaf model.
struct RawGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // including one loop per vertex
};

RawGraph raw_graph(const json& j) {
    RawGraph g;
    g.n = j.at("vertices").get<int>();
    if (g.n < 0 || g.n > 64) throw InvalidData("graph size out of range");
    for (int v = 0; v < g.n; ++v) g.edges.emplace_back(v, v);
    for (const auto& e : j.at("edges")) {
        int a = e.at(0).get<int>(), z = e.at(1).get<int>();
        if (a < 0 || z < 0 || a >= g.n || z >= g.n) throw InvalidData("edge endpoint out of range");
        g.edges.emplace_back(a, z);
    }
    return g;
}

struct RawOrder {
    int n = 0;
    std::vector<std::vector<bool>> le;
};

/// Reachability by breadth-first search from each vertex.
std::vector<std::vector<bool>> reach(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, z] : edges) adj[a].push_back(z);
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s) {
        std::vector<int> queue{s};
        r[s][s] = true;
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (int z : adj[queue[i]])
                if (!r[s][z]) {
                    r[s][z] = true;
                    queue.push_back(z);
                }
    }
    return r;
}

RawOrder raw_order(const json& j) {
    RawOrder o;
    o.n = j.at("elements").get<int>();
    if (o.n < 0 || o.n > 64) throw InvalidData("preorder size out of range");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& pr : j.at("order")) {
        int a = pr.at(0).get<int>(), z = pr.at(1).get<int>();
        if (a < 0 || z < 0 || a >= o.n || z >= o.n) throw InvalidData("order pair out of range");
        pairs.emplace_back(a, z);
    }
    o.le = reach(o.n, pairs);
    return o;
}

std::vector<int> raw_table(const json& j, int size, int range) {
    auto t = j.get<std::vector<int>>();
    if (static_cast<int>(t.size()) != size) throw InvalidData("map table has the wrong length");
    for (int x : t)
        if (x < 0 || x >= range) throw InvalidData("map table entry out of range");
    return t;
}

void require_monotone(const RawOrder& p, const RawOrder& q, const std::vector<int>& t) {
    for (int x = 0; x < p.n; ++x)
        for (int y = 0; y < p.n; ++y)
            if (p.le[x][y] && !q.le[t[x]][t[y]]) throw InvalidData("stored map is not monotone");
}

}  // namespace

Verdict replay_graph_square(const json& instance) {
    auto x = raw_graph(instance.at("X"));
    auto a = raw_order(instance.at("A"));
    auto a2 = raw_order(instance.at("A2"));
    auto u = raw_table(instance.at("u"), a2.n, a.n);
    auto f = raw_table(instance.at("f"), x.n, a.n);
    require_monotone(a2, a, u);
    for (auto [s, t] : x.edges)
        if (!a.le[f[s]][f[t]]) throw InvalidData("stored f is not a graph map");

    std::vector<std::pair<int, int>> verts;
    std::map<std::pair<int, int>, int> id;
    for (int v = 0; v < x.n; ++v)
        for (int p = 0; p < a2.n; ++p)
            if (f[v] == u[p]) {
                id[{v, p}] = static_cast<int>(verts.size());
                verts.emplace_back(v, p);
            }
    std::vector<std::pair<int, int>> edges;
    for (auto [s, t] : x.edges)
        for (int p = 0; p < a2.n; ++p)
            for (int q = 0; q < a2.n; ++q)
                if (a2.le[p][q] && id.count({s, p}) && id.count({t, q})) edges.emplace_back(id[{s, p}], id[{t, q}]);
    const int n = static_cast<int>(verts.size());
    auto lp = reach(n, edges);
    auto lx = reach(x.n, x.edges);
    int missing = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool in_q = lx[verts[i].first][verts[j].first] && a2.le[verts[i].second][verts[j].second];
            if (lp[i][j] && !in_q) throw InvalidData("pullback order exceeds the product order");
            missing += in_q && !lp[i][j];
        }
    Verdict v;
    v.property = "semi-left-exact";
    v.bounds = json{{"replay", true}};
    v.stats["pullback_vertices"] = n;
    v.stats["missing_relations"] = missing;
    if (instance.contains("pullback_vertices") && instance.at("pullback_vertices").get<int>() != n)
        throw InvalidData("stored pullback size disagrees with the recomputation");
    if (missing) {
        v.status = Status::Fail;
        v.witness = instance;
        v.note = "reflected pullback misses relations of the preorder pullback";
    } else {
        v.note = "square is preserved";
    }
    return v;
}

Verdict replay_pi_witness(const json& w) {
    auto x = raw_order(w.at("X"));
    auto y = raw_order(w.at("Y"));
    auto z = raw_order(w.at("Z"));
    auto f = raw_table(w.at("f"), x.n, y.n);
    auto g = raw_table(w.at("g"), z.n, x.n);
    require_monotone(x, y, f);
    require_monotone(z, x, g);
    // vertices: (y, s) with s a monotone section of g over the fiber of y
    std::vector<std::vector<int>> fiber(y.n);
    for (int i = 0; i < x.n; ++i) fiber[f[i]].push_back(i);
    std::vector<std::vector<std::vector<int>>> sections(y.n);  // s as a table on the fiber
    for (int b = 0; b < y.n; ++b) {
        const auto& fb = fiber[b];
        std::vector<int> s(fb.size(), 0);
        std::function<void(std::size_t)> pick = [&](std::size_t i) {
            if (i == fb.size()) {
                for (std::size_t p = 0; p < fb.size(); ++p)
                    for (std::size_t q = 0; q < fb.size(); ++q)
                        if (x.le[fb[p]][fb[q]] && !z.le[s[p]][s[q]]) return;
                sections[b].push_back(s);
                return;
            }
            for (int c = 0; c < z.n; ++c)
                if (g[c] == fb[i]) {
                    s[i] = c;
                    pick(i + 1);
                }
        };
        pick(0);
    }
    std::vector<std::pair<int, int>> verts;
    for (int b = 0; b < y.n; ++b)
        for (std::size_t k = 0; k < sections[b].size(); ++k) verts.emplace_back(b, static_cast<int>(k));
    const int n = static_cast<int>(verts.size());
    auto compatible = [&](int i, int j) {
        auto [b0, k0] = verts[i];
        auto [b1, k1] = verts[j];
        if (!y.le[b0][b1]) return false;
        const auto &s0 = sections[b0][k0], &s1 = sections[b1][k1];
        for (std::size_t p = 0; p < fiber[b0].size(); ++p)
            for (std::size_t q = 0; q < fiber[b1].size(); ++q)
                if (x.le[fiber[b0][p]][fiber[b1][q]] && !z.le[s0[p]][s1[q]]) return false;
        return true;
    };
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    int edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (compatible(i, j)) {
                edge[i][j] = true;
                ++edges;
            }
    const auto& stored = w.at("pi");
    int stored_edges = stored.at("vertices").get<int>() + static_cast<int>(stored.at("edges").size());
    if (stored.at("vertices").get<int>() != n || stored_edges != edges)
        throw InvalidData("stored dependent product disagrees with the recomputation");
    json triple;
    for (int i = 0; i < n && triple.is_null(); ++i)
        for (int j = 0; j < n && triple.is_null(); ++j)
            for (int k = 0; k < n && triple.is_null(); ++k)
                if (edge[i][j] && edge[j][k] && !edge[i][k]) triple = {i, j, k};
    Verdict v;
    v.property = "pi-closure";
    v.bounds = json{{"replay", true}};
    v.stats["vertices"] = n;
    v.stats["edges"] = edges;
    if (!triple.is_null()) {
        v.status = Status::Fail;
        v.witness = w;
        v.note = "dependent product is not transitive";
    } else {
        v.note = "dependent product is an embedded preorder";
    }
    return v;
}

Verdict replay_sieve_witness(const json& w) {
    auto a = raw_order(w.at("A0"));
    auto g = raw_graph(w.at("B0"));
    auto u = raw_table(w.at("u"), g.n, a.n);
    for (auto [s, t] : g.edges)
        if (!a.le[u[s]][u[t]]) throw InvalidData("stored u is not a graph map");
    auto lg = reach(g.n, g.edges);
    std::vector<std::vector<bool>> adj(g.n, std::vector<bool>(g.n, false));
    for (auto [s, t] : g.edges) adj[s][t] = true;
    // a factorization h : F L B0 -> B0 of F(L u) through u, on vertices
    bool factors = false;
    std::vector<int> h(g.n, 0);
    std::function<void(int)> pick = [&](int i) {
        if (factors) return;
        if (i == g.n) {
            for (int p = 0; p < g.n; ++p)
                for (int q = 0; q < g.n; ++q)
                    if (lg[p][q] && !adj[h[p]][h[q]]) return;
            factors = true;
            return;
        }
        for (int c = 0; c < g.n; ++c)
            if (u[c] == u[i]) {
                h[i] = c;
                pick(i + 1);
            }
    };
    pick(0);
    Verdict v;
    v.property = "sieve-reflection";
    v.bounds = json{{"replay", true}};
    if (!factors) {
        v.status = Status::Fail;
        v.witness = w;
        v.note = "F(L u) does not factor through u";
    } else {
        v.note = "F(L u) factors through u";
    }
    return v;
}

}  // namespace finitopos
