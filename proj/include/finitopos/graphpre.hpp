#pragma once

// Finite reflexive graphs as presheaves on the reflexive-graph base, finite
// preorders, the inclusion of preorders into graphs and its reflection, and
// the witness searches over bounded graph families.
//
// Graphs built here list one distinguished loop per vertex first, then the
// remaining edges in row-major order of (source, target). Vertices and
// preorder elements are named "0", "1", ...

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finitopos/checks.hpp"
#include "finitopos/presheaf.hpp"

namespace finitopos {

struct Preorder {
    FinSet carrier;
    std::vector<std::vector<char>> rel;  // rel[x][y]: x <= y

    int size() const noexcept { return carrier.size(); }
    bool leq(int x, int y) const { return rel[x][y] != 0; }
    bool operator==(const Preorder&) const = default;
};

bool is_valid(const Preorder& p);
/// Reflexive-transitive closure of `pairs` on n elements.
Preorder make_preorder(int n, const std::vector<std::pair<int, int>>& pairs);
Preorder chain_preorder(int n);
/// Componentwise order on the product, elements in lexicographic order.
Preorder product(const Preorder& p, const Preorder& q);
bool is_monotone(const Preorder& p, const Preorder& q, const std::vector<int>& map);
/// Monotone maps p -> q as element tables, in lexicographic order.
std::vector<std::vector<int>> monotone_maps(const Preorder& p, const Preorder& q);
json to_json(const Preorder& p);
Preorder preorder_from_json(const json& j);

/// n vertices with their distinguished loops, followed by `edges`.
Presheaf make_graph(int n, const std::vector<std::pair<int, int>>& edges);
int vertex_count(const Presheaf& g);
/// Edges other than the distinguished loops, as (source, target) pairs.
std::vector<std::pair<int, int>> extra_edges(const Presheaf& g);
/// Vertex count plus extra edge count.
int graph_size(const Presheaf& g);
json graph_to_json(const Presheaf& g);
Presheaf graph_from_json(const json& j);

/// The inclusion F: one edge per related pair, reflexivity edges as the loops.
Presheaf embed(const Preorder& p);
/// F on a monotone map, given by its element table.
Components embed_map(const Preorder& p, const Preorder& q, const std::vector<int>& map);
/// The graph map g -> h with the given vertex table, when h has a unique edge
/// between every pair of vertices that g needs; nullopt if some edge has no image.
std::optional<Components> map_into_embedded(const Presheaf& g, const Preorder& h, const std::vector<int>& vertices);

/// The reflection L: vertices of g ordered by reachability, and the unit g -> F L g.
struct PreorderReflection {
    Preorder order;
    Components unit;
};
PreorderReflection preorder_reflection(const Presheaf& g);

/// The preorder a graph embeds, if it is isomorphic to an embedded preorder;
/// otherwise `why` receives "extra-loop", "parallel-edges" or "not-transitive".
std::optional<Preorder> as_preorder(const Presheaf& g, std::string* why = nullptr);

/// Factorization of every map g -> F p through the unit, by enumeration.
bool verify_unit_universal(const Presheaf& g, const Preorder& p);

/// Lexicographically least (n, multiplicity matrix) over vertex permutations.
std::vector<int> graph_encoding(const Presheaf& g);
/// All reflexive graphs with exactly `vertices` vertices and `edges` extra
/// edges, one per isomorphism class, by increasing canonical encoding.
std::vector<Presheaf> graphs_with(int vertices, int edges);
/// Graphs with 1..max_vertices vertices and at most max_edges extra edges,
/// ordered by size, then vertex count, then encoding.
std::vector<Presheaf> enumerate_graphs(int max_vertices, int max_edges);

std::vector<int> preorder_encoding(const Preorder& p);
std::vector<Preorder> preorders_with(int elements);
std::vector<Preorder> enumerate_preorders(int max_elements);

struct GraphBounds {
    int max_vertices = 3;
    int max_edges = 4;
    int random_pairs = 100;
    int random_max_vertices = 5;
    int max_elements = 3;  // preorder size for the exponential and witness searches
    std::uint64_t budget = default_budget();
    int jobs = 1;
    bool fast = false;
};

/// L(G × H) ≅ L G × L H over all pairs within bounds plus seeded random pairs.
Verdict check_product_preservation(const GraphBounds& b = {});
/// (F P)^G is an embedded preorder for preorders and graphs within bounds.
Verdict check_exponential_ideal_graphs(const GraphBounds& b = {});

/// A finite full subcategory of graphs on `graphs` plus the embedded
/// preorders, the full subcategory of preorders, and the reflection between
/// them. Every listed graph must reflect onto one of the listed preorders up
/// to isomorphism. Names must be distinct.
struct NamedGraph {
    std::string name;
    Presheaf graph;
};
struct NamedPreorder {
    std::string name;
    Preorder order;
};
Reflection finite_reflection(const std::vector<NamedGraph>& graphs, const std::vector<NamedPreorder>& preorders);

/// Outcome of a witness search: FAIL with a witness when found, PASS with the
/// exhausted bounds when not (NOT-FOUND), INCONCLUSIVE on budget exhaustion.
struct SearchResult {
    bool found = false;
    Verdict verdict;
};

/// Smallest cospan X -> F A <- F A' (right leg F u) whose pullback L does not
/// preserve. The witness is a category-level square over the finite
/// reflection spanned by the instance, with the graph instance under "graph".
SearchResult find_sle_failure(const GraphBounds& b);
/// Maps f : X -> Y, g : Z -> X of preorders whose dependent product in graphs
/// is not an embedded preorder.
SearchResult find_pi_witness(const GraphBounds& b);
/// A map u : B -> F A whose principal sieve does not contain F(L u).
SearchResult find_sieve_witness(const GraphBounds& b);

/// Independent re-derivations of the stored graph-level instances.
Verdict replay_graph_square(const json& instance);
Verdict replay_pi_witness(const json& witness);
Verdict replay_sieve_witness(const json& witness);

}  // namespace finitopos
