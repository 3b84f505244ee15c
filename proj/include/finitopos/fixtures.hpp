#pragma once

// Built-in categories and reflections addressable by name.

#include <string>
#include <vector>

#include "finitopos/fincat.hpp"

namespace finitopos {

/// Reflexive-graph base: objects V, E; d0, d1 : V -> E, s : E -> V with
/// s.d0 = s.d1 = id(V). Seven morphisms.
CategoryPtr delta1();
/// Presentation text of delta1 in the DSL.
const std::string& delta1_source();

/// Chain c0 < c1 < ... < c{n-1}.
CategoryPtr chain(int n);
CategoryPtr walking_iso();
/// M3: bot < a, b, c < top.
CategoryPtr m3();
/// Boolean lattice on atoms a, b: bot < a, b < top.
CategoryPtr bool2();

/// A functor between preorder categories from its object map; throws
/// InvalidData if the map is not monotone.
FinFunctor monotone_functor(CategoryPtr source, CategoryPtr target, const std::vector<int>& obj_map);

/// The reflection onto the full subcategory on `keep`, with L b the
/// least kept object above b. Throws InvalidData if some b has none.
Reflection poset_reflection(CategoryPtr big, const std::vector<std::string>& keep);

struct Fixture {
    std::string name;
    std::string description;
    Reflection reflection;
};

/// Names in listing order: lattice-3-2, m3, bool-2, delta1, chain-2,
/// walking-iso, terminal.
std::vector<std::string> fixture_names();
/// Throws InvalidData for an unknown name.
Fixture fixture(const std::string& name);
std::vector<Fixture> all_fixtures();

}  // namespace finitopos
