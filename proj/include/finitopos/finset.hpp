#pragma once

// Finite sets, total functions between them, and limits/colimits of
// finite-set-valued diagrams over a finite index category.

#include <map>
#include <string>
#include <vector>

#include "finitopos/common.hpp"
#include "finitopos/fincat.hpp"

namespace finitopos {

struct FinSet {
    std::vector<std::string> elements;

    int size() const noexcept { return static_cast<int>(elements.size()); }
    bool operator==(const FinSet&) const = default;

    /// Elements named "0", "1", ..., "n-1".
    static FinSet range(int n);
    bool has_duplicates() const;
    int index_of(const std::string& e) const;  // -1 if absent
};

/// A total function given by its table; the domain is [0, map.size()).
struct FinFn {
    std::vector<int> map;
    int cod_size = 0;

    int dom_size() const noexcept { return static_cast<int>(map.size()); }
    int operator()(int x) const { return map[x]; }
    bool operator==(const FinFn&) const = default;

    static FinFn identity(int n);
    /// Total and in range.
    bool valid() const;
    bool injective() const;
    bool surjective() const;
};

/// g∘f.
FinFn compose(const FinFn& g, const FinFn& f);

/// A covariant functor from a finite index category to finite sets.
struct SetDiagram {
    CategoryPtr index;
    std::vector<FinSet> on_objects;
    std::vector<FinFn> on_morphisms;
};

std::vector<Violation> validate_diagram(const SetDiagram& d);

struct LimitResult {
    FinSet set;
    std::vector<FinFn> projections;        // one per index object
    std::vector<std::vector<int>> tuples;  // element -> component per index object
};

struct ColimitResult {
    FinSet set;
    std::vector<FinFn> injections;  // one per index object
};

/// Compatible families, enumerated as the equalizer of the two maps between
/// products induced by the morphisms. Elements are tuples in index order,
/// serialized "(x_0,x_1,...)"; order is lexicographic on component indices.
LimitResult limit(const SetDiagram& d, Budget& budget);
LimitResult limit(const SetDiagram& d);

/// Quotient of the disjoint union by x ~ D(f)(x), by union-find. Each class is
/// represented by its least member in (object, element) order and named
/// "object|element" after it.
ColimitResult colimit(const SetDiagram& d);

/// Equalizer {x : f(x) = g(x)} as a subset of the domain (indices).
std::vector<int> equalizer(const FinFn& f, const FinFn& g);

/// Coequalizer of f, g : X -> Y: class index for every element of Y.
FinFn coequalizer(const FinFn& f, const FinFn& g);

/// "(a,b,...)" from parts.
std::string tuple_name(const std::vector<std::string>& parts);

}  // namespace finitopos
