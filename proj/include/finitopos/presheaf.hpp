#pragma once

// Finite-set-valued presheaves on a finite base category and the topos
// structure on them: Yoneda embedding, natural transformations, finite
// limits, exponentials, sieves, categories of elements and dependent products.

#include <memory>
#include <optional>
#include <vector>

#include "finitopos/fincat.hpp"
#include "finitopos/finset.hpp"

namespace finitopos {

/// A contravariant functor base -> FinSet: `act[f]` for f : c -> d maps at[d] -> at[c].
struct Presheaf {
    CategoryPtr base;
    std::vector<FinSet> at;
    std::vector<FinFn> act;

    int size(int c) const { return at[c].size(); }
    int total_size() const;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

/// Components of a natural transformation, one function per base object.
using Components = std::vector<FinFn>;

struct PresheafMap {
    PresheafPtr source;
    PresheafPtr target;
    Components components;
};

std::vector<Violation> validate_presheaf(const Presheaf& p);
/// Throws InvalidData naming `what` if `p` fails validation.
void require_valid(const Presheaf& p, const char* what);
bool is_natural(const Components& t, const Presheaf& source, const Presheaf& target);
bool same_base(const Presheaf& a, const Presheaf& b);

/// Fills in the action of every morphism not listed in `known` from
/// composites of listed ones (act(g∘f) = act(f)∘act(g)); identities act as
/// identities. Throws InvalidData if some action cannot be derived.
void complete_actions(Presheaf& p, std::vector<char> known);

Presheaf terminal_presheaf(CategoryPtr base);
Presheaf empty_presheaf(CategoryPtr base);
Presheaf yoneda(CategoryPtr base, int c);

Components identity_map(const Presheaf& p);
Components compose(const Components& g, const Components& f);
bool is_isomorphism(const Components& t);

struct ProductResult {
    Presheaf object;
    Components first;
    Components second;
    /// Per base object, x * |Y(c)| + y -> element index, or -1 outside a pullback.
    std::vector<std::vector<int>> index;
};

/// Pointwise product; elements ordered lexicographically and named "(x,y)".
ProductResult product(const Presheaf& x, const Presheaf& y);
/// Pullback of f : X -> Z and g : Y -> Z; elements are the pairs with f(x) = g(y).
ProductResult pullback(const Presheaf& x, const Presheaf& y, const Components& f, const Components& g);
/// The map into a product induced by two maps with common domain W.
Components pair_maps(const Presheaf& w, const ProductResult& prod, const Presheaf& x, const Presheaf& y,
                     const Components& f, const Components& g);

/// All natural transformations x => y, duplicate-free, sorted by component
/// tables in base-object order. With `bijective_only` only isomorphisms.
std::vector<Components> nat_components(const Presheaf& x, const Presheaf& y, Budget& budget,
                                       bool bijective_only = false);
std::vector<Components> nat_components(const Presheaf& x, const Presheaf& y);
std::vector<PresheafMap> nat_transformations(const Presheaf& x, const Presheaf& y);
std::size_t count_nat(const Presheaf& x, const Presheaf& y, Budget& budget);

std::optional<Components> find_isomorphism(const Presheaf& x, const Presheaf& y);
/// An isomorphism t : x -> y with q∘t = p for p : x -> base, q : y -> base.
std::optional<Components> find_isomorphism_over(const Presheaf& x, const Presheaf& y, const Components& p,
                                                const Components& q);
/// Natural transformations t : w -> v with q∘t = p.
std::vector<Components> nat_over(const Presheaf& w, const Presheaf& v, const Components& p, const Components& q,
                                 Budget& budget);

struct ExponentialResult {
    Presheaf object;                                // Y^X
    std::vector<std::vector<Components>> families;  // per c: element -> Nat(y_c × X, Y)
    Presheaf eval_domain;                           // Y^X × X
    Components eval;                                // Y^X × X -> Y
};

/// (Y^X)(c) = Nat(y_c × X, Y), acting by precomposition with y_f × id.
ExponentialResult exponential(const Presheaf& x, const Presheaf& y, Budget& budget);
ExponentialResult exponential(const Presheaf& x, const Presheaf& y);

/// Currying Nat(W × X, Y) -> Nat(W, Y^X).
Components curry(const Presheaf& w, const Presheaf& x, const ExponentialResult& e, const Components& t);
/// Uncurrying Nat(W, Y^X) -> Nat(W × X, Y) through the evaluation map.
Components uncurry(const Presheaf& w, const Presheaf& x, const ExponentialResult& e, const Components& s);

struct Sieve {
    CategoryPtr base;
    int on = -1;
    std::vector<int> members;  // sorted morphism indices with codomain `on`
};

bool is_sieve(const Sieve& s);
std::vector<Sieve> sieves_on(CategoryPtr base, int c);

/// The category of elements: objects (c, x ∈ P(c)) named "(c,x)"; a morphism
/// (c, P(f)(y)) -> (d, y) for every f : c -> d and y ∈ P(d), named "(f,y)".
struct Elements {
    CategoryPtr category;
    FinFunctor projection;
    std::vector<std::pair<int, int>> object_of;     // el object -> (c, x)
    std::vector<std::vector<int>> index;            // c -> x -> el object
    std::vector<std::pair<int, int>> morphism_of;   // el morphism -> (f, y)
};

Elements category_of_elements(const Presheaf& p);

/// For p : W -> Y, the presheaf on el(Y) sending (c, y) to the fiber p_c^{-1}(y).
Presheaf fibers_over(const Elements& el_y, const Presheaf& w, const Components& p);

struct DependentProduct {
    Presheaf object;        // Π_f g
    Components projection;  // Π_f g -> Y
    Presheaf pulled_back;   // f*(Π_f g) = Π_f g ×_Y X
    Components counit;      // f*(Π_f g) -> Z, over X
    Components pulled_back_to_x;
};

/// Right adjoint to pullback along f : X -> Y applied to g : Z -> X, computed
/// as a right Kan extension along el(f) : el(X) -> el(Y).
DependentProduct dependent_product(const Presheaf& x, const Presheaf& y, const Components& f, const Presheaf& z,
                                   const Components& g, Budget& budget);
DependentProduct dependent_product(const Presheaf& x, const Presheaf& y, const Components& f, const Presheaf& z,
                                   const Components& g);

/// Every presheaf on `base` with all carriers of size <= `carrier_bound`,
/// one per isomorphism class, optionally followed by the representables not
/// already present. Ordered by total size, then canonical encoding.
std::vector<Presheaf> presheaf_corpus(CategoryPtr base, int carrier_bound, bool with_representables = true);

/// Lexicographically least encoding over all carrier relabelings, when the
/// number of relabelings is at most `max_perms`; otherwise the plain encoding.
std::vector<int> canonical_encoding(const Presheaf& p, std::size_t max_perms = 100000);

}  // namespace finitopos
