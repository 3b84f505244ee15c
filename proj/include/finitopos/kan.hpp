#pragma once

// Restriction and the two Kan extensions along a functor L : B -> A between
// finite categories, L! ⊣ L* ⊣ L_*, with units and counits built from the
// colimit/limit structure maps.

#include <stdexcept>
#include <vector>

#include "finitopos/presheaf.hpp"

namespace finitopos {

/// θ could not be determined from its restriction (broken reflection).
class NonUnique : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KanResult {
    FinFunctor functor;
    Presheaf input;   // on B
    Presheaf output;  // on A

    // Left Kan extension: the comma category (a ↓ L) per a, injection of
    // X(b) for each comma object, and a representative (comma object, x)
    // for each output element.
    std::vector<CommaCategory> commas;
    std::vector<std::vector<FinFn>> injections;
    std::vector<std::vector<std::pair<int, int>>> representative;

    // Right Kan extension: el(L* y_a) per a, and each output element as a
    // compatible family indexed by the objects (b, ψ : L b -> a).
    std::vector<Elements> elements;
    std::vector<std::vector<std::vector<int>>> families;

    int find_family(int a, const std::vector<int>& t) const;  // -1 if absent
};

/// (L*Y)(b) = Y(L b), acting by Y(L f).
Presheaf restrict(const FinFunctor& l, const Presheaf& y);
Components restrict_map(const FinFunctor& l, const Components& t);

/// (L!X)(a) = colim over (a ↓ L)^op of X(b), a quotient of Σ_b X(b) × hom(a, L b).
KanResult lan(const FinFunctor& l, const Presheaf& x);
/// (L_*X)(a) = lim over el(L* y_a)^op of X(b) = Nat(L* y_a, X).
KanResult ran(const FinFunctor& l, const Presheaf& x, Budget& budget);
KanResult ran(const FinFunctor& l, const Presheaf& x);

/// L!(t) and L_*(t) for t : X -> X' given both extensions.
Components lan_map(const KanResult& lx, const KanResult& lx2, const Components& t);
Components ran_map(const KanResult& rx, const KanResult& rx2, const Components& t);

/// X -> L* L! X, x ↦ [(b, id), x].
Components lan_unit(const KanResult& lx);
/// L! L* Y -> Y, [(b, φ), y] ↦ Y(φ) y. `ly` is lan(L, restrict(L, Y)).
Components lan_counit(const KanResult& ly, const Presheaf& y);
/// Y -> L_* L* Y, y ↦ (ψ ↦ Y(ψ) y). `ry` is ran(L, restrict(L, Y)).
Components ran_unit(const KanResult& ry, const Presheaf& y);
/// L* L_* X -> X, a family evaluated at (b, id).
Components ran_counit(const KanResult& rx);

struct ThetaResult {
    Presheaf source;  // L_* X
    Presheaf target;  // L! X
    Components map;
    Verdict epi;
};

/// The map θ : L_* X -> L! X whose restriction along L is
/// unit_X ∘ counit_X : L* L_* X -> X -> L* L! X. Throws NonUnique when the
/// restriction does not determine it.
ThetaResult theta(const Reflection& r, const Presheaf& x);

struct EssentialLocalOptions {
    int carrier_bound = 2;
    std::uint64_t budget = default_budget();
};

/// Over the presheaf corpora on B and A: the hom-bijections for L! ⊣ L* and
/// L* ⊣ L_* realized by transposition, fullness and faithfulness of L*, and
/// L* ≅ F!.
Verdict verify_essential_local(const Reflection& r, const EssentialLocalOptions& opts = {});

}  // namespace finitopos
