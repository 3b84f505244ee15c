#pragma once

// Checkers for the adjunction properties of a reflection L ⊣ F : A -> B
// between finite categories, and for local connectedness of the induced
// presheaf geometric morphism. Limits in a finite category are found by
// searching for cones with the universal property.

#include <optional>
#include <string>
#include <vector>

#include "finitopos/kan.hpp"
#include "finitopos/verdict.hpp"

namespace finitopos {

/// A cone apex -> x, apex -> y; for a pullback of f : x -> z, g : y -> z the
/// two legs make the square commute.
struct Cone {
    int apex = -1;
    int left = -1;
    int right = -1;
};

enum class Mediators { None, Unique, Many };
std::string to_string(Mediators m);
Mediators mediators_from_string(const std::string& s);

/// Outcome of testing a commuting square for the pullback property: the
/// first competing cone (in canonical order) without a unique mediator.
struct MediatorAnalysis {
    Mediators kind = Mediators::Unique;
    std::optional<Cone> cone;
    int count = 1;
};

/// Cones over the cospan f, g (or over the pair x, y when f = g = -1).
MediatorAnalysis analyze_cone(const FinCategory& c, const Cone& candidate, int x, int y, int f, int g);

std::optional<Cone> find_product(const FinCategory& c, int x, int y);
std::optional<Cone> find_pullback(const FinCategory& c, int f, int g);
std::optional<int> find_terminal(const FinCategory& c);
bool is_isomorphism(const FinCategory& c, int m);

struct ExponentialCone {
    int object = -1;  // c^b
    Cone product;     // (c^b) × b
    int eval = -1;    // (c^b) × b -> c
};

/// The exponential c^b, when every product with b exists; `missing_product`
/// is set when some product w × b does not.
std::optional<ExponentialCone> find_exponential(const FinCategory& c, int b, int target, bool* missing_product = nullptr);

/// A commuting square together with its image under L and the analysis of
/// that image as a would-be pullback.
struct WitnessSquare {
    std::string level;     // "category" or "presheaf"
    json data;             // names of the objects and morphisms of both squares
    std::string leg;       // which cospan legs are F-images: "right" or "none"
    Mediators mediators = Mediators::Unique;
    json cone;             // competing cone in the image, if any
};

json to_json(const WitnessSquare& w);
WitnessSquare witness_square_from_json(const json& j);

/// Tests whether L sends the chosen pullback of the cospan (f, g) in B to a
/// pullback in A; returns the witness when it does not. `leg` and `property`
/// are recorded in the witness. Throws InvalidData when B lacks the pullback.
std::optional<WitnessSquare> test_pullback_square(const Reflection& r, int f, int g, const std::string& leg,
                                                  const std::string& property);

/// Frobenius reciprocity at (I, A): the canonical L(F I × A) -> I × L A is an
/// isomorphism. Throws ShapeMismatch when the reflection fails check_adjunction.
Verdict check_frobenius(const Reflection& r, int i, int a);
Verdict check_frobenius(const Reflection& r);

/// L preserves pullbacks of cospans x -> F a <- F a' whose right leg is F u.
Verdict check_semi_left_exact(const Reflection& r);
/// L preserves pullbacks of all cospans over objects F a.
Verdict check_stable_units(const Reflection& r);

struct ExponentialIdealResult {
    Verdict products;      // L(x × y) ≅ L x × L y
    Verdict exponentials;  // (F a)^b is an F-image
    Verdict combined() const;
};
ExponentialIdealResult check_exponential_ideal(const Reflection& r);

struct LocallyConnectedOptions {
    int carrier_bound = 2;
    std::size_t max_squares = 20000;
    std::size_t max_pi_checks = 200;
    std::uint64_t budget = default_budget();
};

/// Over the presheaf corpora on B and A: L! X ×_{L* Y} L* Y' ≅ L! X ×_Y Y' for
/// cospans X -> L* Y <- L* Y' along restricted maps, plus spot checks that
/// restriction along L commutes with dependent products.
Verdict check_locally_connected(const FinFunctor& l, const LocallyConnectedOptions& opts = {});

/// Every pullback functor between slices of `c` has a right adjoint, found by
/// universal-arrow search. INCONCLUSIVE unless `c` has a terminal object and
/// all pullbacks.
Verdict check_lcc(const FinCategory& c);

/// Replays a witness produced by any of the checkers above from its stored
/// data alone, without reusing the search code. Returns the re-derived verdict.
Verdict replay_category_square(const json& witness);
Verdict replay_lcc(const json& witness);

}  // namespace finitopos
