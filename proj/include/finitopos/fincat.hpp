#pragma once

// Finite categories given by total composition tables, together with
// functors, natural transformations, reflections, and the derived
// categories (opposite, slice, comma) the presheaf machinery is built on.
//
// Composition is written g∘f (apply f first). Objects and morphisms are
// identified by strings; a validated category stores both in lexicographic
// order of their identifiers, and every index used below refers to that order.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finitopos/common.hpp"
#include "finitopos/verdict.hpp"

namespace finitopos {

/// Unvalidated category data as read from a file or built by hand.
struct CategoryData {
    struct Arrow {
        std::string name, dom, cod;
    };
    struct Composite {
        std::string g, f, result;  // g∘f = result
    };
    std::vector<std::string> objects;
    std::vector<Arrow> morphisms;  // identities may be listed or left implicit
    std::map<std::string, std::string> identities;  // object -> morphism name
    std::vector<Composite> composites;
};

enum class ViolationKind {
    MissingComposite,
    BrokenIdentity,
    BrokenAssociativity,
    DanglingReference,
    Malformed,
    BrokenFunctoriality,
    BrokenNaturality,
};

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::string message;
    std::vector<std::string> data;  // the offending identifiers
};

template <class T>
struct Validated {
    std::optional<T> value;
    std::vector<Violation> violations;
    bool ok() const noexcept { return value.has_value(); }
};

struct MorphismInfo {
    std::string name;
    int dom = -1;
    int cod = -1;
};

class FinCategory {
public:
    int num_objects() const noexcept { return static_cast<int>(objects_.size()); }
    int num_morphisms() const noexcept { return static_cast<int>(morphisms_.size()); }

    const std::vector<std::string>& objects() const noexcept { return objects_; }
    const std::vector<MorphismInfo>& morphisms() const noexcept { return morphisms_; }
    const std::string& object_name(int o) const { return objects_.at(o); }
    const MorphismInfo& morphism(int m) const { return morphisms_.at(m); }
    const std::string& morphism_name(int m) const { return morphisms_.at(m).name; }
    int dom(int m) const { return morphisms_[m].dom; }
    int cod(int m) const { return morphisms_[m].cod; }
    int identity(int o) const { return identity_[o]; }
    bool is_identity(int m) const { return identity_[morphisms_[m].dom] == m; }

    /// g∘f, or -1 when cod(f) != dom(g).
    int compose(int g, int f) const { return compose_[static_cast<std::size_t>(g) * morphisms_.size() + f]; }
    /// Morphisms a -> b in canonical order.
    const std::vector<int>& hom(int a, int b) const { return hom_[static_cast<std::size_t>(a) * objects_.size() + b]; }

    std::optional<int> find_object(std::string_view name) const;
    std::optional<int> find_morphism(std::string_view name) const;
    int object_index(std::string_view name) const;  // throws InvalidData
    int morphism_index(std::string_view name) const;

    /// True when every hom-set has at most one element.
    bool is_preorder() const;

    CategoryData to_data() const;

    bool operator==(const FinCategory& other) const;

    /// Builds a category from index-level tables. Names are sorted and the
    /// tables permuted accordingly. Checks totality, identity laws, and, when
    /// `check_associativity` is set, associativity.
    static Validated<FinCategory> from_tables(std::vector<std::string> objects, std::vector<MorphismInfo> morphisms,
                                              std::vector<int> identities, std::vector<int> compose,
                                              bool check_associativity = true);

private:
    friend Validated<FinCategory> validate_category(const CategoryData& data);
    FinCategory() = default;
    void index();

    std::vector<std::string> objects_;
    std::vector<MorphismInfo> morphisms_;
    std::vector<int> identity_;
    std::vector<int> compose_;
    std::vector<std::vector<int>> hom_;
    std::map<std::string, int, std::less<>> object_lookup_;
    std::map<std::string, int, std::less<>> morphism_lookup_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

/// Checks totality, identity laws and associativity exhaustively; reports
/// every violation found rather than stopping at the first.
Validated<FinCategory> validate_category(const CategoryData& data);

/// validate_category, throwing InvalidData with the first violations on failure.
CategoryPtr make_category(const CategoryData& data);
CategoryPtr share(FinCategory c);

// --- presentations -----------------------------------------------------------

/// A word in the generators, written in composition order: {"s", "d0"} is s∘d0.
/// The empty word denotes id(`identity_on`).
struct Word {
    std::vector<std::string> letters;
    std::string identity_on;
};

struct Presentation {
    std::vector<std::string> objects;
    std::vector<CategoryData::Arrow> generators;
    std::vector<std::pair<Word, Word>> relations;
};

/// Closes generators under composition modulo the relations by coset
/// enumeration of each hom(X, -). Morphisms are named by their shortest word
/// (joined with '.'), identities as "id(X)". Throws InvalidData if more than
/// `max_morphisms` live cosets are ever needed.
CategoryData saturate(const Presentation& p, int max_morphisms = 512);

// --- derived categories -----------------------------------------------------

CategoryPtr terminal_category(const std::string& object = "pt");
CategoryPtr opposite(const FinCategory& c);

/// Poset category on `elements` with a morphism x->y iff leq(x, y). The
/// morphism x->y is named "x<y" and identities "id(x)".
CategoryPtr poset_category(const std::vector<std::string>& elements,
                           const std::vector<std::pair<std::string, std::string>>& order);

struct FinFunctor;

/// The slice C/c with objects (x, f: x -> c).
CategoryPtr slice(const FinCategory& c, int object);

/// The comma category (a ↓ L): objects (b, φ: a -> L b), morphisms
/// β: (b, φ) -> (b', Lβ∘φ). `origin` receives the b-component of each object
/// and `arrow` the φ-component; `mor_origin` the β of each morphism.
struct CommaCategory {
    CategoryPtr category;
    std::vector<int> origin;
    std::vector<int> arrow;
    std::vector<int> mor_origin;
};
CommaCategory comma_under(int a, const FinFunctor& l);

// --- functors, transformations, reflections --------------------------------

struct FinFunctor {
    CategoryPtr source;
    CategoryPtr target;
    std::vector<int> obj_map;
    std::vector<int> mor_map;

    int obj(int o) const { return obj_map[o]; }
    int mor(int m) const { return mor_map[m]; }
};

std::vector<Violation> validate_functor(const FinFunctor& f);
FinFunctor identity_functor(CategoryPtr c);
/// g∘f; throws ShapeMismatch unless f.target == g.source.
FinFunctor compose(const FinFunctor& g, const FinFunctor& f);
/// The unique functor to the terminal category.
FinFunctor to_terminal(CategoryPtr c);
bool is_full_and_faithful(const FinFunctor& f);

/// Finds an isomorphism of categories by backtracking over object bijections
/// that respect hom-set size profiles, then over hom-set bijections.
std::optional<FinFunctor> find_isomorphism(CategoryPtr c, CategoryPtr d);

struct FinNatTrans {
    FinFunctor source;
    FinFunctor target;
    std::vector<int> components;  // object of source category -> morphism of target category
};

std::vector<Violation> validate_nat_trans(const FinNatTrans& t);

/// L ⊣ F with F full and faithful: L : B -> A, F : A -> B, unit : Id_B ⇒ F∘L.
struct Reflection {
    FinFunctor left;
    FinFunctor right;
    std::vector<int> unit;

    const CategoryPtr& big() const { return left.source; }    // B
    const CategoryPtr& small() const { return left.target; }  // A
};

Reflection identity_reflection(CategoryPtr c);

/// Exhaustive check of the unit's universal property: for every b and every
/// u : b -> F a there is exactly one v : L b -> a with F(v)∘unit_b = u. Also
/// checks F full and faithful. Throws ShapeMismatch when L and F do not compose.
Verdict check_adjunction(const Reflection& r);

/// For a reflection passing check_adjunction: the counit L F a -> a, obtained
/// as the factorization of id_{F a} through the unit. Returns -1 entries if absent.
std::vector<int> reflection_counit(const Reflection& r);

/// The factorization v : L b -> a of u : b -> F a through the unit, if unique.
std::optional<int> transpose(const Reflection& r, int b, int a, int u);

}  // namespace finitopos
