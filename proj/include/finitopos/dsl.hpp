#pragma once

// Text format for categories, functors, presheaves, presheaf maps and
// reflections.
//
//   # line comment
//   category C { objects: a, b; morphisms: f: a -> b; compose: g.f = h; }
//   category D { objects: V, E; morphisms: d0: V -> E; s: E -> V;
//                relations: s.d0 = id(V); close: 16; }
//   functor L : B -> A { objects: x -> y; morphisms: f -> g; }
//   presheaf X on C { at a: x0, x1; act f: y0 -> x0, y1 -> x1; }
//   map t : X -> Y { at a: x0 -> y0, x1 -> y0; }
//   reflection R { left: L; right: F; unit: b -> u; }
//
// `g.f` is g∘f: f is applied first. Identities are written id(X) and may be
// left implicit. Names are identifiers, numbers, or double-quoted strings.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "finitopos/presheaf.hpp"

namespace finitopos {

struct Span {
    int line = 1;
    int column = 1;
    int end_line = 1;
    int end_column = 1;
};

enum class DiagnosticKind { SyntaxError, UnresolvedIdentifier, DuplicateDefinition, InvalidDefinition };
std::string to_string(DiagnosticKind k);

struct Diagnostic {
    DiagnosticKind kind;
    Span span;
    std::string message;

    std::string format() const;  // "line:col: kind: message"
};

struct NamedMap {
    std::string source;
    std::string target;
    Components components;
};

/// A fully elaborated specification: every declaration validated and every
/// reference resolved.
struct Document {
    enum class Kind { Category, Functor, Presheaf, Map, Reflection };
    struct Entry {
        Kind kind;
        std::string name;
        Span span;
    };
    std::vector<Entry> order;
    std::map<std::string, CategoryPtr> categories;
    std::map<std::string, FinFunctor> functors;
    std::map<std::string, std::pair<std::string, std::string>> functor_ends;  // name -> (source, target)
    std::map<std::string, Presheaf> presheaves;
    std::map<std::string, std::string> presheaf_base;
    std::map<std::string, NamedMap> maps;
    std::map<std::string, Reflection> reflections;
    std::map<std::string, std::pair<std::string, std::string>> reflection_parts;  // name -> (left, right)

    std::string category_name(const CategoryPtr& c) const;  // "" if not declared
};

struct ParseResult {
    std::optional<Document> document;
    std::vector<Diagnostic> diagnostics;
    bool ok() const noexcept { return document.has_value(); }
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<Diagnostic> d);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Never throws on malformed input; all problems come back as diagnostics.
ParseResult parse(std::string_view text);
/// parse, throwing ParseError on any diagnostic.
Document read_document(std::string_view text);

/// Canonical text: serialize(parse(serialize(d))) == serialize(d).
std::string serialize(const Document& d);

/// A name as it must be written: bare if it is an identifier or a number,
/// quoted otherwise.
std::string quote_name(const std::string& name);

std::string write_category(const std::string& name, const FinCategory& c);
std::string write_functor(const std::string& name, const std::string& source, const std::string& target,
                          const FinFunctor& f);
std::string write_presheaf(const std::string& name, const std::string& base, const Presheaf& p);
std::string write_map(const std::string& name, const std::string& source, const std::string& target,
                      const Presheaf& x, const Presheaf& y, const Components& t);
/// Categories B and A, functors L and F, and reflection R.
std::string write_reflection(const Reflection& r);
/// The reflection R of a document written by write_reflection.
Reflection read_reflection(std::string_view text);

}  // namespace finitopos
