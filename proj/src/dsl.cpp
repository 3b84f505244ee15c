#include "finitopos/dsl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace finitopos {

std::string to_string(DiagnosticKind k) {
    switch (k) {
        case DiagnosticKind::SyntaxError: return "syntax-error";
        case DiagnosticKind::UnresolvedIdentifier: return "unresolved-identifier";
        case DiagnosticKind::DuplicateDefinition: return "duplicate-definition";
        case DiagnosticKind::InvalidDefinition: return "invalid-definition";
    }
    return "?";
}

std::string Diagnostic::format() const {
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + to_string(kind) + ": " + message;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& d) {
    std::string s;
    for (const auto& x : d) s += (s.empty() ? "" : "\n") + x.format();
    return s;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> d)
    : std::runtime_error(join_diagnostics(d)), diagnostics_(std::move(d)) {}

std::string Document::category_name(const CategoryPtr& c) const {
    for (const auto& [name, ptr] : categories)
        if (ptr == c) return name;
    return "";
}

namespace {

const std::set<std::string, std::less<>> kReserved = {
    "category", "functor", "presheaf", "map", "reflection", "on", "objects", "morphisms", "identities",
    "compose", "relations", "close", "at", "act", "left", "right", "unit", "id"};

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool ident_char(char c) { return ident_start(c) || digit(c); }

// --- lexer -------------------------------------------------------------------------------

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;
};

std::vector<Token> lex(std::string_view s, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance();
            continue;
        }
        Token t;
        t.span = {line, col, line, col};
        if (ident_start(c) || digit(c)) {
            bool number = digit(c);
            auto ok = number ? digit : ident_char;
            while (i < s.size() && ok(s[i])) {
                t.text += s[i];
                advance();
            }
            t.kind = number ? Tok::Number : Tok::Ident;
        } else if (c == '"') {
            advance();
            bool closed = false, bad = false;
            while (i < s.size()) {
                char d = s[i];
                if (d == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (d == '\\') {
                    advance();
                    if (i >= s.size()) break;
                    char e = s[i];
                    if (e == '"' || e == '\\') t.text += e;
                    else if (e == 'n') t.text += '\n';
                    else bad = true;
                    advance();
                    continue;
                }
                t.text += d;
                advance();
            }
            t.kind = Tok::String;
            if (!closed || bad) {
                t.span.end_line = line;
                t.span.end_column = col;
                diags.push_back({DiagnosticKind::SyntaxError, t.span,
                                 closed ? "unknown escape in string" : "unterminated string"});
                continue;
            }
        } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            advance();
            advance();
            t.kind = Tok::Punct;
            t.text = "->";
        } else if (std::string_view("{}:;,.=()").find(c) != std::string_view::npos) {
            advance();
            t.kind = Tok::Punct;
            t.text = std::string(1, c);
        } else {
            Span sp{line, col, line, col + 1};
            advance();
            diags.push_back({DiagnosticKind::SyntaxError, sp, "unexpected character"});
            continue;
        }
        t.span.end_line = line;
        t.span.end_column = col;
        out.push_back(std::move(t));
    }
    Token end;
    end.span = {line, col, line, col};
    out.push_back(end);
    return out;
}

bool is_name(const Token& t) { return t.kind == Tok::Ident || t.kind == Tok::Number || t.kind == Tok::String; }
bool is_punct(const Token& t, std::string_view p) { return t.kind == Tok::Punct && t.text == p; }
bool is_word(const Token& t, std::string_view w) { return t.kind == Tok::Ident && t.text == w; }

Span cover(const Span& a, const Span& b) { return {a.line, a.column, b.end_line, b.end_column}; }

// --- block structure ---------------------------------------------------------------------

/// A morphism or object reference: a name, or id(name).
struct Ref {
    std::string name;
    bool identity = false;
    Span span;
};

struct Item {
    std::vector<Token> toks;
    Span span;
};

struct Field {
    Token key;
    std::optional<Ref> arg;
    std::vector<Item> items;
};

enum class BlockKind { Category, Functor, Presheaf, Map, Reflection };

struct Block {
    BlockKind kind;
    Token name;
    std::vector<Token> header;  // referenced names in the header
    std::vector<Field> fields;
};

struct SyntaxFail {};

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : toks_(std::move(toks)), diags_(diags) {}

    bool done() const { return peek().kind == Tok::End; }

    std::optional<Block> block() {
        std::size_t start = pos_;
        try {
            return parse_block();
        } catch (const SyntaxFail&) {
            recover(start);
            return std::nullopt;
        }
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token take() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Span& s, const std::string& msg) {
        diags_.push_back({DiagnosticKind::SyntaxError, s, msg});
        throw SyntaxFail{};
    }
    Token expect_name(const char* what) {
        if (!is_name(peek())) fail(peek().span, std::string("expected ") + what);
        return take();
    }
    void expect(std::string_view p) {
        if (!is_punct(peek(), p)) fail(peek().span, "expected '" + std::string(p) + "'");
        take();
    }

    // Skip past the block that failed: to the '}' closing it, or to the next
    // declaration keyword when no brace was opened.
    void recover(std::size_t start) {
        std::size_t failed_at = pos_;
        pos_ = start;
        int depth = 0;
        bool opened = false;
        while (!done()) {
            const Token& t = peek();
            if (is_punct(t, "{")) {
                ++depth;
                opened = true;
            } else if (is_punct(t, "}")) {
                --depth;
                if (opened && depth <= 0) {
                    take();
                    break;
                }
            } else if (!opened && pos_ > start && is_declaration(t)) {
                break;
            }
            take();
        }
        if (pos_ <= failed_at && pos_ == start) take();
    }

    static bool is_declaration(const Token& t) {
        return is_word(t, "category") || is_word(t, "functor") || is_word(t, "presheaf") || is_word(t, "map") ||
               is_word(t, "reflection");
    }

    bool field_start(BlockKind k) const {
        const Token& t = peek();
        if (t.kind != Tok::Ident) return false;
        auto keyed = [&](std::initializer_list<const char*> keys) {
            for (const char* key : keys)
                if (t.text == key) return is_punct(peek(1), ":");
            return false;
        };
        auto with_arg = [&](std::initializer_list<const char*> keys) {
            for (const char* key : keys)
                if (t.text == key) {
                    if (is_word(peek(1), "id") && is_punct(peek(2), "(")) return true;
                    return is_name(peek(1)) && is_punct(peek(2), ":");
                }
            return false;
        };
        switch (k) {
            case BlockKind::Category:
                return keyed({"objects", "morphisms", "identities", "compose", "relations", "close"});
            case BlockKind::Functor: return keyed({"objects", "morphisms"});
            case BlockKind::Presheaf: return with_arg({"at", "act"});
            case BlockKind::Map: return with_arg({"at"});
            case BlockKind::Reflection: return keyed({"left", "right", "unit"});
        }
        return false;
    }

    Ref ref() {
        if (is_word(peek(), "id") && is_punct(peek(1), "(")) {
            Token id = take();
            take();
            Token n = expect_name("an object name");
            Token close = peek();
            expect(")");
            return {n.text, true, cover(id.span, close.span)};
        }
        Token n = expect_name("a name");
        return {n.text, false, n.span};
    }

    Block parse_block() {
        Block b;
        Token kw = peek();
        if (is_word(kw, "category")) b.kind = BlockKind::Category;
        else if (is_word(kw, "functor")) b.kind = BlockKind::Functor;
        else if (is_word(kw, "presheaf")) b.kind = BlockKind::Presheaf;
        else if (is_word(kw, "map")) b.kind = BlockKind::Map;
        else if (is_word(kw, "reflection")) b.kind = BlockKind::Reflection;
        else fail(kw.span, "expected a declaration");
        take();
        b.name = expect_name("a declaration name");
        if (b.kind == BlockKind::Functor || b.kind == BlockKind::Map) {
            expect(":");
            b.header.push_back(expect_name("a source name"));
            expect("->");
            b.header.push_back(expect_name("a target name"));
        } else if (b.kind == BlockKind::Presheaf) {
            if (!is_word(peek(), "on")) fail(peek().span, "expected 'on'");
            take();
            b.header.push_back(expect_name("a category name"));
        }
        expect("{");
        while (!is_punct(peek(), "}")) {
            if (done()) fail(peek().span, "unterminated block");
            if (!field_start(b.kind)) fail(peek().span, "expected a field");
            Field f;
            f.key = take();
            if (f.key.text == "at" || f.key.text == "act") f.arg = ref();
            expect(":");
            while (true) {
                const Token& t = peek();
                if (is_punct(t, "}") || t.kind == Tok::End) break;
                if (is_punct(t, ";")) {
                    take();
                    if (is_punct(peek(), "}") || field_start(b.kind)) break;
                    continue;
                }
                if (is_punct(t, ",")) {
                    take();
                    continue;
                }
                Item item;
                while (!(is_punct(peek(), ",") || is_punct(peek(), ";") || is_punct(peek(), "}") || is_punct(peek(), "{") ||
                         done()))
                    item.toks.push_back(take());
                if (item.toks.empty()) fail(peek().span, "unexpected '{'");
                item.span = cover(item.toks.front().span, item.toks.back().span);
                f.items.push_back(std::move(item));
            }
            b.fields.push_back(std::move(f));
        }
        expect("}");
        return b;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;
};

// --- item shapes -------------------------------------------------------------------------

struct ShapeError {
    Span span;
    std::string message;
};

class ItemReader {
public:
    explicit ItemReader(const Item& item) : item_(item) {}

    bool at_end() const { return pos_ >= item_.toks.size(); }
    const Token* peek(std::size_t k = 0) const {
        return pos_ + k < item_.toks.size() ? &item_.toks[pos_ + k] : nullptr;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ShapeError{at_end() ? item_.span : item_.toks[pos_].span, msg};
    }
    Token name() {
        if (at_end() || !is_name(*peek())) fail("expected a name");
        return item_.toks[pos_++];
    }
    void punct(std::string_view p) {
        if (at_end() || !is_punct(*peek(), p)) fail("expected '" + std::string(p) + "'");
        ++pos_;
    }
    Ref ref() {
        if (peek() && is_word(*peek(), "id") && peek(1) && is_punct(*peek(1), "(")) {
            Span start = peek()->span;
            pos_ += 2;
            Token n = name();
            Span end = peek() ? peek()->span : n.span;
            punct(")");
            return {n.text, true, cover(start, end)};
        }
        Token n = name();
        return {n.text, false, n.span};
    }
    std::vector<Ref> word() {
        std::vector<Ref> w{ref()};
        while (peek() && is_punct(*peek(), ".")) {
            ++pos_;
            w.push_back(ref());
        }
        return w;
    }
    void finish() const {
        if (!at_end()) fail("unexpected token");
    }

private:
    const Item& item_;
    std::size_t pos_ = 0;
};

Token single_name(const Item& item) {
    ItemReader r(item);
    Token t = r.name();
    r.finish();
    return t;
}

std::pair<Ref, Ref> arrow(const Item& item) {
    ItemReader r(item);
    Ref a = r.ref();
    r.punct("->");
    Ref b = r.ref();
    r.finish();
    return {a, b};
}

Ref plain(const Ref& r) {
    if (r.identity) throw ShapeError{r.span, "expected a name, not an identity"};
    return r;
}

struct Typed {
    Token name, dom, cod;
};

Typed typed(const Item& item) {
    ItemReader r(item);
    Typed t;
    t.name = r.name();
    r.punct(":");
    t.dom = r.name();
    r.punct("->");
    t.cod = r.name();
    r.finish();
    return t;
}

struct Equation {
    std::vector<Ref> lhs, rhs;
    Span span;
};

Equation equation(const Item& item) {
    ItemReader r(item);
    Equation e;
    e.lhs = r.word();
    r.punct("=");
    e.rhs = r.word();
    r.finish();
    e.span = item.span;
    return e;
}

std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size() && i < 3; ++i) s += (i ? "; " : "") + vs[i].message;
    if (vs.size() > 3) s += "; and " + std::to_string(vs.size() - 3) + " more";
    return s;
}

// --- elaboration -------------------------------------------------------------------------

class Elaborator {
public:
    explicit Elaborator(std::vector<Diagnostic>& diags) : diags_(diags) {}

    void run(const Block& b) {
        std::size_t before = diags_.size();
        if (names_.count(b.name.text)) {
            report(DiagnosticKind::DuplicateDefinition, b.name.span, "'" + b.name.text + "' is already defined");
            return;
        }
        try {
            switch (b.kind) {
                case BlockKind::Category: category(b); break;
                case BlockKind::Functor: functor(b); break;
                case BlockKind::Presheaf: presheaf(b); break;
                case BlockKind::Map: map(b); break;
                case BlockKind::Reflection: reflection(b); break;
            }
        } catch (const ShapeError& e) {
            report(DiagnosticKind::SyntaxError, e.span, e.message);
        } catch (const Abort&) {
        } catch (const std::exception& e) {
            report(DiagnosticKind::InvalidDefinition, b.name.span, e.what());
        }
        if (diags_.size() != before) return;
        names_.insert(b.name.text);
        static const Document::Kind kinds[] = {Document::Kind::Category, Document::Kind::Functor,
                                               Document::Kind::Presheaf, Document::Kind::Map,
                                               Document::Kind::Reflection};
        doc.order.push_back({kinds[static_cast<int>(b.kind)], b.name.text, b.name.span});
    }

    Document doc;

private:
    struct Abort {};

    void report(DiagnosticKind k, const Span& s, std::string msg) { diags_.push_back({k, s, std::move(msg)}); }
    [[noreturn]] void abort(DiagnosticKind k, const Span& s, std::string msg) {
        report(k, s, std::move(msg));
        throw Abort{};
    }
    void unresolved(const Span& s, const std::string& what, const std::string& name) {
        report(DiagnosticKind::UnresolvedIdentifier, s, "unknown " + what + " '" + name + "'");
    }
    void checkpoint(std::size_t before) {
        if (diags_.size() != before) throw Abort{};
    }

    template <class M>
    const typename M::mapped_type& lookup(const M& m, const Token& t, const char* what) {
        auto it = m.find(t.text);
        if (it == m.end()) abort(DiagnosticKind::UnresolvedIdentifier, t.span, std::string("unknown ") + what + " '" + t.text + "'");
        return it->second;
    }

    int object_in(const FinCategory& c, const Ref& r) {
        if (r.identity) throw ShapeError{r.span, "expected an object name"};
        auto o = c.find_object(r.name);
        if (!o) {
            unresolved(r.span, "object", r.name);
            return -1;
        }
        return *o;
    }
    int morphism_in(const FinCategory& c, const Ref& r) {
        if (r.identity) {
            auto o = c.find_object(r.name);
            if (!o) {
                unresolved(r.span, "object", r.name);
                return -1;
            }
            return c.identity(*o);
        }
        auto m = c.find_morphism(r.name);
        if (!m) {
            unresolved(r.span, "morphism", r.name);
            return -1;
        }
        return *m;
    }

    void category(const Block& b) {
        std::size_t before = diags_.size();
        CategoryData data;
        std::set<std::string> objects, morphisms;
        std::vector<Typed> arrows;
        std::vector<std::pair<Ref, Ref>> identity_decls;
        std::vector<Equation> composites, relations;
        std::optional<int> close;
        Span close_span;
        for (const auto& f : b.fields) {
            const auto& key = f.key.text;
            for (const auto& item : f.items) {
                if (key == "objects") {
                    Token t = single_name(item);
                    if (!objects.insert(t.text).second)
                        report(DiagnosticKind::DuplicateDefinition, t.span, "object '" + t.text + "' declared twice");
                    else
                        data.objects.push_back(t.text);
                } else if (key == "morphisms") {
                    auto t = typed(item);
                    if (!morphisms.insert(t.name.text).second)
                        report(DiagnosticKind::DuplicateDefinition, t.name.span, "morphism '" + t.name.text + "' declared twice");
                    else
                        arrows.push_back(t);
                } else if (key == "identities") {
                    auto e = equation(item);
                    if (e.lhs.size() != 1 || e.rhs.size() != 1) throw ShapeError{item.span, "expected object = morphism"};
                    identity_decls.emplace_back(plain(e.lhs[0]), plain(e.rhs[0]));
                } else if (key == "compose") {
                    composites.push_back(equation(item));
                } else if (key == "relations") {
                    relations.push_back(equation(item));
                } else if (key == "close") {
                    Token t = single_name(item);
                    if (t.kind != Tok::Number || t.text.size() > 6) throw ShapeError{t.span, "expected a bound below 10^6"};
                    if (close) report(DiagnosticKind::DuplicateDefinition, t.span, "close given twice");
                    close = std::stoi(t.text);
                    close_span = t.span;
                }
            }
        }
        for (const auto& t : arrows) {
            for (const Token* end : {&t.dom, &t.cod})
                if (!objects.count(end->text)) unresolved(end->span, "object", end->text);
            data.morphisms.push_back({t.name.text, t.dom.text, t.cod.text});
        }
        for (const auto& [o, m] : identity_decls) {
            if (!objects.count(o.name)) unresolved(o.span, "object", o.name);
            if (!morphisms.count(m.name)) unresolved(m.span, "morphism", m.name);
            if (!data.identities.emplace(o.name, m.name).second)
                report(DiagnosticKind::DuplicateDefinition, o.span, "identity of '" + o.name + "' declared twice");
        }
        auto identity_name = [&](const std::string& o) {
            auto it = data.identities.find(o);
            return it == data.identities.end() ? "id(" + o + ")" : it->second;
        };
        std::map<std::string, std::string> identity_of;  // identity name -> object
        for (const auto& o : data.objects) identity_of[identity_name(o)] = o;
        auto resolve = [&](const Ref& r) -> bool {
            if (r.identity) {
                if (objects.count(r.name)) return true;
                unresolved(r.span, "object", r.name);
                return false;
            }
            if (morphisms.count(r.name) || identity_of.count(r.name)) return true;
            unresolved(r.span, "morphism", r.name);
            return false;
        };
        for (const auto* list : {&composites, &relations})
            for (const auto& e : *list) {
                for (const auto& r : e.lhs) resolve(r);
                for (const auto& r : e.rhs) resolve(r);
            }
        checkpoint(before);

        bool presented = close.has_value() || !relations.empty();
        if (!presented) {
            auto name_of = [&](const Ref& r) { return r.identity ? identity_name(r.name) : r.name; };
            for (const auto& e : composites) {
                if (e.lhs.size() != 2 || e.rhs.size() != 1)
                    abort(DiagnosticKind::InvalidDefinition, e.span, "a composite must read g.f = h");
                data.composites.push_back({name_of(e.lhs[0]), name_of(e.lhs[1]), name_of(e.rhs[0])});
            }
        } else {
            if (!identity_decls.empty())
                abort(DiagnosticKind::InvalidDefinition, identity_decls.front().first.span,
                      "identities cannot be renamed in a presented category");
            Presentation p;
            p.objects = data.objects;
            p.generators = data.morphisms;
            auto to_word = [&](const std::vector<Ref>& refs) {
                Word w;
                for (const auto& r : refs) {
                    if (r.identity) {
                        if (w.identity_on.empty()) w.identity_on = r.name;
                    } else if (identity_of.count(r.name) && !morphisms.count(r.name)) {
                        if (w.identity_on.empty()) w.identity_on = identity_of[r.name];
                    } else {
                        w.letters.push_back(r.name);
                    }
                }
                if (!w.letters.empty()) w.identity_on.clear();
                return w;
            };
            for (const auto* list : {&composites, &relations})
                for (const auto& e : *list) p.relations.emplace_back(to_word(e.lhs), to_word(e.rhs));
            try {
                data = saturate(p, close.value_or(512));
            } catch (const InvalidData& e) {
                abort(DiagnosticKind::InvalidDefinition, close ? close_span : b.name.span, e.what());
            }
        }
        auto v = validate_category(data);
        if (!v.ok()) abort(DiagnosticKind::InvalidDefinition, b.name.span, describe(v.violations));
        doc.categories[b.name.text] = share(std::move(*v.value));
    }

    void functor(const Block& b) {
        std::size_t before = diags_.size();
        const auto& src = lookup(doc.categories, b.header[0], "category");
        const auto& tgt = lookup(doc.categories, b.header[1], "category");
        FinFunctor f{src, tgt, std::vector<int>(src->num_objects(), -1), std::vector<int>(src->num_morphisms(), -1)};
        for (const auto& field : b.fields)
            for (const auto& item : field.items) {
                auto [x, y] = arrow(item);
                bool objects = field.key.text == "objects";
                int from = objects ? object_in(*src, x) : morphism_in(*src, x);
                int to = objects ? object_in(*tgt, y) : morphism_in(*tgt, y);
                if (from < 0 || to < 0) continue;
                auto& slot = objects ? f.obj_map[from] : f.mor_map[from];
                if (slot >= 0) report(DiagnosticKind::DuplicateDefinition, x.span, "'" + x.name + "' mapped twice");
                slot = to;
            }
        checkpoint(before);
        for (int o = 0; o < src->num_objects(); ++o)
            if (f.obj_map[o] < 0) abort(DiagnosticKind::InvalidDefinition, b.name.span, "object '" + src->object_name(o) + "' is not mapped");
        for (int o = 0; o < src->num_objects(); ++o)
            if (f.mor_map[src->identity(o)] < 0) f.mor_map[src->identity(o)] = tgt->identity(f.obj_map[o]);
        // unlisted composites follow from their factors
        for (bool grew = true; grew;) {
            grew = false;
            for (int g = 0; g < src->num_morphisms(); ++g)
                for (int h = 0; h < src->num_morphisms(); ++h) {
                    int gh = src->compose(g, h);
                    if (gh < 0 || f.mor_map[gh] >= 0 || f.mor_map[g] < 0 || f.mor_map[h] < 0) continue;
                    int image = tgt->compose(f.mor_map[g], f.mor_map[h]);
                    if (image < 0) continue;
                    f.mor_map[gh] = image;
                    grew = true;
                }
        }
        for (int m = 0; m < src->num_morphisms(); ++m) {
            if (f.mor_map[m] >= 0) continue;
            if (!src->is_identity(m))
                abort(DiagnosticKind::InvalidDefinition, b.name.span, "morphism '" + src->morphism_name(m) + "' is not mapped");
            f.mor_map[m] = tgt->identity(f.obj_map[src->dom(m)]);
        }
        auto vs = validate_functor(f);
        if (!vs.empty()) abort(DiagnosticKind::InvalidDefinition, b.name.span, describe(vs));
        doc.functors[b.name.text] = f;
        doc.functor_ends[b.name.text] = {b.header[0].text, b.header[1].text};
    }

    void presheaf(const Block& b) {
        std::size_t before = diags_.size();
        const auto& base = lookup(doc.categories, b.header[0], "category");
        const auto& c = *base;
        Presheaf p{base, std::vector<FinSet>(c.num_objects()), std::vector<FinFn>(c.num_morphisms())};
        std::vector<char> seen_at(c.num_objects(), 0), known(c.num_morphisms(), 0);
        for (const auto& field : b.fields) {
            if (field.key.text != "at") continue;
            int o = object_in(c, *field.arg);
            if (o < 0) continue;
            if (seen_at[o]) {
                report(DiagnosticKind::DuplicateDefinition, field.arg->span, "carrier of '" + field.arg->name + "' given twice");
                continue;
            }
            seen_at[o] = 1;
            for (const auto& item : field.items) {
                Token t = single_name(item);
                if (p.at[o].index_of(t.text) >= 0)
                    report(DiagnosticKind::DuplicateDefinition, t.span, "element '" + t.text + "' listed twice");
                else
                    p.at[o].elements.push_back(t.text);
            }
        }
        checkpoint(before);
        for (const auto& field : b.fields) {
            if (field.key.text != "act") continue;
            int m = morphism_in(c, *field.arg);
            if (m < 0) continue;
            if (known[m]) {
                report(DiagnosticKind::DuplicateDefinition, field.arg->span, "action of '" + field.arg->name + "' given twice");
                continue;
            }
            known[m] = 1;
            const auto& from = p.at[c.cod(m)];
            const auto& to = p.at[c.dom(m)];
            FinFn fn{std::vector<int>(from.size(), -1), to.size()};
            for (const auto& item : field.items) {
                auto [x, y] = arrow(item);
                int xi = from.index_of(plain(x).name), yi = to.index_of(plain(y).name);
                if (xi < 0) unresolved(x.span, "element", x.name);
                if (yi < 0) unresolved(y.span, "element", y.name);
                if (xi < 0 || yi < 0) continue;
                if (fn.map[xi] >= 0) report(DiagnosticKind::DuplicateDefinition, x.span, "'" + x.name + "' mapped twice");
                fn.map[xi] = yi;
            }
            for (int x = 0; x < from.size(); ++x)
                if (fn.map[x] < 0)
                    report(DiagnosticKind::InvalidDefinition, field.arg->span,
                           "action of '" + field.arg->name + "' leaves '" + from.elements[x] + "' unmapped");
            p.act[m] = fn;
        }
        checkpoint(before);
        for (int m = 0; m < c.num_morphisms(); ++m)
            if (!known[m] && p.at[c.cod(m)].size() == 0) {
                p.act[m] = FinFn{{}, p.at[c.dom(m)].size()};
                known[m] = 1;
            }
        try {
            complete_actions(p, known);
        } catch (const InvalidData& e) {
            abort(DiagnosticKind::InvalidDefinition, b.name.span, e.what());
        }
        auto vs = validate_presheaf(p);
        if (!vs.empty()) abort(DiagnosticKind::InvalidDefinition, b.name.span, describe(vs));
        doc.presheaves[b.name.text] = p;
        doc.presheaf_base[b.name.text] = b.header[0].text;
    }

    void map(const Block& b) {
        std::size_t before = diags_.size();
        const auto& x = lookup(doc.presheaves, b.header[0], "presheaf");
        const auto& y = lookup(doc.presheaves, b.header[1], "presheaf");
        if (x.base != y.base) abort(DiagnosticKind::InvalidDefinition, b.header[1].span, "presheaves live on different categories");
        const auto& c = *x.base;
        Components t(c.num_objects());
        for (int o = 0; o < c.num_objects(); ++o) t[o] = FinFn{std::vector<int>(x.size(o), -1), y.size(o)};
        std::vector<char> seen(c.num_objects(), 0);
        for (const auto& field : b.fields) {
            int o = object_in(c, *field.arg);
            if (o < 0) continue;
            if (seen[o]) {
                report(DiagnosticKind::DuplicateDefinition, field.arg->span, "component at '" + field.arg->name + "' given twice");
                continue;
            }
            seen[o] = 1;
            for (const auto& item : field.items) {
                auto [from, to] = arrow(item);
                int xi = x.at[o].index_of(plain(from).name), yi = y.at[o].index_of(plain(to).name);
                if (xi < 0) unresolved(from.span, "element", from.name);
                if (yi < 0) unresolved(to.span, "element", to.name);
                if (xi < 0 || yi < 0) continue;
                if (t[o].map[xi] >= 0) report(DiagnosticKind::DuplicateDefinition, from.span, "'" + from.name + "' mapped twice");
                t[o].map[xi] = yi;
            }
        }
        checkpoint(before);
        for (int o = 0; o < c.num_objects(); ++o)
            for (int e = 0; e < x.size(o); ++e)
                if (t[o].map[e] < 0)
                    abort(DiagnosticKind::InvalidDefinition, b.name.span,
                          "element '" + x.at[o].elements[e] + "' at '" + c.object_name(o) + "' is not mapped");
        if (!is_natural(t, x, y)) abort(DiagnosticKind::InvalidDefinition, b.name.span, "map is not natural");
        doc.maps[b.name.text] = NamedMap{b.header[0].text, b.header[1].text, t};
    }

    void reflection(const Block& b) {
        std::size_t before = diags_.size();
        std::optional<Token> left, right;
        std::vector<std::pair<Ref, Ref>> unit;
        for (const auto& field : b.fields)
            for (const auto& item : field.items) {
                if (field.key.text == "unit") {
                    unit.push_back(arrow(item));
                    continue;
                }
                auto& slot = field.key.text == "left" ? left : right;
                Token t = single_name(item);
                if (slot) report(DiagnosticKind::DuplicateDefinition, t.span, field.key.text + " given twice");
                slot = t;
            }
        checkpoint(before);
        if (!left || !right) abort(DiagnosticKind::InvalidDefinition, b.name.span, "reflection needs left and right");
        const auto& l = lookup(doc.functors, *left, "functor");
        const auto& f = lookup(doc.functors, *right, "functor");
        if (l.target != f.source || f.target != l.source)
            abort(DiagnosticKind::InvalidDefinition, right->span, "functors do not form an adjoint pair shape");
        const auto& big = *l.source;
        Reflection r{l, f, std::vector<int>(big.num_objects(), -1)};
        for (const auto& [o, m] : unit) {
            int oi = object_in(big, o), mi = morphism_in(big, m);
            if (oi < 0 || mi < 0) continue;
            if (r.unit[oi] >= 0) report(DiagnosticKind::DuplicateDefinition, o.span, "unit at '" + o.name + "' given twice");
            r.unit[oi] = mi;
        }
        checkpoint(before);
        for (int o = 0; o < big.num_objects(); ++o)
            if (r.unit[o] < 0) abort(DiagnosticKind::InvalidDefinition, b.name.span, "unit at '" + big.object_name(o) + "' missing");
        auto vs = validate_nat_trans(FinNatTrans{identity_functor(l.source), compose(f, l), r.unit});
        if (!vs.empty()) abort(DiagnosticKind::InvalidDefinition, b.name.span, describe(vs));
        doc.reflections[b.name.text] = r;
        doc.reflection_parts[b.name.text] = {left->text, right->text};
    }

    std::vector<Diagnostic>& diags_;
    std::set<std::string> names_;
};

}  // namespace

ParseResult parse(std::string_view text) {
    ParseResult out;
    auto& diags = out.diagnostics;
    try {
        Parser p(lex(text, diags), diags);
        Elaborator e(diags);
        while (!p.done())
            if (auto b = p.block()) e.run(*b);
        if (diags.empty()) out.document = std::move(e.doc);
    } catch (const std::exception& e) {
        diags.push_back({DiagnosticKind::InvalidDefinition, Span{}, std::string("internal error: ") + e.what()});
    }
    return out;
}

Document read_document(std::string_view text) {
    auto r = parse(text);
    if (!r.ok()) throw ParseError(std::move(r.diagnostics));
    return std::move(*r.document);
}

// --- writing -----------------------------------------------------------------------------

std::string quote_name(const std::string& name) {
    bool ident = !name.empty() && ident_start(name[0]) && std::all_of(name.begin(), name.end(), ident_char);
    bool number = !name.empty() && std::all_of(name.begin(), name.end(), digit);
    if ((ident && !kReserved.count(name)) || number) return name;
    std::string q = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') q += '\\';
        if (c == '\n') {
            q += "\\n";
            continue;
        }
        q += c;
    }
    return q + "\"";
}

namespace {

void field(std::ostringstream& os, const char* key, const std::vector<std::string>& items, const char* sep = ", ") {
    if (items.empty()) return;
    os << "  " << key << ": ";
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? sep : "") << items[i];
    os << ";\n";
}

}  // namespace

std::string write_category(const std::string& name, const FinCategory& c) {
    auto data = c.to_data();
    std::ostringstream os;
    os << "category " << quote_name(name) << " {\n";
    std::vector<std::string> objects, arrows, ids, comps;
    for (const auto& o : data.objects) objects.push_back(quote_name(o));
    for (int m = 0; m < c.num_morphisms(); ++m) {
        const auto& info = c.morphism(m);
        if (c.is_identity(m) && info.name == "id(" + c.object_name(info.dom) + ")") continue;
        arrows.push_back(quote_name(info.name) + ": " + quote_name(c.object_name(info.dom)) + " -> " +
                         quote_name(c.object_name(info.cod)));
    }
    for (int o = 0; o < c.num_objects(); ++o) {
        const auto& id = c.morphism_name(c.identity(o));
        if (id != "id(" + c.object_name(o) + ")") ids.push_back(quote_name(c.object_name(o)) + " = " + quote_name(id));
    }
    for (const auto& k : data.composites)
        comps.push_back(quote_name(k.g) + "." + quote_name(k.f) + " = " + quote_name(k.result));
    field(os, "objects", objects);
    field(os, "morphisms", arrows, "; ");
    field(os, "identities", ids, "; ");
    field(os, "compose", comps, "; ");
    os << "}\n";
    return os.str();
}

std::string write_functor(const std::string& name, const std::string& source, const std::string& target,
                          const FinFunctor& f) {
    const auto& s = *f.source;
    const auto& t = *f.target;
    std::ostringstream os;
    os << "functor " << quote_name(name) << " : " << quote_name(source) << " -> " << quote_name(target) << " {\n";
    std::vector<std::string> objects, arrows;
    for (int o = 0; o < s.num_objects(); ++o)
        objects.push_back(quote_name(s.object_name(o)) + " -> " + quote_name(t.object_name(f.obj(o))));
    for (int m = 0; m < s.num_morphisms(); ++m)
        if (!s.is_identity(m))
            arrows.push_back(quote_name(s.morphism_name(m)) + " -> " + quote_name(t.morphism_name(f.mor(m))));
    field(os, "objects", objects);
    field(os, "morphisms", arrows);
    os << "}\n";
    return os.str();
}

std::string write_presheaf(const std::string& name, const std::string& base, const Presheaf& p) {
    const auto& c = *p.base;
    std::ostringstream os;
    os << "presheaf " << quote_name(name) << " on " << quote_name(base) << " {\n";
    for (int o = 0; o < c.num_objects(); ++o) {
        std::vector<std::string> els;
        for (const auto& e : p.at[o].elements) els.push_back(quote_name(e));
        field(os, ("at " + quote_name(c.object_name(o))).c_str(), els);
    }
    for (int m = 0; m < c.num_morphisms(); ++m) {
        if (c.is_identity(m)) continue;
        const auto& from = p.at[c.cod(m)];
        const auto& to = p.at[c.dom(m)];
        std::vector<std::string> pairs;
        for (int x = 0; x < from.size(); ++x)
            pairs.push_back(quote_name(from.elements[x]) + " -> " + quote_name(to.elements[p.act[m](x)]));
        field(os, ("act " + quote_name(c.morphism_name(m))).c_str(), pairs);
    }
    os << "}\n";
    return os.str();
}

std::string write_map(const std::string& name, const std::string& source, const std::string& target,
                      const Presheaf& x, const Presheaf& y, const Components& t) {
    const auto& c = *x.base;
    std::ostringstream os;
    os << "map " << quote_name(name) << " : " << quote_name(source) << " -> " << quote_name(target) << " {\n";
    for (int o = 0; o < c.num_objects(); ++o) {
        std::vector<std::string> pairs;
        for (int e = 0; e < x.size(o); ++e)
            pairs.push_back(quote_name(x.at[o].elements[e]) + " -> " + quote_name(y.at[o].elements[t[o](e)]));
        field(os, ("at " + quote_name(c.object_name(o))).c_str(), pairs);
    }
    os << "}\n";
    return os.str();
}

namespace {

std::string write_reflection_block(const std::string& name, const std::string& left, const std::string& right,
                                   const Reflection& r) {
    const auto& big = *r.big();
    std::ostringstream os;
    os << "reflection " << quote_name(name) << " {\n  left: " << quote_name(left) << ";\n  right: " << quote_name(right)
       << ";\n";
    std::vector<std::string> unit;
    for (int o = 0; o < big.num_objects(); ++o)
        unit.push_back(quote_name(big.object_name(o)) + " -> " + quote_name(big.morphism_name(r.unit[o])));
    field(os, "unit", unit);
    os << "}\n";
    return os.str();
}

}  // namespace

std::string write_reflection(const Reflection& r) {
    bool same = r.big() == r.small();
    std::string a = same ? "B" : "A";
    std::string out = write_category("B", *r.big());
    if (!same) out += "\n" + write_category("A", *r.small());
    out += "\n" + write_functor("L", "B", a, r.left);
    out += "\n" + write_functor("F", a, "B", r.right);
    out += "\n" + write_reflection_block("R", "L", "F", r);
    return out;
}

Reflection read_reflection(std::string_view text) {
    auto doc = read_document(text);
    if (doc.reflections.size() != 1) throw InvalidData("expected exactly one reflection");
    return doc.reflections.begin()->second;
}

std::string serialize(const Document& d) {
    std::string out;
    for (const auto& e : d.order) {
        if (!out.empty()) out += "\n";
        switch (e.kind) {
            case Document::Kind::Category: out += write_category(e.name, *d.categories.at(e.name)); break;
            case Document::Kind::Functor: {
                const auto& [s, t] = d.functor_ends.at(e.name);
                out += write_functor(e.name, s, t, d.functors.at(e.name));
                break;
            }
            case Document::Kind::Presheaf:
                out += write_presheaf(e.name, d.presheaf_base.at(e.name), d.presheaves.at(e.name));
                break;
            case Document::Kind::Map: {
                const auto& m = d.maps.at(e.name);
                out += write_map(e.name, m.source, m.target, d.presheaves.at(m.source), d.presheaves.at(m.target),
                                 m.components);
                break;
            }
            case Document::Kind::Reflection: {
                const auto& [l, f] = d.reflection_parts.at(e.name);
                out += write_reflection_block(e.name, l, f, d.reflections.at(e.name));
                break;
            }
        }
    }
    return out;
}

}  // namespace finitopos
