#include "finitopos/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

#include "finitopos/checks.hpp"
#include "finitopos/dsl.hpp"
#include "finitopos/fixtures.hpp"
#include "finitopos/graphpre.hpp"
#include "finitopos/kan.hpp"

namespace finitopos {

json to_json(const Invocation& inv) {
    json j{{"path", inv.path},
           {"document", inv.document},
           {"names", inv.names},
           {"presheaves", inv.presheaves},
           {"maps", inv.maps},
           {"bound", inv.bound},
           {"max_vertices", inv.max_vertices},
           {"max_edges", inv.max_edges},
           {"max_elements", inv.max_elements},
           {"budget", inv.budget},
           {"jobs", inv.jobs},
           {"fast", inv.fast},
           {"graphs", inv.graphs}};
    if (inv.fixture) j["fixture"] = *inv.fixture;
    return j;
}

Invocation invocation_from_json(const json& j) {
    Invocation inv;
    inv.path = j.at("path").get<std::vector<std::string>>();
    if (j.contains("fixture")) inv.fixture = j.at("fixture").get<std::string>();
    inv.document = j.value("document", "");
    inv.names = j.value("names", std::map<std::string, std::string>{});
    inv.presheaves = j.value("presheaves", std::vector<std::string>{});
    inv.maps = j.value("maps", std::vector<std::string>{});
    inv.bound = j.value("bound", inv.bound);
    inv.max_vertices = j.value("max_vertices", inv.max_vertices);
    inv.max_edges = j.value("max_edges", inv.max_edges);
    inv.max_elements = j.value("max_elements", inv.max_elements);
    inv.budget = j.value("budget", inv.budget);
    inv.jobs = j.value("jobs", inv.jobs);
    inv.fast = j.value("fast", inv.fast);
    inv.graphs = j.value("graphs", inv.graphs);
    return inv;
}

namespace {

struct Inputs {
    const Invocation& inv;
    std::optional<Document> doc;

    explicit Inputs(const Invocation& i) : inv(i) {
        if (!inv.document.empty()) doc = read_document(inv.document);
    }

    const Document& document() const {
        if (!doc) throw InvalidData("this command needs DSL input");
        return *doc;
    }

    // The declaration named for `role`, or the last one of `kind`.
    std::string pick(const std::string& role, Document::Kind kind) const {
        if (auto it = inv.names.find(role); it != inv.names.end()) return it->second;
        const auto& d = document();
        for (auto e = d.order.rbegin(); e != d.order.rend(); ++e)
            if (e->kind == kind) return e->name;
        throw InvalidData("no " + role + " declared in the input");
    }

    Reflection reflection() const {
        if (inv.fixture) return fixture(*inv.fixture).reflection;
        auto name = pick("reflection", Document::Kind::Reflection);
        auto it = document().reflections.find(name);
        if (it == document().reflections.end()) throw InvalidData("no reflection named '" + name + "'");
        return it->second;
    }

    CategoryPtr category() const {
        if (inv.fixture) return fixture(*inv.fixture).reflection.big();
        auto name = pick("category", Document::Kind::Category);
        auto it = document().categories.find(name);
        if (it == document().categories.end()) throw InvalidData("no category named '" + name + "'");
        return it->second;
    }

    FinFunctor functor() const {
        if (inv.fixture && !inv.names.count("functor")) return fixture(*inv.fixture).reflection.left;
        auto name = pick("functor", Document::Kind::Functor);
        auto it = document().functors.find(name);
        if (it == document().functors.end()) throw InvalidData("no functor named '" + name + "'");
        return it->second;
    }

    Presheaf presheaf(std::size_t k) const {
        const auto& d = document();
        std::string name;
        if (k < inv.presheaves.size()) {
            name = inv.presheaves[k];
        } else {
            std::vector<std::string> all;
            for (const auto& e : d.order)
                if (e.kind == Document::Kind::Presheaf) all.push_back(e.name);
            if (k >= all.size()) throw InvalidData("not enough presheaves in the input");
            name = all[k];
        }
        auto it = d.presheaves.find(name);
        if (it == d.presheaves.end()) throw InvalidData("no presheaf named '" + name + "'");
        return it->second;
    }

    std::pair<std::string, NamedMap> map(std::size_t k) const {
        if (k >= inv.maps.size()) throw InvalidData("missing --map operand");
        auto it = document().maps.find(inv.maps[k]);
        if (it == document().maps.end()) throw InvalidData("no map named '" + inv.maps[k] + "'");
        return *it;
    }

    std::string base_name(const Presheaf& p) const {
        if (doc) {
            auto n = doc->category_name(p.base);
            if (!n.empty()) return n;
        }
        return "C";
    }
};

std::uint64_t budget_of(const Invocation& inv) { return inv.budget ? inv.budget : default_budget(); }

// Moves a presheaf onto `base` when its own base has the same tables.
Presheaf rebase(Presheaf p, const CategoryPtr& base, const char* what) {
    if (p.base == base) return p;
    if (!(*p.base == *base)) throw InvalidData(std::string("presheaf is not over the ") + what + " category");
    p.base = base;
    return p;
}

json presheaf_json(const Presheaf& p, const std::string& name, const std::string& base) {
    json carriers = json::object();
    for (int c = 0; c < p.base->num_objects(); ++c) carriers[p.base->object_name(c)] = p.at[c].elements;
    json sizes = json::object();
    for (int c = 0; c < p.base->num_objects(); ++c) sizes[p.base->object_name(c)] = p.size(c);
    return json{{"carriers", carriers}, {"sizes", sizes}, {"dsl", write_category(base, *p.base) + write_presheaf(name, base, p)}};
}

Verdict computed(const std::string& property) {
    Verdict v;
    v.property = property;
    v.note = "computed";
    return v;
}

GraphBounds graph_bounds(const Invocation& inv) {
    GraphBounds b;
    b.max_vertices = inv.max_vertices;
    b.max_edges = inv.max_edges;
    b.max_elements = inv.max_elements;
    b.budget = budget_of(inv);
    b.jobs = inv.jobs;
    b.fast = inv.fast;
    if (inv.fast) b.random_pairs = 20;
    return b;
}

Outcome run_validate(const Inputs& in) {
    Outcome out;
    std::vector<Verdict> parts;
    auto check_reflection = [&](const Reflection& r) {
        parts.push_back(check_adjunction(r));
        out.corpus_stats["reflections"] = out.corpus_stats.value("reflections", 0) + 1;
    };
    if (in.inv.fixture) {
        check_reflection(fixture(*in.inv.fixture).reflection);
    } else {
        const auto& d = in.document();
        for (const auto& [name, r] : d.reflections) check_reflection(r);
        out.corpus_stats["declarations"] = d.order.size();
        out.corpus_stats["categories"] = d.categories.size();
        out.corpus_stats["functors"] = d.functors.size();
        out.corpus_stats["presheaves"] = d.presheaves.size();
        out.corpus_stats["maps"] = d.maps.size();
    }
    out.verdict = combine("validate", parts);
    if (out.verdict.passed()) out.verdict.note = "all declarations validate";
    return out;
}

Outcome run_kan(const Inputs& in, const std::string& which) {
    auto l = in.functor();
    Outcome out;
    out.verdict = computed("kan-" + which);
    if (which == "restrict") {
        auto y = rebase(in.presheaf(0), l.target, "target");
        auto r = restrict(l, y);
        out.result = presheaf_json(r, "restricted", in.base_name(r));
    } else if (which == "lan" || which == "ran") {
        auto x = rebase(in.presheaf(0), l.source, "source");
        Budget budget(budget_of(in.inv), "kan " + which);
        try {
            auto k = which == "lan" ? lan(l, x) : ran(l, x, budget);
            auto name = in.doc ? in.doc->category_name(l.target) : std::string();
            out.result = presheaf_json(k.output, which == "lan" ? "lan" : "ran", name.empty() ? "A" : name);
        } catch (const BudgetExceeded& e) {
            out.verdict.status = Status::Inconclusive;
            out.verdict.note = e.what();
        }
    } else {
        throw std::invalid_argument("unknown kan subcommand '" + which + "'");
    }
    out.corpus_stats["budget"] = budget_of(in.inv);
    return out;
}

Outcome run_exp(const Inputs& in) {
    auto x = in.presheaf(0);
    auto y = in.presheaf(1);
    Outcome out;
    out.verdict = computed("exponential");
    out.corpus_stats["budget"] = budget_of(in.inv);
    try {
        Budget budget(budget_of(in.inv), "exponential");
        auto e = exponential(x, y, budget);
        out.result = presheaf_json(e.object, "exp", in.base_name(e.object));
    } catch (const BudgetExceeded& e) {
        out.verdict.status = Status::Inconclusive;
        out.verdict.note = e.what();
    }
    return out;
}

Outcome run_pi(const Inputs& in) {
    auto [fname, f] = in.map(0);
    auto [gname, g] = in.map(1);
    if (g.target != f.source) throw InvalidData("map '" + gname + "' must end where '" + fname + "' starts");
    const auto& d = in.document();
    const auto& x = d.presheaves.at(f.source);
    const auto& y = d.presheaves.at(f.target);
    const auto& z = d.presheaves.at(g.source);
    Outcome out;
    out.verdict = computed("dependent-product");
    out.corpus_stats["budget"] = budget_of(in.inv);
    try {
        Budget budget(budget_of(in.inv), "dependent product");
        auto p = dependent_product(x, y, f.components, z, g.components, budget);
        out.result = presheaf_json(p.object, "pi", in.base_name(p.object));
    } catch (const BudgetExceeded& e) {
        out.verdict.status = Status::Inconclusive;
        out.verdict.note = e.what();
    }
    return out;
}

Outcome run_check(const Inputs& in, const std::string& which) {
    Outcome out;
    const auto& inv = in.inv;
    if (which == "exp-ideal" && inv.graphs) {
        auto b = graph_bounds(inv);
        auto products = check_product_preservation(b);
        auto exps = check_exponential_ideal_graphs(b);
        out.verdict = combine("graph-exponential-ideal", {products, exps});
        out.verdict.bounds = json{{"products", products.bounds}, {"exponentials", exps.bounds}};
        for (const auto& [k, v] : products.stats) out.corpus_stats["products_" + k] = v;
        for (const auto& [k, v] : exps.stats) out.corpus_stats["exponentials_" + k] = v;
        return out;
    }
    if (which == "lcc") {
        out.verdict = check_lcc(*in.category());
    } else {
        auto r = in.reflection();
        if (which == "adjunction") {
            out.verdict = check_adjunction(r);
        } else if (which == "frobenius") {
            out.verdict = check_frobenius(r);
        } else if (which == "sle") {
            out.verdict = check_semi_left_exact(r);
        } else if (which == "stable-units") {
            out.verdict = check_stable_units(r);
        } else if (which == "exp-ideal") {
            auto e = check_exponential_ideal(r);
            out.verdict = e.combined();
            out.corpus_stats["products"] = to_string(e.products.status);
            out.corpus_stats["exponentials"] = to_string(e.exponentials.status);
        } else if (which == "locally-connected") {
            LocallyConnectedOptions opts;
            opts.carrier_bound = inv.bound;
            opts.budget = budget_of(inv);
            if (inv.fast) {
                opts.max_squares = 2000;
                opts.max_pi_checks = 50;
            }
            out.verdict = check_locally_connected(r.left, opts);
        } else {
            throw std::invalid_argument("unknown check '" + which + "'");
        }
    }
    for (const auto& [k, v] : out.verdict.stats) out.corpus_stats[k] = v;
    return out;
}

Outcome run_search(const Inputs& in, const std::string& which) {
    auto b = graph_bounds(in.inv);
    SearchResult s;
    if (which == "sle-failure") {
        s = find_sle_failure(b);
    } else if (which == "pi-witness") {
        s = find_pi_witness(b);
    } else if (which == "sieve-witness") {
        s = find_sieve_witness(b);
    } else {
        throw std::invalid_argument("unknown search '" + which + "'");
    }
    Outcome out;
    out.verdict = s.verdict;
    for (const auto& [k, v] : s.verdict.stats) out.corpus_stats[k] = v;
    out.corpus_stats["found"] = s.found;
    return out;
}

std::string hex_sha256(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

}  // namespace

Outcome execute(const Invocation& inv) {
    if (inv.path.empty()) throw std::invalid_argument("no subcommand");
    Inputs in(inv);
    const auto& head = inv.path[0];
    auto sub = [&]() -> const std::string& {
        if (inv.path.size() < 2) throw std::invalid_argument("'" + head + "' needs a subcommand");
        return inv.path[1];
    };
    if (head == "validate") return run_validate(in);
    if (head == "kan") return run_kan(in, sub());
    if (head == "exp") return run_exp(in);
    if (head == "pi") return run_pi(in);
    if (head == "check") return run_check(in, sub());
    if (head == "search") return run_search(in, sub());
    throw std::invalid_argument("unknown command '" + head + "'");
}

json make_report(const Invocation& inv, const Outcome& out) {
    json v = to_json(out.verdict);
    json r{{"schema_version", kSchemaVersion},
           {"command", to_json(inv)},
           {"bounds", out.verdict.bounds},
           {"verdict", v},
           {"corpus_stats", out.corpus_stats}};
    if (out.verdict.witness) r["witness"] = *out.verdict.witness;
    if (out.result) r["result"] = *out.result;
    r["digest"] = report_digest(r);
    return r;
}

std::string report_digest(const json& report) {
    json body = report;
    body.erase("digest");
    return hex_sha256(body.dump());
}

std::optional<Verdict> replay_witness(const json& w) {
    if (!w.is_object()) throw InvalidData("witness is not an object");
    if (w.contains("level")) {
        const auto level = w.at("level").get<std::string>();
        if (level == "category") {
            auto square = replay_category_square(w);
            if (w.at("data").contains("graph")) {
                auto graph = replay_graph_square(w.at("data").at("graph"));
                auto both = combine(square.property, {square, graph});
                // both levels must fail for the witness to stand
                if (square.status != graph.status) both.status = Status::Inconclusive;
                return both;
            }
            return square;
        }
        if (level == "pi") return replay_pi_witness(w);
        if (level == "sieve") return replay_sieve_witness(w);
        return std::nullopt;
    }
    if (w.contains("category") && w.contains("f") && w.contains("y")) return replay_lcc(w);
    return std::nullopt;
}

ReplayResult replay_report(const json& report) {
    ReplayResult r;
    if (report.value("schema_version", 0) != kSchemaVersion) throw InvalidData("unsupported report schema version");
    r.digest_matches = report.contains("digest") && report.at("digest") == report_digest(report);
    auto inv = invocation_from_json(report.at("command"));
    r.recomputed = make_report(inv, execute(inv));
    r.verdict_matches = r.recomputed.at("verdict") == report.at("verdict");
    r.report_matches = r.recomputed.at("digest") == report.value("digest", "");
    if (report.contains("witness")) {
        r.independent = replay_witness(report.at("witness"));
        if (r.independent)
            r.independent_agrees =
                to_string(r.independent->status) == report.at("verdict").at("status").get<std::string>();
    }
    return r;
}

}  // namespace finitopos
