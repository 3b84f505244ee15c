// Command-line front end: parses DSL files or names a fixture, runs one
// checker, search, or construction, prints the verdict, and writes a JSON
// report. Exit codes: 0 as expected, 1 unexpected verdict or failed replay,
// 2 usage or input error, 3 inconclusive.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "finitopos/common.hpp"
#include "finitopos/dsl.hpp"
#include "finitopos/report.hpp"

namespace fs = std::filesystem;
using namespace finitopos;

namespace {

enum Exit { kOk = 0, kUnexpected = 1, kUsage = 2, kInconclusive = 3 };

struct Options {
    std::string fixture;
    std::vector<std::string> inputs;
    std::string category;
    std::string functor;
    std::string reflection;
    std::vector<std::string> presheaves;
    std::vector<std::string> maps;
    int bound = 2;
    int max_vertices = 4;
    int max_edges = 8;
    int max_elements = 3;
    std::uint64_t budget = 0;
    int jobs = 1;
    std::string expect;
    std::string out;
    bool fast = false;
    bool graphs = false;
    std::string replay_file;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidData("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Concatenates input files and resolves FILE[:NAME] operands to declaration names.
class Sources {
public:
    /// Registers the file part of `arg` and returns the (file, name) split.
    std::pair<std::string, std::string> add(const std::string& arg) {
        std::string file = arg, name;
        if (!fs::exists(arg)) {
            auto colon = arg.rfind(':');
            if (colon != std::string::npos && fs::exists(arg.substr(0, colon))) {
                file = arg.substr(0, colon);
                name = arg.substr(colon + 1);
            } else {
                throw InvalidData("no such file '" + arg + "'");
            }
        }
        include(file);
        return {file, name};
    }

    void include(const std::string& file) {
        auto key = fs::weakly_canonical(file).string();
        for (const auto& f : files_)
            if (f.key == key) return;
        std::string text = slurp(file);
        if (!text.empty() && text.back() != '\n') text += '\n';
        int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
        files_.push_back({key, file, line_, line_ + lines});
        line_ += lines;
        text_ += text;
    }

    const std::string& text() const { return text_; }

    /// Name of the last declaration of `kind` inside `file`.
    std::string last_in(const std::string& file, Document::Kind kind, const Document& doc) const {
        auto key = fs::weakly_canonical(file).string();
        for (const auto& f : files_) {
            if (f.key != key) continue;
            std::string found;
            for (const auto& e : doc.order)
                if (e.kind == kind && e.span.line >= f.first && e.span.line < f.last) found = e.name;
            if (found.empty()) throw InvalidData("'" + file + "' declares nothing of the requested kind");
            return found;
        }
        throw InvalidData("'" + file + "' was not loaded");
    }

private:
    struct File {
        std::string key, path;
        int first, last;  // 1-based line range [first, last)
    };
    std::vector<File> files_;
    std::string text_;
    int line_ = 1;
};

Invocation build_invocation(const std::vector<std::string>& path, const Options& o) {
    Invocation inv;
    inv.path = path;
    if (!o.fixture.empty()) inv.fixture = o.fixture;
    inv.bound = o.bound;
    inv.max_vertices = o.max_vertices;
    inv.max_edges = o.max_edges;
    inv.max_elements = o.max_elements;
    inv.budget = o.budget ? o.budget : default_budget();
    inv.jobs = o.jobs;
    inv.fast = o.fast;
    inv.graphs = o.graphs;

    Sources src;
    for (const auto& f : o.inputs) src.include(f);
    struct Pending {
        std::string role, file, name;
        Document::Kind kind;
        int slot;  // index into presheaves/maps, -1 for a role
    };
    std::vector<Pending> pending;
    auto operand = [&](const std::string& arg, const std::string& role, Document::Kind kind, int slot) {
        auto [file, name] = src.add(arg);
        pending.push_back({role, file, name, kind, slot});
    };
    if (!o.functor.empty()) operand(o.functor, "functor", Document::Kind::Functor, -1);
    if (!o.reflection.empty()) operand(o.reflection, "reflection", Document::Kind::Reflection, -1);
    for (std::size_t i = 0; i < o.presheaves.size(); ++i)
        operand(o.presheaves[i], "presheaf", Document::Kind::Presheaf, static_cast<int>(i));
    for (std::size_t i = 0; i < o.maps.size(); ++i) operand(o.maps[i], "map", Document::Kind::Map, static_cast<int>(i));
    if (!o.category.empty()) inv.names["category"] = o.category;
    inv.document = src.text();

    if (!pending.empty()) {
        auto doc = read_document(inv.document);
        inv.presheaves.resize(o.presheaves.size());
        inv.maps.resize(o.maps.size());
        for (const auto& p : pending) {
            std::string name = p.name.empty() ? src.last_in(p.file, p.kind, doc) : p.name;
            if (p.kind == Document::Kind::Presheaf)
                inv.presheaves[p.slot] = name;
            else if (p.kind == Document::Kind::Map)
                inv.maps[p.slot] = name;
            else
                inv.names[p.role] = name;
        }
    }
    return inv;
}

std::string default_expectation(const std::vector<std::string>& path) {
    return path[0] == "search" ? "fail" : "pass";
}

int report_and_exit(const std::vector<std::string>& path, const Options& o, const Invocation& inv,
                    const Outcome& outcome) {
    auto report = make_report(inv, outcome);
    const auto& v = outcome.verdict;
    std::cout << v.summary() << "\n";
    if (v.witness) {
        auto text = v.witness->dump();
        if (text.size() > 400) text = text.substr(0, 400) + " ... (full witness in the report)";
        std::cout << "witness: " << text << "\n";
    }
    if (outcome.result && outcome.result->contains("sizes"))
        std::cout << "carriers: " << outcome.result->at("sizes").dump() << "\n";
    std::cout << "digest: " << report.at("digest").get<std::string>() << "\n";
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw InvalidData("cannot write '" + o.out + "'");
        f << report.dump(2) << "\n";
        std::cout << "report: " << o.out << "\n";
    }
    if (v.status == Status::Inconclusive) return kInconclusive;
    std::string expect = o.expect.empty() ? default_expectation(path) : o.expect;
    bool as_expected = (expect == "pass") == v.passed();
    return as_expected ? kOk : kUnexpected;
}

int run_replay(const Options& o) {
    json report = json::parse(slurp(o.replay_file));
    auto r = replay_report(report);
    std::cout << "stored:     " << report.at("verdict").at("status").get<std::string>() << " "
              << report.value("digest", "") << "\n";
    std::cout << "recomputed: " << r.recomputed.at("verdict").at("status").get<std::string>() << " "
              << r.recomputed.at("digest").get<std::string>() << "\n";
    if (r.independent) std::cout << "independent re-verifier: " << r.independent->summary() << "\n";
    std::cout << "digest " << (r.digest_matches ? "intact" : "MISMATCH") << ", verdict "
              << (r.verdict_matches ? "identical" : "DIFFERS") << ", report "
              << (r.report_matches ? "identical" : "DIFFERS") << "\n";
    return r.ok() ? kOk : kUnexpected;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--fixture", o.fixture, "built-in fixture name");
    app->add_option("--input", o.inputs, "DSL file(s) to load");
    app->add_option("--category", o.category, "category declaration to use");
    app->add_option("--functor", o.functor, "functor as FILE[:NAME]");
    app->add_option("--reflection", o.reflection, "reflection as FILE[:NAME]");
    app->add_option("--presheaf", o.presheaves, "presheaf operand(s) as FILE[:NAME]");
    app->add_option("--map", o.maps, "map operand(s) as FILE[:NAME]");
    app->add_option("--bound", o.bound, "presheaf carrier bound")->check(CLI::Range(0, 6));
    app->add_option("--max-vertices", o.max_vertices, "graph vertex bound")->check(CLI::Range(1, 8));
    app->add_option("--max-edges", o.max_edges, "bound on non-loop edges")->check(CLI::Range(0, 16));
    app->add_option("--max-elements", o.max_elements, "preorder size bound")->check(CLI::Range(1, 5));
    app->add_option("--budget", o.budget, "enumeration budget (default: FINITOPOS_BUDGET or 10^6)");
    app->add_option("--jobs", o.jobs, "worker threads for exhaustive checks")->check(CLI::Range(1, 256));
    app->add_option("--expect", o.expect, "expected verdict")->check(CLI::IsMember({"pass", "fail"}));
    app->add_option("--out", o.out, "write the JSON report here");
    app->add_flag("--fast", o.fast, "smaller sampled workloads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finitopos: finite certificates for reflections of finite categories and presheaves"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::string> path;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::vector<std::string> full) {
        auto* s = parent->add_subcommand(name, help);
        add_common(s, o);
        s->callback([&path, full] { path = full; });
        return s;
    };

    auto* validate = leaf(&app, "validate", "parse and validate DSL files or a fixture", {"validate"});
    validate->add_option("files", o.inputs, "DSL files");

    auto* kan = app.add_subcommand("kan", "restriction and Kan extensions along a functor");
    kan->require_subcommand(1);
    leaf(kan, "restrict", "restrict a presheaf along the functor", {"kan", "restrict"});
    leaf(kan, "lan", "left Kan extension", {"kan", "lan"});
    leaf(kan, "ran", "right Kan extension", {"kan", "ran"});

    leaf(&app, "exp", "exponential of the second presheaf by the first", {"exp"});
    leaf(&app, "pi", "dependent product along the first map of the second", {"pi"});

    auto* check = app.add_subcommand("check", "property checkers");
    check->require_subcommand(1);
    for (const char* c : {"adjunction", "frobenius", "sle", "stable-units", "locally-connected", "lcc"})
        leaf(check, c, std::string("check ") + c, {"check", c});
    leaf(check, "exp-ideal", "exponential ideal / product preservation", {"check", "exp-ideal"})
        ->add_flag("--graphs", o.graphs, "check preorders inside reflexive graphs");

    auto* search = app.add_subcommand("search", "witness searches over bounded graph families");
    search->require_subcommand(1);
    for (const char* s : {"sle-failure", "pi-witness", "sieve-witness"}) leaf(search, s, s, {"search", s});

    auto* replay = app.add_subcommand("replay", "re-verify a report");
    replay->add_option("report", o.replay_file, "report JSON")->required();
    replay->callback([&path] { path = {"replay"}; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (path.empty()) return kUsage;
        if (path[0] == "replay") return run_replay(o);
        auto inv = build_invocation(path, o);
        return report_and_exit(path, o, inv, execute(inv));
    } catch (const ParseError& e) {
        for (const auto& d : e.diagnostics()) std::cerr << d.format() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return path.size() && path[0] == "replay" ? kUnexpected : kUsage;
    } catch (const InvalidData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return path.size() && path[0] == "replay" ? kUnexpected : kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
