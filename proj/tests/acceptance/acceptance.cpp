// Acceptance run: one line per criterion, exit status 0 only if all pass.
//
//   criterion 1  validators accept fixtures, reject one seeded mutation per axiom family
//   criterion 2  co-Yoneda and the hom-bijections of L! ⊣ L* ⊣ L_*
//   criterion 3  L* is full and faithful on the lattice-3-2 corpus
//   criterion 4  L! preserves binary products where L does
//   criterion 5  graph reflection preserves products
//   criterion 6  embedded preorders form an exponential ideal in graphs
//   criterion 7  a replayable semi-left-exactness counterexample among graphs
//   criterion 8  implication lattice over the fixtures
//   criterion 9  local cartesian closure sanity
//   criterion 10 parser fixed points, fuzzing, report replay

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "finitopos/checks.hpp"
#include "finitopos/dsl.hpp"
#include "finitopos/fixtures.hpp"
#include "finitopos/graphpre.hpp"
#include "finitopos/kan.hpp"
#include "finitopos/report.hpp"

using namespace finitopos;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

int jobs() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

// --- criterion 1 -------------------------------------------------------------------------

bool rejects_category(const CategoryData& d) { return !validate_category(d).ok(); }

Result axiom_suites() {
    int accepted = 0, fixtures = 0;
    for (const auto& fx : all_fixtures()) {
        const auto& r = fx.reflection;
        ++fixtures;
        bool ok = validate_category(r.big()->to_data()).ok() && validate_category(r.small()->to_data()).ok() &&
                  validate_functor(r.left).empty() && validate_functor(r.right).empty() &&
                  validate_nat_trans({identity_functor(r.big()), compose(r.right, r.left), r.unit}).empty() &&
                  check_adjunction(r).passed();
        accepted += ok;
    }

    std::vector<std::pair<std::string, std::function<bool()>>> mutations;
    mutations.push_back({"missing composite", [] {
                             auto d = delta1()->to_data();
                             std::erase_if(d.composites, [](const auto& c) { return c.g == "d0" && c.f == "s"; });
                             return rejects_category(d);
                         }});
    mutations.push_back({"identity law", [] {
                             CategoryData d;
                             d.objects = {"a"};
                             d.morphisms = {{"e", "a", "a"}};
                             d.composites = {{"e", "e", "e"}, {"id(a)", "e", "id(a)"}};
                             return rejects_category(d);
                         }});
    mutations.push_back({"associativity", [] {
                             CategoryData d;
                             d.objects = {"a"};
                             d.morphisms = {{"e", "a", "a"}, {"z", "a", "a"}};
                             d.composites = {{"e", "e", "z"}, {"e", "z", "e"}, {"z", "e", "z"}, {"z", "z", "z"}};
                             return rejects_category(d);
                         }});
    mutations.push_back({"dangling reference", [] {
                             auto d = m3()->to_data();
                             d.morphisms.push_back({"stray", "a", "nowhere"});
                             return rejects_category(d);
                         }});
    mutations.push_back({"composite of the wrong type", [] {
                             auto d = chain(3)->to_data();
                             for (auto& c : d.composites)
                                 if (c.result == "c0<c2") c.result = "c1<c2";
                             return rejects_category(d);
                         }});
    mutations.push_back({"duplicate object", [] {
                             auto d = bool2()->to_data();
                             d.objects.push_back(d.objects.front());
                             return rejects_category(d);
                         }});
    mutations.push_back({"functor breaks endpoints", [] {
                             auto l = fixture("lattice-3-2").reflection.left;
                             const auto& b = *l.source;
                             l.mor_map[b.morphism_index("c0<c1")] = l.target->identity(l.target->object_index("c0"));
                             return !validate_functor(l).empty();
                         }});
    mutations.push_back({"functor breaks identities", [] {
                             auto l = identity_functor(delta1());
                             const auto& c = *delta1();
                             l.mor_map[c.identity(c.object_index("E"))] = c.morphism_index("d0.s");
                             return !validate_functor(l).empty();
                         }});
    mutations.push_back({"functor breaks composition", [] {
                             auto l = identity_functor(delta1());
                             const auto& c = *delta1();
                             l.mor_map[c.morphism_index("d0")] = c.morphism_index("d1");
                             return !validate_functor(l).empty();
                         }});
    mutations.push_back({"naturality", [] {
                             auto id = identity_functor(delta1());
                             const auto& c = *delta1();
                             std::vector<int> comp(c.num_objects());
                             comp[c.object_index("V")] = c.identity(c.object_index("V"));
                             comp[c.object_index("E")] = c.morphism_index("d0.s");
                             return !validate_nat_trans({id, id, comp}).empty();
                         }});
    mutations.push_back({"component of the wrong type", [] {
                             auto id = identity_functor(delta1());
                             const auto& c = *delta1();
                             std::vector<int> comp(c.num_objects());
                             comp[c.object_index("V")] = c.morphism_index("d0");
                             comp[c.object_index("E")] = c.identity(c.object_index("E"));
                             return !validate_nat_trans({id, id, comp}).empty();
                         }});
    mutations.push_back({"unit universality", [] {
                             // L'(c1) = c0 keeps L' monotone but leaves no unit at c1
                             auto r = fixture("lattice-3-2").reflection;
                             const auto& a = *r.small();
                             r.left = monotone_functor(r.big(), r.small(),
                                                       {a.object_index("c0"), a.object_index("c0"), a.object_index("c2")});
                             try {
                                 return !check_adjunction(r).passed();
                             } catch (const std::exception&) {
                                 return true;
                             }
                         }});

    int rejected = 0;
    std::string missed;
    for (const auto& [name, rejects] : mutations) {
        if (rejects())
            ++rejected;
        else
            missed += " " + name;
    }
    Result o;
    o.pass = accepted == fixtures && rejected == static_cast<int>(mutations.size());
    o.detail = std::to_string(accepted) + "/" + std::to_string(fixtures) + " fixtures accepted, " +
               std::to_string(rejected) + "/" + std::to_string(mutations.size()) + " mutations rejected";
    if (!missed.empty()) o.detail += "; accepted:" + missed;
    return o;
}

// --- criterion 2 -------------------------------------------------------------------------

Result kan_chain() {
    int coyoneda = 0, coyoneda_ok = 0;
    std::vector<FinFunctor> functors{fixture("lattice-3-2").reflection.left, fixture("delta1").reflection.left,
                                     identity_functor(delta1())};
    for (const auto& l : functors)
        for (int b = 0; b < l.source->num_objects(); ++b) {
            ++coyoneda;
            auto lan_y = lan(l, yoneda(l.source, b)).output;
            coyoneda_ok += find_isomorphism(lan_y, yoneda(l.target, l.obj(b))).has_value();
        }
    EssentialLocalOptions opts;
    opts.carrier_bound = 2;
    std::int64_t pairs = 0;
    bool all = true;
    for (const char* name : {"lattice-3-2", "delta1"}) {
        auto v = verify_essential_local(fixture(name).reflection, opts);
        all = all && v.passed();
        pairs += v.stats["lan_pairs"];
    }
    Result o;
    o.pass = all && coyoneda == coyoneda_ok;
    o.detail = "co-Yoneda " + std::to_string(coyoneda_ok) + "/" + std::to_string(coyoneda) + ", hom-bijections " +
               (all ? "hold" : "FAIL") + " over " + std::to_string(pairs) + " corpus pairs at carrier bound 2";
    return o;
}

// --- criterion 3 -------------------------------------------------------------------------

Result restriction_full_faithful() {
    auto r = fixture("lattice-3-2").reflection;
    auto corpus = presheaf_corpus(r.small(), 2);
    std::vector<Presheaf> restricted;
    for (const auto& x : corpus) restricted.push_back(restrict(r.left, x));
    Budget budget(std::uint64_t{1} << 40, "fullness");
    int pairs = 0, equal = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            ++pairs;
            equal += count_nat(corpus[i], corpus[j], budget) == count_nat(restricted[i], restricted[j], budget);
        }
    return {pairs == equal, std::to_string(equal) + "/" + std::to_string(pairs) + " corpus pairs with |Nat(L*X, L*Y)| = |Nat(X, Y)|"};
}

// --- criterion 4 -------------------------------------------------------------------------

Result lan_products() {
    int fixtures_checked = 0, pairs = 0, isos = 0;
    std::string excluded;
    for (const auto& fx : all_fixtures()) {
        auto hyp = check_exponential_ideal(fx.reflection).products;
        if (!hyp.passed()) {
            std::string reason = hyp.note.empty() ? to_string(hyp.status) : hyp.note;
            if (hyp.witness) reason += " " + hyp.witness->dump();
            excluded += (excluded.empty() ? "" : "; ") + fx.name + ": " + reason;
            continue;
        }
        ++fixtures_checked;
        const auto& l = fx.reflection.left;
        auto corpus = presheaf_corpus(l.source, 2);
        std::vector<Presheaf> lans;
        for (const auto& x : corpus) lans.push_back(lan(l, x).output);
        for (std::size_t i = 0; i < corpus.size(); ++i)
            for (std::size_t j = 0; j < corpus.size(); ++j) {
                ++pairs;
                auto lhs = lan(l, product(corpus[i], corpus[j]).object).output;
                isos += find_isomorphism(lhs, product(lans[i], lans[j]).object).has_value();
            }
    }
    return {pairs == isos && fixtures_checked > 0,
            std::to_string(isos) + "/" + std::to_string(pairs) + " pairs over " + std::to_string(fixtures_checked) +
                " fixtures; excluded " + excluded};
}

// --- criteria 5, 6 -----------------------------------------------------------------------

Result graph_products() {
    GraphBounds b;
    b.max_vertices = 3;
    b.max_edges = 4;
    b.random_pairs = 100;
    b.random_max_vertices = 5;
    b.jobs = jobs();
    auto v = check_product_preservation(b);
    return {v.passed(), v.summary() + " " + json(v.stats).dump()};
}

Result graph_exponentials() {
    GraphBounds b;
    b.max_elements = 3;
    b.max_vertices = 3;
    b.max_edges = 4;
    b.jobs = jobs();
    auto v = check_exponential_ideal_graphs(b);
    return {v.passed(), v.summary() + " " + json(v.stats).dump()};
}

// --- criterion 7 -------------------------------------------------------------------------

Result sle_counterexample() {
    Invocation inv;
    inv.path = {"search", "sle-failure"};
    inv.max_vertices = 4;
    inv.max_edges = 8;
    inv.budget = default_budget();
    auto out = execute(inv);
    std::string escalated;
    if (out.verdict.passed()) {
        inv.max_vertices = 5;
        out = execute(inv);
        escalated = " after escalation to 5 vertices";
    }
    if (!out.verdict.failed()) return {false, "no witness" + escalated + ": " + out.verdict.summary()};
    auto report = make_report(inv, out);
    auto replayed = replay_report(json::parse(report.dump()));
    const auto& inst = out.verdict.witness->at("data").at("graph");
    bool ok = replayed.ok() && replayed.independent && replayed.independent->failed();
    return {ok, "witness" + escalated + " of total size " + inst.at("total_size").dump() + " (X " +
                    inst.at("X").dump() + ", A " + inst.at("A").dump() + ", A' " + inst.at("A2").dump() +
                    "); independent replay " + (replayed.independent ? to_string(replayed.independent->status) : "none")};
}

// --- criterion 8 -------------------------------------------------------------------------

Result implication_lattice() {
    int violations = 0, su = 0, lc = 0, sle = 0, lc_inconclusive = 0;
    std::string where;
    for (const auto& fx : all_fixtures()) {
        const auto& r = fx.reflection;
        bool s = check_semi_left_exact(r).passed();
        bool u = check_stable_units(r).passed();
        auto l = check_locally_connected(r.left, LocallyConnectedOptions{});
        sle += s;
        su += u;
        lc += l.passed();
        lc_inconclusive += l.status == Status::Inconclusive;
        if ((u && !s) || (l.passed() && !s)) {
            ++violations;
            where += " " + fx.name;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(all_fixtures().size()) +
                                 " fixtures (stable units " + std::to_string(su) + ", locally connected " +
                                 std::to_string(lc) + ", semi-left-exact " + std::to_string(sle) + ", inconclusive " +
                                 std::to_string(lc_inconclusive) + ")" + where};
}

// --- criterion 9 -------------------------------------------------------------------------

Result lcc_sanity() {
    bool b2 = check_lcc(*bool2()).passed();
    bool c2 = check_lcc(*chain(2)).passed();
    auto m = check_lcc(*m3());
    bool replay = m.failed() && replay_lcc(*m.witness).failed();
    return {b2 && c2 && replay, std::string("bool-2 ") + (b2 ? "PASS" : "FAIL") + ", 2-chain " + (c2 ? "PASS" : "FAIL") +
                                    ", m3 " + to_string(m.status) + (replay ? " with replayable witness" : "")};
}

// --- criterion 10 ------------------------------------------------------------------------

Result parser_and_reports() {
    int fixed = 0;
    for (const auto& fx : all_fixtures()) {
        auto text = write_reflection(fx.reflection);
        auto once = serialize(read_document(text));
        fixed += once == text && serialize(read_document(once)) == once;
    }
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> byte(0, 255), len(0, 120);
    int crashes = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string s(len(rng), '\0');
        for (auto& ch : s) ch = static_cast<char>(byte(rng));
        try {
            auto r = parse(s);
            if (!r.ok() && r.diagnostics.empty()) ++crashes;
        } catch (...) {
            ++crashes;
        }
    }

    auto dir = std::filesystem::temp_directory_path() / "finitopos-acceptance";
    std::filesystem::create_directories(dir);
    std::vector<Invocation> runs;
    for (const auto& name : fixture_names())
        for (const char* c : {"adjunction", "frobenius", "sle", "stable-units", "exp-ideal", "lcc"}) {
            Invocation inv;
            inv.path = {"check", c};
            inv.fixture = name;
            runs.push_back(inv);
        }
    for (const char* s : {"sle-failure", "pi-witness", "sieve-witness"}) {
        Invocation inv;
        inv.path = {"search", s};
        inv.max_vertices = 3;
        inv.max_edges = 3;
        runs.push_back(inv);
    }
    int witnesses = 0, replayed = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        runs[k].budget = default_budget();
        auto report = make_report(runs[k], execute(runs[k]));
        if (!report.contains("witness")) continue;
        ++witnesses;
        auto path = dir / ("witness-" + std::to_string(k) + ".json");
        std::ofstream(path) << report.dump(2) << "\n";
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        auto r = replay_report(json::parse(ss.str()));
        replayed += r.ok();
    }
    auto n = static_cast<int>(all_fixtures().size());
    return {fixed == n && crashes == 0 && witnesses > 0 && replayed == witnesses,
            std::to_string(fixed) + "/" + std::to_string(n) + " fixture fixed points, " + std::to_string(crashes) +
                " fuzz failures in 10000, " + std::to_string(replayed) + "/" + std::to_string(witnesses) +
                " witness files replay to identical verdict and digest"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        Result (*run)();
        double limit_seconds;  // 0: no runtime requirement
    };
    const std::vector<Criterion> criteria{
        {1, axiom_suites, 1},         {2, kan_chain, 30},          {3, restriction_full_faithful, 0},
        {4, lan_products, 0},         {5, graph_products, 120},    {6, graph_exponentials, 0},
        {7, sle_counterexample, 600}, {8, implication_lattice, 0}, {9, lcc_sanity, 0},
        {10, parser_and_reports, 0}};
    int failed = 0;
    for (const auto& [id, run, limit] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Result o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit > 0 && secs > limit) {
            o.pass = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(limit)) + " s limit";
        }
        std::printf("criterion %2d: %s  %s [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
