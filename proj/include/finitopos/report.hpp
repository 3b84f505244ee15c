#pragma once

// Command execution, JSON reports, and replay.
//
// A report is {schema_version, command, bounds, verdict, witness?,
// corpus_stats, result?, digest}. The digest is the SHA-256 of the compact
// serialization of every other field, with object keys sorted. The "command"
// field embeds every input (fixture name or DSL text), so a report replays
// without the files it was produced from.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finitopos/verdict.hpp"

namespace finitopos {

inline constexpr int kSchemaVersion = 1;

struct Invocation {
    std::vector<std::string> path;               // e.g. {"check", "sle"}
    std::optional<std::string> fixture;
    std::string document;                        // concatenated DSL input
    std::map<std::string, std::string> names;    // role -> declaration name
    std::vector<std::string> presheaves;         // ordered presheaf operands
    std::vector<std::string> maps;               // ordered map operands
    int bound = 2;
    int max_vertices = 4;
    int max_edges = 8;
    int max_elements = 3;
    std::uint64_t budget = 0;                    // 0: default_budget()
    int jobs = 1;
    bool fast = false;
    bool graphs = false;                         // exp-ideal over reflexive graphs
};

json to_json(const Invocation& inv);
Invocation invocation_from_json(const json& j);

struct Outcome {
    Verdict verdict;
    json corpus_stats = json::object();
    std::optional<json> result;                  // computed objects (kan, exp, pi)
};

/// Runs a subcommand. Throws InvalidData / ParseError for bad input and
/// std::invalid_argument for an unknown subcommand.
Outcome execute(const Invocation& inv);

json make_report(const Invocation& inv, const Outcome& out);
/// SHA-256 hex digest of the report without its "digest" field.
std::string report_digest(const json& report);

/// Checks a witness by the independent re-verifier for its kind. Returns
/// nullopt for witness kinds that have none.
std::optional<Verdict> replay_witness(const json& witness);

struct ReplayResult {
    bool digest_matches = false;     // stored digest equals the stored content's
    bool verdict_matches = false;    // re-execution gives the identical verdict
    bool report_matches = false;     // rebuilt report has the identical digest
    bool independent_agrees = true;  // re-verifier status equals the stored status
    std::optional<Verdict> independent;
    json recomputed;                 // the rebuilt report
    bool ok() const { return digest_matches && verdict_matches && report_matches && independent_agrees; }
};

/// Verifies the digest, re-executes the embedded command, and runs the
/// independent re-verifier on the witness when there is one.
ReplayResult replay_report(const json& report);

}  // namespace finitopos
