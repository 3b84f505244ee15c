#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace finitopos {

using json = nlohmann::json;

enum class Status { Pass, Fail, Inconclusive };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

/// Outcome of a property check. A FAIL always carries a witness; a PASS
/// records the bounds of the search space it exhausted.
struct Verdict {
    std::string property;
    Status status = Status::Pass;
    json bounds = json::object();
    std::optional<json> witness;
    std::map<std::string, std::int64_t> stats;
    std::string note;

    bool passed() const noexcept { return status == Status::Pass; }
    bool failed() const noexcept { return status == Status::Fail; }

    /// "PASS up to bound k" style summary; never an unqualified PASS when bounds are set.
    std::string summary() const;
};

json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j);

/// Combines sub-verdicts: FAIL dominates INCONCLUSIVE dominates PASS. The first
/// failing sub-verdict (in argument order) supplies the witness.
Verdict combine(std::string property, const std::vector<Verdict>& parts);

}  // namespace finitopos
