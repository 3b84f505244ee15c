#include "finitopos/verdict.hpp"

#include <stdexcept>

namespace finitopos {

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

Status status_from_string(const std::string& s) {
    if (s == "PASS") return Status::Pass;
    if (s == "FAIL") return Status::Fail;
    if (s == "INCONCLUSIVE") return Status::Inconclusive;
    throw std::invalid_argument("unknown verdict status '" + s + "'");
}

std::string Verdict::summary() const {
    std::string out = property + ": " + to_string(status);
    if (status == Status::Pass && !bounds.empty()) out += " up to bound " + bounds.dump();
    if (!note.empty()) out += " (" + note + ")";
    return out;
}

json to_json(const Verdict& v) {
    json j;
    j["property"] = v.property;
    j["status"] = to_string(v.status);
    j["bounds"] = v.bounds;
    j["stats"] = v.stats;
    if (v.witness) j["witness"] = *v.witness;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.property = j.at("property").get<std::string>();
    v.status = status_from_string(j.at("status").get<std::string>());
    v.bounds = j.value("bounds", json::object());
    if (j.contains("stats")) v.stats = j.at("stats").get<std::map<std::string, std::int64_t>>();
    if (j.contains("witness")) v.witness = j.at("witness");
    v.note = j.value("note", std::string{});
    return v;
}

Verdict combine(std::string property, const std::vector<Verdict>& parts) {
    Verdict out;
    out.property = std::move(property);
    out.status = Status::Pass;
    for (const auto& p : parts) {
        for (const auto& [k, n] : p.stats) out.stats[k] += n;
        if (!p.bounds.empty()) out.bounds[p.property] = p.bounds;
        if (p.status == Status::Fail && out.status != Status::Fail) {
            out.status = Status::Fail;
            out.witness = p.witness;
            out.note = p.property + (p.note.empty() ? "" : ": " + p.note);
        } else if (p.status == Status::Inconclusive && out.status == Status::Pass) {
            out.status = Status::Inconclusive;
            out.note = p.property + (p.note.empty() ? "" : ": " + p.note);
        }
    }
    return out;
}

}  // namespace finitopos
