#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace pivar {

using Json = nlohmann::json;

enum class Verdict { Pass, Fail, Inconclusive };

inline Json verdict_to_json(Verdict v) {
    switch (v) {
        case Verdict::Pass: return Json(true);
        case Verdict::Fail: return Json(false);
        default: return Json("inconclusive");
    }
}

/// Structured outcome of a single check: verdict, invariants, witnesses.
struct VerificationReport {
    std::string check;
    Verdict verdict = Verdict::Pass;
    Json data = Json::object();

    bool passed() const { return verdict == Verdict::Pass; }

    static VerificationReport pass(std::string name, Json data = Json::object()) {
        return {std::move(name), Verdict::Pass, std::move(data)};
    }
    static VerificationReport fail(std::string name, Json witness) {
        VerificationReport r{std::move(name), Verdict::Fail, Json::object()};
        r.data["witness"] = std::move(witness);
        return r;
    }
    static VerificationReport inconclusive(std::string name, Json data) {
        return {std::move(name), Verdict::Inconclusive, std::move(data)};
    }

    Json to_json() const {
        Json j = data;
        j["check"] = check;
        j["verdict"] = verdict_to_json(verdict);
        return j;
    }
};

/// Full output of one CLI run or suite: deterministic, byte-identical for
/// identical configuration.
struct ReportDocument {
    std::string tool_version;
    Json config = Json::object();
    std::vector<VerificationReport> reports;

    bool overall() const {
        for (const auto& r : reports)
            if (r.verdict == Verdict::Fail) return false;
        return true;
    }

    Json to_json() const {
        Json j;
        j["tool_version"] = tool_version;
        j["config"] = config;
        Json list = Json::array();
        for (const auto& r : reports) list.push_back(r.to_json());
        j["reports"] = list;
        j["overall"] = overall();
        return j;
    }
};

inline constexpr const char* kToolVersion = "pivar 0.1.0";

}  // namespace pivar
