#pragma once

#include <string>

#include <json.hpp>

#include "qwalk/certify.hpp"
#include "qwalk/experiment.hpp"

namespace qwalk {

inline constexpr const char* kReportSchema = "qwalk.report/1";
inline constexpr const char* kCertifySchema = "qwalk.certify/1";

nlohmann::json to_json(const QuasirandomnessReport& report);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Aggregate& a);
nlohmann::json to_json(const ExperimentReport& report);

/// Canonical serialization: 2-space indent, sorted keys, trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace qwalk
