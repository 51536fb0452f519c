#pragma once

#include <string>

#include <json.hpp>

#include "lcf/extract.hpp"
#include "lcf/metrics.hpp"
#include "lcf/model.hpp"

namespace lcf {

// Model <-> JSON. Doubles use nlohmann's shortest round-trip representation,
// so save/load/save is byte-identical.
nlohmann::json model_to_json(const LcfModel& model);
LcfModel model_from_json(const nlohmann::json& j);
void save_model(const LcfModel& model, const std::string& path);
LcfModel load_model(const std::string& path);

// Cut-flow report <-> JSON. Infinite interval ends serialize as null.
nlohmann::json report_to_json(const CutFlowReport& report);
CutFlowReport report_from_json(const nlohmann::json& j);
void save_report(const CutFlowReport& report, const std::string& path);
CutFlowReport load_report(const std::string& path);

nlohmann::json metrics_to_json(const MetricsReport& report);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

} // namespace lcf
