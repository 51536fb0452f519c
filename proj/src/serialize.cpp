#include "lcf/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace lcf {

using nlohmann::json;

void write_json(const json& j, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot write " + path);
    file << j.dump(2) << "\n";
    if (!file.good()) throw std::runtime_error("write failed for " + path);
}

json read_json(const std::string& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

json model_to_json(const LcfModel& model) {
    json features = json::array();
    for (std::size_t j = 0; j < model.feature_count(); ++j) {
        const auto& p = model.params[j];
        features.push_back({{"name", model.feature_names[j]},
                            {"w_lower", p.w_lower},
                            {"b_lower", p.b_lower},
                            {"w_upper", p.w_upper},
                            {"b_upper", p.b_upper},
                            {"center_norm", p.center_norm}});
    }
    return json{{"format", "lcf-model"},
                {"version", 1},
                {"features", features},
                {"importance_logits", model.importance.logits},
                {"normalization",
                 {{"mean", model.norm.mean},
                  {"std", model.norm.stddev},
                  {"source", model.norm.source}}},
                {"threshold", model.threshold},
                {"seed", model.seed}};
}

LcfModel model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "lcf-model")
        throw std::runtime_error("not an lcf-model document");
    LcfModel model;
    for (const auto& fj : j.at("features")) {
        model.feature_names.push_back(fj.at("name").get<std::string>());
        FeatureCutParams p;
        p.w_lower = fj.at("w_lower").get<double>();
        p.b_lower = fj.at("b_lower").get<double>();
        p.w_upper = fj.at("w_upper").get<double>();
        p.b_upper = fj.at("b_upper").get<double>();
        p.center_norm = fj.at("center_norm").get<double>();
        model.params.push_back(p);
    }
    model.importance.logits = j.at("importance_logits").get<std::vector<double>>();
    const auto& nj = j.at("normalization");
    model.norm.mean = nj.at("mean").get<std::vector<double>>();
    model.norm.stddev = nj.at("std").get<std::vector<double>>();
    model.norm.source = nj.value("source", "");
    model.threshold = j.at("threshold").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();

    const std::size_t f = model.feature_names.size();
    if (model.importance.logits.size() != f || model.norm.mean.size() != f ||
        model.norm.stddev.size() != f)
        throw std::runtime_error("lcf-model document has inconsistent feature counts");
    return model;
}

void save_model(const LcfModel& model, const std::string& path) {
    write_json(model_to_json(model), path);
}

LcfModel load_model(const std::string& path) { return model_from_json(read_json(path)); }

namespace {

json side_to_json(const SideCut& cut) {
    json j{{"direction", cut.direction},
           {"valid", cut.valid},
           {"degenerate", cut.degenerate}};
    if (cut.degenerate || !std::isfinite(cut.boundary_raw))
        j["boundary"] = nullptr;
    else
        j["boundary"] = cut.boundary_raw;
    return j;
}

SideCut side_from_json(const json& j) {
    SideCut cut;
    cut.direction = j.at("direction").get<int>();
    cut.valid = j.at("valid").get<bool>();
    cut.degenerate = j.at("degenerate").get<bool>();
    cut.boundary_raw = j.at("boundary").is_null()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : j.at("boundary").get<double>();
    return cut;
}

json region_to_json(const CutRegion& region) {
    json intervals = json::array();
    for (const auto& iv : region.intervals) {
        json pair = json::array();
        pair.push_back(std::isinf(iv.lo) ? json(nullptr) : json(iv.lo));
        pair.push_back(std::isinf(iv.hi) ? json(nullptr) : json(iv.hi));
        intervals.push_back(pair);
    }
    return intervals;
}

CutRegion region_from_json(const json& intervals, const std::string& label) {
    CutRegion region;
    for (const auto& pair : intervals) {
        Interval iv{};
        iv.lo = pair.at(0).is_null() ? -std::numeric_limits<double>::infinity()
                                     : pair.at(0).get<double>();
        iv.hi = pair.at(1).is_null() ? std::numeric_limits<double>::infinity()
                                     : pair.at(1).get<double>();
        region.intervals.push_back(iv);
    }
    if (label == "left") region.label = CutCase::left;
    else if (label == "right") region.label = CutCase::right;
    else if (label == "middle") region.label = CutCase::middle;
    else if (label == "edge") region.label = CutCase::edge;
    else if (label == "pass_all") region.label = CutCase::pass_all;
    else throw std::runtime_error("unknown region case '" + label + "'");
    return region;
}

} // namespace

json report_to_json(const CutFlowReport& report) {
    json features = json::array();
    for (const auto& rf : report.features) {
        features.push_back({{"name", rf.name},
                            {"lower", side_to_json(rf.lower)},
                            {"upper", side_to_json(rf.upper)},
                            {"region", region_to_json(rf.region)},
                            {"case", to_string(rf.region.label)},
                            {"importance", rf.importance},
                            {"retained", rf.retained},
                            {"center", rf.center_raw},
                            {"center_norm", rf.center_norm},
                            {"mean", rf.mean},
                            {"std", rf.stddev}});
    }
    return json{{"format", "lcf-report"},
                {"version", 1},
                {"threshold", report.threshold},
                {"min_importance_ratio", report.min_importance_ratio},
                {"features", features}};
}

CutFlowReport report_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "lcf-report")
        throw std::runtime_error("not an lcf-report document");
    CutFlowReport report;
    report.threshold = j.at("threshold").get<double>();
    report.min_importance_ratio = j.at("min_importance_ratio").get<double>();
    for (const auto& fj : j.at("features")) {
        ReportFeature rf;
        rf.name = fj.at("name").get<std::string>();
        rf.lower = side_from_json(fj.at("lower"));
        rf.upper = side_from_json(fj.at("upper"));
        rf.region = region_from_json(fj.at("region"), fj.at("case").get<std::string>());
        rf.importance = fj.at("importance").get<double>();
        rf.retained = fj.at("retained").get<bool>();
        rf.center_raw = fj.at("center").get<double>();
        rf.center_norm = fj.at("center_norm").get<double>();
        rf.mean = fj.at("mean").get<double>();
        rf.stddev = fj.at("std").get<double>();
        report.features.push_back(std::move(rf));
    }
    return report;
}

void save_report(const CutFlowReport& report, const std::string& path) {
    write_json(report_to_json(report), path);
}

CutFlowReport load_report(const std::string& path) {
    return report_from_json(read_json(path));
}

json metrics_to_json(const MetricsReport& r) {
    json j{{"tp", r.counts.tp},
           {"fp", r.counts.fp},
           {"tn", r.counts.tn},
           {"fn", r.counts.fn},
           {"accuracy", r.accuracy},
           {"precision", r.precision},
           {"eps_s", r.eps_s},
           {"eps_b", r.eps_b}};
    if (std::isinf(r.significance))
        j["significance"] = "+inf";
    else
        j["significance"] = r.significance;
    return j;
}

} // namespace lcf
