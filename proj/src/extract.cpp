#include "lcf/extract.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace lcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval half_line(const SideCut& cut) {
    if (cut.direction > 0) return {cut.boundary_raw, kInf};
    return {-kInf, cut.boundary_raw};
}

CutCase classify(const std::vector<Interval>& intervals) {
    if (intervals.size() == 2) return CutCase::edge;
    const Interval& iv = intervals.front();
    const bool lo_open = std::isinf(iv.lo);
    const bool hi_open = std::isinf(iv.hi);
    if (lo_open && hi_open) return CutCase::pass_all;
    if (lo_open) return CutCase::left;
    if (hi_open) return CutCase::right;
    return CutCase::middle;
}

CutRegion make_region(std::vector<Interval> intervals) {
    CutRegion region;
    region.label = classify(intervals);
    region.intervals = std::move(intervals);
    return region;
}

// Union of two half-lines (or full lines for degenerate sides).
CutRegion union_region(const Interval& a, const Interval& b) {
    const bool a_full = std::isinf(a.lo) && std::isinf(a.hi);
    const bool b_full = std::isinf(b.lo) && std::isinf(b.hi);
    if (a_full || b_full) return make_region({{-kInf, kInf}});

    const bool a_left = std::isinf(a.lo);
    const bool b_left = std::isinf(b.lo);
    if (a_left && b_left) return make_region({{-kInf, std::max(a.hi, b.hi)}});
    if (!a_left && !b_left) return make_region({{std::min(a.lo, b.lo), kInf}});

    const Interval& left = a_left ? a : b;   // (-inf, hi)
    const Interval& right = a_left ? b : a;  // (lo, +inf)
    if (right.lo < left.hi) return make_region({{-kInf, kInf}});
    return make_region({{-kInf, left.hi}, {right.lo, kInf}});
}

} // namespace

const char* to_string(CutCase c) {
    switch (c) {
        case CutCase::left: return "left";
        case CutCase::right: return "right";
        case CutCase::middle: return "middle";
        case CutCase::edge: return "edge";
        case CutCase::pass_all: return "pass_all";
    }
    return "?";
}

SideCut side_boundary(double w, double b, double score, double t, double mean,
                      double stddev) {
    SideCut cut;
    cut.direction = w >= 0.0 ? +1 : -1;
    const double ws = w * score;
    if (std::abs(ws) < kDegenerateWeight) {
        cut.degenerate = true;
        cut.boundary_raw = std::numeric_limits<double>::quiet_NaN();
        return cut;
    }
    const double boundary_norm = (logit(t) + b) / ws;
    cut.boundary_raw = boundary_norm * stddev + mean;
    return cut;
}

CombineResult combine(SideCut lower, SideCut upper, double center_raw) {
    // A cut is invalid when its boundary crosses (or sits on) the center.
    lower.valid = !lower.degenerate && lower.boundary_raw < center_raw;
    upper.valid = !upper.degenerate && upper.boundary_raw > center_raw;

    CombineResult out;
    out.lower = lower;
    out.upper = upper;

    if (lower.valid && upper.valid) {
        if (lower.direction == upper.direction) {
            // Aligned directions: intersection of the two half-lines.
            if (lower.direction > 0)
                out.region = make_region({{std::max(lower.boundary_raw, upper.boundary_raw), kInf}});
            else
                out.region = make_region({{-kInf, std::min(lower.boundary_raw, upper.boundary_raw)}});
        } else if (lower.direction > 0) {
            // lower keeps above, upper keeps below: middle interval.
            out.region = make_region({{lower.boundary_raw, upper.boundary_raw}});
        } else {
            // lower keeps below, upper keeps above: edge pair.
            out.region = make_region({{-kInf, lower.boundary_raw}, {upper.boundary_raw, kInf}});
        }
    } else if (lower.valid || upper.valid) {
        out.region = make_region({half_line(lower.valid ? lower : upper)});
    } else {
        // Both invalid: union of each side's own range. A degenerate (flat)
        // side keeps everything, so zero importance decays to pass_all.
        const Interval a = lower.degenerate ? Interval{-kInf, kInf} : half_line(lower);
        const Interval b = upper.degenerate ? Interval{-kInf, kInf} : half_line(upper);
        out.region = union_region(a, b);
    }
    return out;
}

CutFlowReport build_report(const LcfModel& model, double min_importance_ratio) {
    const std::size_t f = model.feature_count();
    const std::vector<double> scores = model.importance.scores();
    const double baseline = min_importance_ratio / static_cast<double>(f);

    CutFlowReport report;
    report.threshold = model.threshold;
    report.min_importance_ratio = min_importance_ratio;
    report.features.resize(f);
    for (std::size_t j = 0; j < f; ++j) {
        const auto& p = model.params[j];
        ReportFeature& rf = report.features[j];
        rf.name = model.feature_names[j];
        rf.mean = model.norm.mean[j];
        rf.stddev = model.norm.stddev[j];
        rf.center_norm = p.center_norm;
        rf.center_raw = p.center_norm * rf.stddev + rf.mean;
        rf.importance = scores[j];
        rf.retained = scores[j] >= baseline;

        const SideCut lower = side_boundary(p.w_lower, p.b_lower, scores[j], model.threshold,
                                            rf.mean, rf.stddev);
        const SideCut upper = side_boundary(p.w_upper, p.b_upper, scores[j], model.threshold,
                                            rf.mean, rf.stddev);
        CombineResult combined = combine(lower, upper, rf.center_raw);
        rf.lower = combined.lower;
        rf.upper = combined.upper;
        rf.region = std::move(combined.region);
    }
    return report;
}

std::vector<std::uint8_t> apply_report(const EventTable& events_raw,
                                       const CutFlowReport& report) {
    const std::size_t f = report.features.size();
    if (events_raw.cols() != f)
        throw std::invalid_argument("apply_report: event/report feature count mismatch");
    for (std::size_t j = 0; j < f; ++j)
        if (events_raw.feature_names[j] != report.features[j].name)
            throw std::invalid_argument("apply_report: column '" + events_raw.feature_names[j] +
                                        "' does not match report feature '" +
                                        report.features[j].name + "'");
    if (events_raw.normalized)
        throw std::invalid_argument("apply_report: expects raw (unnormalized) events");

    std::vector<std::uint8_t> preds(events_raw.rows(), 1);
    for (std::size_t i = 0; i < events_raw.rows(); ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            if (!report.features[j].retained) continue;
            if (!report.features[j].region.contains(events_raw.at(i, j))) {
                preds[i] = 0;
                break;
            }
        }
    }
    return preds;
}

std::vector<std::string> write_plot_csvs(const CutFlowReport& report,
                                         const EventTable& events_raw,
                                         const std::string& out_dir, int bins) {
    if (bins < 1) throw std::invalid_argument("write_plot_csvs: bins must be >= 1");
    const std::size_t f = report.features.size();
    if (events_raw.cols() != f)
        throw std::invalid_argument("write_plot_csvs: event/report feature count mismatch");
    std::filesystem::create_directories(out_dir);

    std::vector<std::string> paths;
    char num[40];
    for (std::size_t j = 0; j < f; ++j) {
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < events_raw.rows(); ++i) {
            lo = std::min(lo, events_raw.at(i, j));
            hi = std::max(hi, events_raw.at(i, j));
        }
        if (!(lo < hi)) hi = lo + 1.0;
        const double width = (hi - lo) / bins;

        std::vector<std::size_t> sig(static_cast<std::size_t>(bins), 0);
        std::vector<std::size_t> bkg(static_cast<std::size_t>(bins), 0);
        for (std::size_t i = 0; i < events_raw.rows(); ++i) {
            auto bin = static_cast<std::size_t>((events_raw.at(i, j) - lo) / width);
            bin = std::min(bin, static_cast<std::size_t>(bins - 1));
            (events_raw.labels[i] ? sig : bkg)[bin] += 1;
        }

        std::string name;
        for (char c : report.features[j].name)
            name.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
        const std::string path = out_dir + "/plot_" + name + ".csv";
        std::ofstream file(path);
        if (!file.is_open()) throw std::runtime_error("cannot write " + path);
        file << "kind,lo,hi,signal,background\n";
        for (int b = 0; b < bins; ++b) {
            std::snprintf(num, sizeof(num), "%.17g", lo + b * width);
            file << "bin," << num << ',';
            std::snprintf(num, sizeof(num), "%.17g", b + 1 == bins ? hi : lo + (b + 1) * width);
            file << num << ',' << sig[static_cast<std::size_t>(b)] << ','
                 << bkg[static_cast<std::size_t>(b)] << "\n";
        }
        for (const auto& iv : report.features[j].region.intervals) {
            file << "region,";
            if (std::isinf(iv.lo))
                file << "-inf,";
            else {
                std::snprintf(num, sizeof(num), "%.17g", iv.lo);
                file << num << ',';
            }
            if (std::isinf(iv.hi))
                file << "inf,,\n";
            else {
                std::snprintf(num, sizeof(num), "%.17g", iv.hi);
                file << num << ",,\n";
            }
        }
        if (!file.good()) throw std::runtime_error("write failed for " + path);
        paths.push_back(path);
    }
    return paths;
}

} // namespace lcf
