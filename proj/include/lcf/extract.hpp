#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcf/event_table.hpp"
#include "lcf/model.hpp"

namespace lcf {

// Below this |w * score| the sigmoid is flat and no boundary exists.
inline constexpr double kDegenerateWeight = 1e-12;

// One side of a feature's cut, denormalized to raw units. direction +1 keeps
// x above the boundary, -1 below. `valid` is only meaningful after combine().
struct SideCut {
    double boundary_raw = 0.0;
    int direction = +1;
    bool valid = false;
    bool degenerate = false;
};

// boundary_norm = (logit(t) + b) / (w * score); raw = norm * std + mean.
// The importance score enters because the trained cut acts on score * x.
SideCut side_boundary(double w, double b, double score, double t, double mean,
                      double stddev);

// Open interval; lo/hi may be +-infinity.
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return lo < x && x < hi; }
};

enum class CutCase { left, right, middle, edge, pass_all };
const char* to_string(CutCase c);

struct CutRegion {
    std::vector<Interval> intervals; // disjoint, sorted
    CutCase label = CutCase::pass_all;

    bool contains(double x) const {
        for (const auto& iv : intervals)
            if (iv.contains(x)) return true;
        return false;
    }
};

struct CombineResult {
    SideCut lower;
    SideCut upper;
    CutRegion region;
};

// Sets validity (a cut is invalid if its boundary crosses the center, with
// the at-center case invalid) and applies the four-case combination rules.
// Both-invalid sides union their own half-lines; a degenerate side passes
// everything, so a zero-importance feature degrades to pass_all.
CombineResult combine(SideCut lower, SideCut upper, double center_raw);

struct ReportFeature {
    std::string name;
    SideCut lower;
    SideCut upper;
    CutRegion region;
    double importance = 0.0;
    bool retained = true;
    double center_raw = 0.0;
    double center_norm = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

// Self-contained, human-readable final artifact: per-feature cut regions in
// raw units plus everything needed to apply them to new events.
struct CutFlowReport {
    std::vector<ReportFeature> features;
    double threshold = 0.5;
    double min_importance_ratio = 0.05;
};

// retained <=> score >= min_importance_ratio * (1 / F).
CutFlowReport build_report(const LcfModel& model, double min_importance_ratio = 0.05);

// 1 iff every retained feature's raw value lies inside its region; features
// below the importance baseline are skipped entirely.
std::vector<std::uint8_t> apply_report(const EventTable& events_raw,
                                       const CutFlowReport& report);

// Per feature, writes <out_dir>/plot_<name>.csv with 50 histogram bins
// (signal/background counts over the data range) followed by the region
// intervals, enough to redraw distribution-plus-cut figures.
std::vector<std::string> write_plot_csvs(const CutFlowReport& report,
                                         const EventTable& events_raw,
                                         const std::string& out_dir, int bins = 50);

} // namespace lcf
