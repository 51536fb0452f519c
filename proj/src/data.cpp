#include "lcf/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lcf/rng.hpp"

namespace lcf {

namespace {

struct FeatureGen {
    // Equal-weight two-component Gaussian mixture when two means are given,
    // plain Gaussian otherwise. All direct features have sigma = 2.
    double mean1 = 0.0;
    double mean2 = 0.0;
    bool mixture = false;
    // Derived features: coeff * x1 + N(0, 1) from the same event's x1.
    bool derived = false;
    double coeff = 0.0;
};

FeatureGen feature_gen(const std::string& name, bool signal) {
    static const std::map<std::string, std::pair<FeatureGen, FeatureGen>> table = {
        // {signal, background}
        {"x1", {{-2.0}, {2.0}}},
        {"x2", {{2.0}, {-2.0}}},
        {"x3", {{0.0}, {5.0, -5.0, true}}},
        {"x4", {{5.0, -5.0, true}, {0.0}}},
        {"x5", {{-1.0}, {1.0}}},
        {"x6", {{-3.0}, {3.0}}},
        {"x7", {{-5.0}, {-5.0}}},
        {"x8", {{5.0}, {5.0}}},
        {"x9", {{0, 0, false, true, 0.9}, {0, 0, false, true, 0.9}}},
        {"x10", {{0, 0, false, true, 0.7}, {0, 0, false, true, 0.7}}},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown mock feature " + name);
    return signal ? it->second.first : it->second.second;
}

constexpr double kMockSigma = 2.0;

std::string class_tag(bool signal) { return signal ? "sig" : "bkg"; }

// Plain or mixture column for one class. The stream key carries only the
// seed, feature and class, so every dataset sees identical sample values.
std::vector<double> sample_direct(const std::string& name, bool signal,
                                  std::size_t n, std::uint64_t seed) {
    const FeatureGen g = feature_gen(name, signal);
    rng::NormalSampler sampler(
        rng::substream_seed(seed, "feat:" + name + "|class:" + class_tag(signal)));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.mixture) {
            const double mu = sampler.uniform01() < 0.5 ? g.mean1 : g.mean2;
            out[i] = sampler(mu, kMockSigma);
        } else {
            out[i] = sampler(g.mean1, kMockSigma);
        }
    }
    return out;
}

std::vector<double> sample_derived(const std::string& name, bool signal,
                                   std::span<const double> x1, std::uint64_t seed) {
    const FeatureGen g = feature_gen(name, signal);
    rng::NormalSampler noise(
        rng::substream_seed(seed, "feat:" + name + "|noise|class:" + class_tag(signal)));
    std::vector<double> out(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) out[i] = g.coeff * x1[i] + noise(0.0, 1.0);
    return out;
}

} // namespace

std::optional<MockId> parse_mock_id(std::string_view name) {
    static const std::map<std::string_view, MockId> ids = {
        {"mock1", MockId::mock1}, {"mock2", MockId::mock2}, {"mock3", MockId::mock3},
        {"mock4", MockId::mock4}, {"mock5", MockId::mock5}, {"mock6", MockId::mock6},
    };
    auto it = ids.find(name);
    if (it == ids.end()) return std::nullopt;
    return it->second;
}

const char* to_string(MockId id) {
    switch (id) {
        case MockId::mock1: return "mock1";
        case MockId::mock2: return "mock2";
        case MockId::mock3: return "mock3";
        case MockId::mock4: return "mock4";
        case MockId::mock5: return "mock5";
        case MockId::mock6: return "mock6";
    }
    return "?";
}

const std::vector<std::string>& mock_features(MockId id) {
    static const std::vector<std::string> m1 = {"x1", "x2", "x3", "x4"};
    static const std::vector<std::string> m2 = {"x1", "x5", "x6"};
    static const std::vector<std::string> m3 = {"x1", "x7", "x8"};
    static const std::vector<std::string> m4 = {"x1", "x9", "x10"};
    static const std::vector<std::string> m5 = {"x1", "x2", "x3", "x4", "x5", "x7", "x9"};
    static const std::vector<std::string> m6 = {"x1", "x2", "x7", "x3", "x5", "x4", "x9"};
    switch (id) {
        case MockId::mock1: return m1;
        case MockId::mock2: return m2;
        case MockId::mock3: return m3;
        case MockId::mock4: return m4;
        case MockId::mock5: return m5;
        case MockId::mock6: return m6;
    }
    return m1;
}

double mock_center(const std::string& feature) {
    static const std::map<std::string, double> centers = {
        {"x1", -2.0}, {"x2", 2.0}, {"x3", 0.0}, {"x4", 0.0},  {"x5", -1.0},
        {"x6", -3.0}, {"x7", -5.0}, {"x8", 5.0}, {"x9", -1.8}, {"x10", -1.4},
    };
    auto it = centers.find(feature);
    if (it == centers.end()) throw std::invalid_argument("no center for feature " + feature);
    return it->second;
}

std::vector<double> mock_centers(MockId id) {
    std::vector<double> out;
    for (const auto& f : mock_features(id)) out.push_back(mock_center(f));
    return out;
}

std::optional<double> diboson_center(const std::string& observable) {
    // Match on a lowercase alphanumeric squeeze of the column name so common
    // spellings (M_jet, m-jet, ...) all resolve.
    std::string key;
    for (char c : observable)
        if (std::isalnum(static_cast<unsigned char>(c)))
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    static const std::map<std::string, double> centers = {
        {"mjet", 80.0},   {"c2beta1", 0.15}, {"c2beta2", 0.025}, {"d2beta1", 2.0},
        {"d2beta2", 2.0}, {"tau21beta1", 0.3}, {"c2b1", 0.15},   {"c2b2", 0.025},
        {"d2b1", 2.0},    {"d2b2", 2.0},     {"tau21b1", 0.3},
    };
    auto it = centers.find(key);
    if (it == centers.end()) return std::nullopt;
    return it->second;
}

EventTable gen_mock(MockId id, std::size_t n_events, std::uint64_t seed) {
    if (n_events == 0 || n_events % 2 != 0)
        throw std::invalid_argument("gen_mock: n_events must be even and positive");
    const auto& names = mock_features(id);
    const std::size_t f = names.size();
    const std::size_t n_class = n_events / 2;

    const bool needs_x1 =
        std::any_of(names.begin(), names.end(), [](const std::string& s) {
            return s == "x1" || s == "x9" || s == "x10";
        });

    // Signal block first, background second; rows are shuffled afterwards.
    std::vector<double> block(n_events * f);
    for (int cls = 1; cls >= 0; --cls) {
        const bool signal = cls == 1;
        const std::size_t row0 = signal ? 0 : n_class;
        std::vector<double> x1;
        if (needs_x1) x1 = sample_direct("x1", signal, n_class, seed);
        for (std::size_t j = 0; j < f; ++j) {
            std::vector<double> col;
            if (names[j] == "x1")
                col = x1;
            else if (names[j] == "x9" || names[j] == "x10")
                col = sample_derived(names[j], signal, x1, seed);
            else
                col = sample_direct(names[j], signal, n_class, seed);
            for (std::size_t i = 0; i < n_class; ++i) block[(row0 + i) * f + j] = col[i];
        }
    }

    rng::Engine shuffle_eng(rng::substream_seed(seed, "rows"));
    const std::vector<std::size_t> perm = rng::permutation(n_events, shuffle_eng);

    EventTable out;
    out.feature_names = names;
    out.values.resize(n_events * f);
    out.labels.resize(n_events);
    for (std::size_t r = 0; r < n_events; ++r) {
        const std::size_t src = perm[r];
        for (std::size_t j = 0; j < f; ++j) out.values[r * f + j] = block[src * f + j];
        out.labels[r] = src < n_class ? 1 : 0;
    }
    out.provenance = std::string("gen:") + to_string(id) + ":seed=" + std::to_string(seed) +
                     ":n=" + std::to_string(n_events);
    return out;
}

double percentile(std::span<const double> values, double pct) {
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (pct < 0.0 || pct > 100.0) throw std::invalid_argument("percentile: pct outside [0,100]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

ClipResult percentile_clip(const EventTable& table, double lo_pct, double hi_pct) {
    if (!(lo_pct < hi_pct)) throw std::invalid_argument("percentile_clip: lo must be < hi");
    const std::size_t f = table.cols();
    ClipResult result;
    result.bounds.lo.resize(f);
    result.bounds.hi.resize(f);

    std::vector<double> column(table.rows());
    for (std::size_t j = 0; j < f; ++j) {
        for (std::size_t i = 0; i < table.rows(); ++i) column[i] = table.at(i, j);
        result.bounds.lo[j] = percentile(column, lo_pct);
        result.bounds.hi[j] = percentile(column, hi_pct);
    }

    std::vector<std::size_t> keep;
    keep.reserve(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        bool inside = true;
        for (std::size_t j = 0; j < f && inside; ++j) {
            const double v = table.at(i, j);
            inside = v >= result.bounds.lo[j] && v <= result.bounds.hi[j];
        }
        if (inside) keep.push_back(i);
    }
    if (keep.empty()) throw std::runtime_error("percentile_clip: no events survive");

    result.dropped = table.rows() - keep.size();
    result.table = select_rows(table, keep);
    result.table.provenance = table.provenance + "|clip(" + std::to_string(lo_pct) + "," +
                              std::to_string(hi_pct) + ")";
    return result;
}

SplitResult split(const EventTable& table, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: fraction must lie in (0, 1)");

    std::vector<std::size_t> train_idx, test_idx;
    for (int cls = 1; cls >= 0; --cls) {
        std::vector<std::size_t> class_rows;
        for (std::size_t i = 0; i < table.rows(); ++i)
            if (table.labels[i] == cls) class_rows.push_back(i);
        rng::Engine eng(rng::substream_seed(
            seed, std::string("split|class:") + (cls ? "sig" : "bkg")));
        const auto perm = rng::permutation(class_rows.size(), eng);
        const auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(class_rows.size())));
        for (std::size_t k = 0; k < class_rows.size(); ++k) {
            if (k < n_train)
                train_idx.push_back(class_rows[perm[k]]);
            else
                test_idx.push_back(class_rows[perm[k]]);
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitResult out;
    out.train = select_rows(table, train_idx);
    out.train.provenance = table.provenance + "|split:train";
    out.test = select_rows(table, test_idx);
    out.test.provenance = table.provenance + "|split:test";
    return out;
}

NormalizationStats fit_normalizer(const EventTable& train_raw) {
    if (train_raw.rows() == 0) throw std::invalid_argument("fit_normalizer: empty table");
    if (train_raw.normalized)
        throw std::invalid_argument("fit_normalizer: table already normalized");
    const std::size_t f = train_raw.cols();
    const double n = static_cast<double>(train_raw.rows());

    NormalizationStats stats;
    stats.mean.assign(f, 0.0);
    stats.stddev.assign(f, 0.0);
    stats.source = train_raw.provenance;
    for (std::size_t i = 0; i < train_raw.rows(); ++i)
        for (std::size_t j = 0; j < f; ++j) stats.mean[j] += train_raw.at(i, j);
    for (std::size_t j = 0; j < f; ++j) stats.mean[j] /= n;
    for (std::size_t i = 0; i < train_raw.rows(); ++i)
        for (std::size_t j = 0; j < f; ++j) {
            const double d = train_raw.at(i, j) - stats.mean[j];
            stats.stddev[j] += d * d;
        }
    for (std::size_t j = 0; j < f; ++j) {
        stats.stddev[j] = std::sqrt(stats.stddev[j] / n);
        if (stats.stddev[j] < kMinFeatureStd)
            throw std::invalid_argument("fit_normalizer: feature '" +
                                        train_raw.feature_names[j] +
                                        "' is (near-)constant, unusable as a cut");
    }
    return stats;
}

EventTable apply_normalizer(const EventTable& table, const NormalizationStats& stats) {
    if (table.cols() != stats.mean.size())
        throw std::invalid_argument("apply_normalizer: stats/table feature count mismatch");
    if (table.normalized)
        throw std::invalid_argument("apply_normalizer: table already normalized");
    EventTable out = table;
    const std::size_t f = table.cols();
    for (std::size_t i = 0; i < table.rows(); ++i)
        for (std::size_t j = 0; j < f; ++j)
            out.at(i, j) = (table.at(i, j) - stats.mean[j]) / stats.stddev[j];
    out.normalized = true;
    out.provenance = table.provenance + "|normalized";
    return out;
}

} // namespace lcf
