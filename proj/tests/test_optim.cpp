#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "lcf/data.hpp"
#include "lcf/optim.hpp"
#include "lcf/rng.hpp"
#include "test_support.hpp"

using namespace lcf;
using namespace lcf::testing;

namespace {

GradientSet zero_grads(std::size_t f) {
    GradientSet g;
    g.d_w_lower.assign(f, 0.0);
    g.d_b_lower.assign(f, 0.0);
    g.d_w_upper.assign(f, 0.0);
    g.d_b_upper.assign(f, 0.0);
    g.d_logits.assign(f, 0.0);
    return g;
}

// One-feature signal/background separation fixture (signal low, background
// high), raw units, for small end-to-end trainings.
EventTable gaussian_fixture(std::size_t n_per_class, std::uint64_t seed) {
    rng::NormalSampler sig(rng::substream_seed(seed, "fixture-sig"));
    rng::NormalSampler bkg(rng::substream_seed(seed, "fixture-bkg"));
    EventTable t;
    t.feature_names = {"x"};
    for (std::size_t i = 0; i < n_per_class; ++i) {
        t.values.push_back(sig(-2.0, 2.0));
        t.labels.push_back(1);
        t.values.push_back(bkg(2.0, 2.0));
        t.labels.push_back(0);
    }
    t.provenance = "fixture";
    return t;
}

} // namespace

TEST_CASE("adam_step with zero gradients leaves parameters unchanged") {
    auto model = make_model(2);
    const auto before = model;
    auto state = make_adam_state(2);
    TrainConfig cfg;
    adam_step(model, zero_grads(2), state, cfg);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(model.params[j].w_lower == before.params[j].w_lower);
        CHECK(model.params[j].b_lower == before.params[j].b_lower);
        CHECK(model.importance.logits[j] == before.importance.logits[j]);
    }
    CHECK(state.step == 1);
}

TEST_CASE("first Adam step moves by about lr * sign(g)") {
    auto model = make_model(1);
    auto state = make_adam_state(1);
    TrainConfig cfg;
    auto g = zero_grads(1);
    g.d_w_lower[0] = 0.5;
    g.d_b_upper[0] = -0.03;
    const double w_before = model.params[0].w_lower;
    const double b_before = model.params[0].b_upper;
    adam_step(model, g, state, cfg);
    // bias-corrected first step: lr * g / (|g| + eps)
    CHECK(model.params[0].w_lower ==
          doctest::Approx(w_before - cfg.learning_rate).epsilon(1e-6));
    CHECK(model.params[0].b_upper ==
          doctest::Approx(b_before + cfg.learning_rate).epsilon(1e-6));
}

TEST_CASE("repeated identical Adam calls are deterministic") {
    auto run = []() {
        auto model = make_model(2);
        auto state = make_adam_state(2);
        TrainConfig cfg;
        auto g = zero_grads(2);
        g.d_w_lower = {0.2, -0.1};
        g.d_logits = {0.05, -0.05};
        for (int i = 0; i < 10; ++i) adam_step(model, g, state, cfg);
        return model;
    };
    const auto a = run();
    const auto b = run();
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(a.params[j].w_lower == b.params[j].w_lower);
        CHECK(a.importance.logits[j] == b.importance.logits[j]);
    }
}

TEST_CASE("non-finite gradients abort with the parameter name") {
    auto model = make_model(2);
    auto state = make_adam_state(2);
    TrainConfig cfg;
    auto g = zero_grads(2);
    g.d_w_upper[1] = std::nan("");
    bool threw = false;
    try {
        adam_step(model, g, state, cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("w_upper[1]") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("train validates its configuration") {
    const auto table = gaussian_fixture(50, 7);
    const std::vector<double> centers = {-2.0};
    TrainConfig cfg;
    SUBCASE("epochs = 0 rejected") {
        cfg.epochs = 0;
        CHECK_THROWS_AS((void)train(table, cfg, centers), std::invalid_argument);
    }
    SUBCASE("batch_size = 0 rejected") {
        cfg.batch_size = 0;
        CHECK_THROWS_AS((void)train(table, cfg, centers), std::invalid_argument);
    }
    SUBCASE("missing centers rejected") {
        CHECK_THROWS_AS((void)train(table, cfg, std::vector<double>{}), std::invalid_argument);
    }
    SUBCASE("non-binary labels rejected") {
        auto bad = table;
        bad.labels[3] = 2;
        CHECK_THROWS_AS((void)train(bad, cfg, centers), std::invalid_argument);
    }
    SUBCASE("constant feature rejected") {
        auto bad = table;
        for (std::size_t i = 0; i < bad.rows(); ++i) bad.at(i, 0) = 3.25;
        CHECK_THROWS_AS((void)train(bad, cfg, centers), std::invalid_argument);
    }
}

TEST_CASE("one epoch runs ceil(N / batch_size) steps, last partial batch included") {
    const auto table = gaussian_fixture(5, 3); // N = 10
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 4;
    const auto result = train(table, cfg, std::vector<double>{-2.0});
    CHECK(result.history.total_steps == 3); // 4 + 4 + 2
    CHECK(result.history.mean_loss.size() == 1);
    CHECK(result.history.importance.size() == 1);
}

TEST_CASE("same seed and data give bit-identical trained parameters") {
    const auto table = gaussian_fixture(400, 11);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 64;
    cfg.seed = 17;
    const auto a = train(table, cfg, std::vector<double>{-2.0});
    const auto b = train(table, cfg, std::vector<double>{-2.0});
    CHECK(a.model.params[0].w_lower == b.model.params[0].w_lower);
    CHECK(a.model.params[0].b_lower == b.model.params[0].b_lower);
    CHECK(a.model.params[0].w_upper == b.model.params[0].w_upper);
    CHECK(a.model.params[0].b_upper == b.model.params[0].b_upper);
    CHECK(a.model.importance.logits[0] == b.model.importance.logits[0]);
    for (std::size_t e = 0; e < a.history.mean_loss.size(); ++e)
        CHECK(a.history.mean_loss[e] == b.history.mean_loss[e]);
}

TEST_CASE("training a clean one-feature separation finds the density crossing") {
    // Signal N(-2, 4), background N(2, 4): densities cross at 0. A grid search
    // over single boundaries confirms 0 is accuracy-optimal on this sample.
    const auto table = gaussian_fixture(3000, 21);
    TrainConfig cfg;
    cfg.epochs = 300;
    cfg.batch_size = 128;
    cfg.seed = 2;
    const auto result = train(table, cfg, std::vector<double>{-2.0});

    // Grid-search oracle in raw units: classify signal = x < boundary.
    double best_boundary = 0.0, best_acc = 0.0;
    for (double boundary = -4.0; boundary <= 4.0; boundary += 0.05) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < table.rows(); ++i) {
            const bool pred = table.at(i, 0) < boundary;
            correct += (pred == (table.labels[i] == 1));
        }
        const double acc = static_cast<double>(correct) / static_cast<double>(table.rows());
        if (acc > best_acc) {
            best_acc = acc;
            best_boundary = boundary;
        }
    }
    CHECK(std::abs(best_boundary) < 0.3); // oracle confirms the analytic crossing

    // The learned upper cut (signal below) must sit at the same crossing.
    const auto& p = result.model.params[0];
    const auto scores = result.model.importance.scores();
    const double boundary_norm = (logit(0.5) + p.b_upper) / (p.w_upper * scores[0]);
    const double boundary_raw =
        boundary_norm * result.model.norm.stddev[0] + result.model.norm.mean[0];
    CHECK(p.w_upper < 0.0); // signal on the low side
    CHECK(std::abs(boundary_raw - 0.0) < 0.3);

    SUBCASE("per-epoch loss decreases end to end") {
        CHECK(result.history.mean_loss.back() < result.history.mean_loss.front());
    }
    SUBCASE("all recorded importance snapshots sum to one") {
        for (const auto& snap : result.history.importance) {
            double total = 0.0;
            for (double v : snap) total += v;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("history CSV has one row per epoch and a column per feature") {
    const auto table = gaussian_fixture(50, 9);
    TrainConfig cfg;
    cfg.epochs = 3;
    const auto result = train(table, cfg, std::vector<double>{-2.0});
    const std::string path = "test_history_tmp.csv";
    write_history_csv(result.history, result.model.feature_names, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "epoch,mean_loss,importance_x");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    std::remove(path.c_str());
}
