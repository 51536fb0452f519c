#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcf/metrics.hpp"
#include "lcf/rng.hpp"

using namespace lcf;

TEST_CASE("confusion reference counts") {
    const std::vector<std::uint8_t> p1 = {1, 0, 1};
    const std::vector<std::uint8_t> l1 = {1, 0, 1};
    const auto c1 = confusion(p1, l1);
    CHECK(c1.tp == 2);
    CHECK(c1.fp == 0);
    CHECK(c1.tn == 1);
    CHECK(c1.fn == 0);

    const std::vector<std::uint8_t> all_one(10, 1);
    std::vector<std::uint8_t> half(10, 0);
    for (int i = 0; i < 5; ++i) half[i] = 1;
    const auto c2 = confusion(all_one, half);
    CHECK(c2.tp == 5);
    CHECK(c2.fp == 5);

    CHECK_THROWS_AS((void)confusion(p1, all_one), std::invalid_argument);
}

TEST_CASE("confusion matches a per-element counting oracle on random input") {
    rng::Engine eng(1);
    std::vector<std::uint8_t> preds(1000), labels(1000);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        preds[i] = static_cast<std::uint8_t>(eng() % 2);
        labels[i] = static_cast<std::uint8_t>(eng() % 2);
    }
    const auto c = confusion(preds, labels);
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        tp += preds[i] == 1 && labels[i] == 1;
        fp += preds[i] == 1 && labels[i] == 0;
        tn += preds[i] == 0 && labels[i] == 0;
        fn += preds[i] == 0 && labels[i] == 1;
    }
    CHECK(c.tp == tp);
    CHECK(c.fp == fp);
    CHECK(c.tn == tn);
    CHECK(c.fn == fn);
    CHECK(c.total() == preds.size());
}

TEST_CASE("significance reference values") {
    const auto phys = mock_physics();
    // eps = 1 both: S = 3e6, B = 3e12, S/sqrt(B) = sqrt(3)
    CHECK(significance(1.0, 1.0, phys) == doctest::Approx(1.7321).epsilon(1e-3));
    CHECK(significance(1.0, 1.0, phys) == doctest::Approx(std::sqrt(3.0)));
    CHECK(significance(0.0, 1.0, phys) == doctest::Approx(0.0));

    // Mock1 parallel benchmark point: closed-form arithmetic oracle.
    const double eps_s = 25734.0 / 50000.0;
    const double eps_b = 34.0 / 50000.0;
    const double s = eps_s * 1.0 * 1000.0 * 3000.0;
    const double b = eps_b * 1e6 * 1000.0 * 3000.0;
    CHECK(significance(eps_s, eps_b, phys) == doctest::Approx(s / std::sqrt(b)));
    CHECK(significance(eps_s, eps_b, phys) == doctest::Approx(34.2).epsilon(2e-3));
}

TEST_CASE("significance scales exactly as sqrt(luminosity)") {
    PhysicsConfig phys = mock_physics();
    const double base = significance(0.4, 0.001, phys);
    phys.luminosity_fb *= 2.0;
    const double doubled = significance(0.4, 0.001, phys);
    CHECK(doubled / base == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("significance is monotone in the efficiencies") {
    const auto phys = mock_physics();
    double prev = 0.0;
    for (double eps_s : {0.1, 0.3, 0.7, 1.0}) {
        const double v = significance(eps_s, 0.01, phys);
        CHECK(v > prev);
        prev = v;
    }
    prev = 1e300;
    for (double eps_b : {0.001, 0.01, 0.1, 1.0}) {
        const double v = significance(0.5, eps_b, phys);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("zero background efficiency reports the +inf sentinel") {
    CHECK(std::isinf(significance(0.5, 0.0, mock_physics())));
}

TEST_CASE("evaluate produces the documented ratios") {
    // 6 events: preds (1,1,0,1,0,0), labels (1,0,1,1,0,0)
    const std::vector<std::uint8_t> preds = {1, 1, 0, 1, 0, 0};
    const std::vector<std::uint8_t> labels = {1, 0, 1, 1, 0, 0};
    const auto r = evaluate(preds, labels, mock_physics());
    CHECK(r.counts.tp == 2);
    CHECK(r.counts.fp == 1);
    CHECK(r.counts.tn == 2);
    CHECK(r.counts.fn == 1);
    CHECK(r.accuracy == doctest::Approx(4.0 / 6.0));
    CHECK(r.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r.eps_s == doctest::Approx(2.0 / 3.0));
    CHECK(r.eps_b == doctest::Approx(1.0 / 3.0));
    CHECK(r.significance ==
          doctest::Approx(significance(2.0 / 3.0, 1.0 / 3.0, mock_physics())));
}

TEST_CASE("pass-everything predictions on balanced data") {
    // A report of pass_all regions predicts 1 for every event.
    std::vector<std::uint8_t> preds(100, 1);
    std::vector<std::uint8_t> labels(100, 0);
    for (int i = 0; i < 50; ++i) labels[i] = 1;
    const auto r = evaluate(preds, labels, mock_physics());
    CHECK(r.accuracy == doctest::Approx(0.5));
    CHECK(r.eps_s == doctest::Approx(1.0));
    CHECK(r.eps_b == doctest::Approx(1.0));
}

TEST_CASE("diboson physics defaults") {
    const auto p = diboson_physics();
    CHECK(p.sigma_signal_pb == doctest::Approx(0.7644));
    CHECK(p.sigma_background_pb == doctest::Approx(1.806e5));
    CHECK(p.luminosity_fb == doctest::Approx(3000.0));
}

TEST_CASE("format_table carries the headline numbers") {
    const std::vector<std::uint8_t> preds = {1, 0};
    const std::vector<std::uint8_t> labels = {1, 0};
    const auto text = format_table(evaluate(preds, labels, mock_physics()));
    CHECK(text.find("Accuracy") != std::string::npos);
    CHECK(text.find("100%") != std::string::npos);
    CHECK(text.find("Significance") != std::string::npos);
}
