#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "frozen_values.hpp"
#include "oracles.hpp"
#include "tseg/error.hpp"
#include "tseg/segloss.hpp"

using namespace tseg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;
}  // namespace

TEST_CASE("focal_loss") {
    CHECK(focal_loss(1.0, 1, 1.5, 0.8) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(focal_loss(std::exp(-1.0), 1, 0.0, 1.0) == doctest::Approx(1.0).epsilon(kTol));
    CHECK(std::fabs(focal_loss(0.5, 1, 1.5, 0.8) - frozen::kFocalHalf) <= kTol);
    // alpha_t = 1 - alpha for the continuation class.
    CHECK(focal_loss(0.5, 0, 0.0, 0.8) == doctest::Approx(0.2 * std::log(2.0)).epsilon(kTol));
    // gamma 0, alpha 0.5 is half the cross-entropy.
    for (double p : {0.1, 0.3, 0.7, 0.95})
        for (int y : {0, 1})
            CHECK(focal_loss(p, y, 0.0, 0.5) ==
                  doctest::Approx(-0.5 * std::log(y ? p : 1 - p)).epsilon(kTol));
    double prev = kInf;
    for (double pt = 0.05; pt < 1.0; pt += 0.05) {
        const double v = focal_loss(pt, 1, 1.5, 0.8);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("conf_penalty") {
    CHECK(conf_penalty(0.9, 0, 0.5) == doctest::Approx(0.16).epsilon(kTol));
    CHECK(conf_penalty(0.4, 0, 0.5) == 0.0);
    CHECK(conf_penalty(0.2, 1, 0.5) == doctest::Approx(0.09).epsilon(kTol));
}

TEST_CASE("boundary_term") {
    CHECK(boundary_term(0.5, 1, 0.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(kTol));
    CHECK(boundary_term(0.5, 1, kInf, 2.0) == 0.0);
    CHECK(std::fabs(boundary_term(0.5, 0, 2.0, 2.0) - frozen::kBoundaryTermDist2) <= kTol);
    CHECK(boundary_weight(kInf, 2.0) == 0.0);
}

TEST_CASE("seg_loss") {
    const LossConfig d;
    const std::vector<LossExample> single{{0.5, 1, 0.0}};
    CHECK(std::fabs(seg_loss(single, d) - frozen::kSegLossSingle) <= kTol);
    const std::vector<LossExample> perfect{{1.0, 1, 0.0}, {0.0, 0, 1.0}};
    CHECK(seg_loss(perfect, d) < 1e-5);
    LossConfig focal_only = d;
    focal_only.lambda1 = focal_only.lambda2 = 0.0;
    const std::vector<LossExample> mix{{0.3, 1, 0.0}, {0.8, 0, 2.0}, {0.6, 1, kInf}};
    double mean_focal = 0.0;
    for (const auto& e : mix) mean_focal += focal_loss(e.p, e.y, d.gamma, d.alpha);
    CHECK(seg_loss(mix, focal_only) == mean_focal / 3.0);
    CHECK_THROWS_AS(seg_loss(std::vector<LossExample>{}, d), ValidationError);
    CHECK(seg_loss(mix, d) >= 0.0);
}

TEST_CASE("seg_loss_grad reductions") {
    LossConfig ce;
    ce.lambda1 = ce.lambda2 = 0.0;
    ce.gamma = 0.0;
    ce.alpha = 1.0;
    // With alpha 1 only the boundary class carries weight.
    const std::vector<LossExample> pos{{0.3, 1, 0.0}, {0.9, 1, 1.0}, {0.55, 1, kInf}};
    const auto g = seg_loss_grad(pos, ce);
    for (std::size_t i = 0; i < pos.size(); ++i)
        CHECK(g[i] == doctest::Approx((pos[i].p - 1.0) / 3.0).epsilon(1e-12));

    ce.alpha = 0.5;
    const std::vector<LossExample> mixed{{0.3, 1, 0.0}, {0.8, 0, 2.0}};
    const auto h = seg_loss_grad(mixed, ce);
    for (std::size_t i = 0; i < mixed.size(); ++i)
        CHECK(h[i] == doctest::Approx(0.5 * (mixed[i].p - mixed[i].y) / 2.0).epsilon(1e-12));

    const std::vector<LossExample> saturated{{1.0 - 1e-9, 1, 0.0}, {1e-9, 0, 3.0}};
    for (double v : seg_loss_grad(saturated, LossConfig{})) CHECK(std::fabs(v) < 1e-6);
}

TEST_CASE("seg_loss_grad matches central differences on a seeded batch") {
    std::mt19937_64 rng(20);
    std::normal_distribution<double> z(0.0, 2.0);
    std::vector<double> logits, dist;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        logits.push_back(z(rng));
        y.push_back(static_cast<int>(rng() % 2));
        dist.push_back(i % 5 == 0 ? kInf : static_cast<double>(rng() % 6));
    }
    const LossConfig cfg;
    std::vector<LossExample> batch;
    for (std::size_t i = 0; i < logits.size(); ++i) batch.push_back({logistic(logits[i]), y[i], dist[i]});
    const auto g = seg_loss_grad(batch, cfg);
    const auto fd = oracle::fd_grad(logits, y, dist, cfg);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::fabs(g[i] - fd[i]) <= 1e-4 * std::max(std::fabs(g[i]), std::fabs(fd[i])) + 1e-12);
}

TEST_CASE("LossConfig validation") {
    LossConfig c;
    c.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.gamma = -1.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK_NOTHROW(LossConfig{}.validate());
    CHECK(clamp_probability(0.0) == kProbEpsilon);
    CHECK(clamp_probability(1.0) == 1.0 - kProbEpsilon);
}
