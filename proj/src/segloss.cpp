#include "tseg/segloss.hpp"

#include <algorithm>
#include <cmath>

#include "tseg/error.hpp"

namespace tseg {

void LossConfig::validate() const {
    if (!(gamma >= 0.0)) throw ValidationError("loss.gamma must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("loss.alpha must lie in (0, 1]");
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
        throw ValidationError("loss.lambda1 and loss.lambda2 must be >= 0");
    if (!(sigma > 0.0)) throw ValidationError("loss.sigma must be > 0");
    if (!(conf_margin >= 0.0 && conf_margin < 1.0))
        throw ValidationError("loss.conf_margin must lie in [0, 1)");
}

double clamp_probability(double p) noexcept {
    return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

double logistic(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

struct Target {
    double pt;       // probability assigned to the true class
    double alpha_t;  // class weight
    double sign;     // d(pt)/dz = sign * pt * (1 - pt)
};

Target target(double p, int y, double alpha) noexcept {
    const double pc = clamp_probability(p);
    return y == 1 ? Target{pc, alpha, 1.0} : Target{1.0 - pc, 1.0 - alpha, -1.0};
}

}  // namespace

double focal_loss(double p, int y, double gamma, double alpha) noexcept {
    const auto t = target(p, y, alpha);
    return -t.alpha_t * std::pow(1.0 - t.pt, gamma) * std::log(t.pt);
}

double conf_penalty(double p, int y, double margin) noexcept {
    const double pc = clamp_probability(p);
    const double wrong = y == 0 ? pc : 1.0 - pc;
    const double excess = std::max(0.0, wrong - margin);
    return excess * excess;
}

double boundary_weight(double dist, double sigma) noexcept {
    if (std::isinf(dist)) return 0.0;
    return std::exp(-dist / sigma);
}

double boundary_term(double p, int y, double dist, double sigma) noexcept {
    const double w = boundary_weight(dist, sigma);
    if (w == 0.0) return 0.0;
    const auto t = target(p, y, 1.0);
    return -w * std::log(t.pt);
}

double seg_loss(std::span<const LossExample> batch, const LossConfig& cfg) {
    if (batch.empty()) throw ValidationError("seg_loss on an empty batch");
    double focal = 0.0, conf = 0.0, bound = 0.0;
    for (const auto& e : batch) {
        focal += focal_loss(e.p, e.y, cfg.gamma, cfg.alpha);
        conf += conf_penalty(e.p, e.y, cfg.conf_margin);
        bound += boundary_term(e.p, e.y, e.dist, cfg.sigma);
    }
    const double n = static_cast<double>(batch.size());
    return focal / n + cfg.lambda1 * (conf / n) + cfg.lambda2 * (bound / n);
}

std::vector<double> seg_loss_grad(std::span<const LossExample> batch, const LossConfig& cfg) {
    if (batch.empty()) throw ValidationError("seg_loss_grad on an empty batch");
    std::vector<double> grad(batch.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& e = batch[i];
        if (e.p < kProbEpsilon || e.p > 1.0 - kProbEpsilon) continue;  // clamp is flat
        const auto t = target(e.p, e.y, cfg.alpha);
        const double q = 1.0 - t.pt;  // probability of the wrong class
        const double dpt_dz = t.sign * t.pt * q;

        // focal: -a (1-pt)^g ln pt  ->  d/dz = sign * a * (g pt (1-pt)^g ln pt - (1-pt)^(g+1))
        const double focal =
            t.sign * t.alpha_t *
            (cfg.gamma * t.pt * std::pow(q, cfg.gamma) * std::log(t.pt) - std::pow(q, cfg.gamma + 1.0));

        // confidence: max(0, q - m)^2, dq/dz = -dpt/dz
        const double excess = std::max(0.0, q - cfg.conf_margin);
        const double conf = -2.0 * excess * dpt_dz;

        // boundary: -w ln pt  ->  -w * sign * (1 - pt)
        const double bound = -boundary_weight(e.dist, cfg.sigma) * t.sign * q;

        grad[i] = inv_n * (focal + cfg.lambda1 * conf + cfg.lambda2 * bound);
    }
    return grad;
}

}  // namespace tseg
