#pragma once

#include <span>
#include <vector>

namespace tseg {

/// Weights and shapes of the segmentation-aware objective
///   L = focal + lambda1 * confidence_penalty + lambda2 * boundary_term
struct LossConfig {
    double gamma = 1.5;
    double alpha = 0.8;   // focal weight of the boundary class
    double lambda1 = 0.15;
    double lambda2 = 0.2;
    double conf_margin = 0.5;
    double sigma = 2.0;   // decay scale of the boundary weight, in gaps

    void validate() const;
};

/// One scored example: p is the predicted boundary probability.
struct LossExample {
    double p = 0.5;
    int y = 0;
    double dist = 0.0;  // gaps to nearest gold boundary; +inf allowed
};

inline constexpr double kProbEpsilon = 1e-7;

double clamp_probability(double p) noexcept;

double focal_loss(double p, int y, double gamma, double alpha) noexcept;
double conf_penalty(double p, int y, double margin) noexcept;
double boundary_weight(double dist, double sigma) noexcept;
double boundary_term(double p, int y, double dist, double sigma) noexcept;

/// Batch-mean objective. Throws ValidationError on an empty batch.
double seg_loss(std::span<const LossExample> batch, const LossConfig& cfg);

/// dL/dz per example, where p = logistic(z) and L is the batch-mean objective.
/// Examples whose p lies in the clamped region get a zero gradient.
std::vector<double> seg_loss_grad(std::span<const LossExample> batch, const LossConfig& cfg);

double logistic(double z) noexcept;

}  // namespace tseg
