#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tseg/corpus.hpp"
#include "tseg/features.hpp"
#include "tseg/metrics.hpp"
#include "tseg/pairgen.hpp"
#include "tseg/probability.hpp"
#include "tseg/segloss.hpp"

namespace tseg {

inline constexpr int kModelVersion = 1;

/// Logistic model over hashed pair features. The first kSparseDim weights
/// belong to hashed n-grams, the remaining kDenseDim to the dense features.
/// Dense inputs are standardized as (x - dense_center) / dense_scale before
/// the dot product; training fits both from the training pairs. The hashed
/// block is scaled to unit L2 norm per pair.
struct LinearScorer {
    std::uint32_t feature_dim = kSparseDim;
    std::vector<double> weights = std::vector<double>(kSparseDim + kDenseDim, 0.0);
    double bias = 0.0;
    std::array<double, kDenseDim> dense_center{};
    std::array<double, kDenseDim> dense_scale{1.0, 1.0, 1.0, 1.0, 1.0};
    int version = kModelVersion;
};

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t batch_size = 32;
    std::size_t max_epochs = 50;
    std::size_t patience = 5;
    std::uint64_t seed = 13;
    double l2 = 1e-6;

    void validate() const;
};

struct EpochLog {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_bf1 = 0.0;
    bool improved = false;
};

struct TrainResult {
    LinearScorer model;
    std::vector<EpochLog> log;
    std::size_t best_epoch = 0;
};

double decision_value(const LinearScorer& model, const PairFeatures& f);
double predict(const LinearScorer& model, const PairFeatures& f);

/// Mini-batch gradient descent on the segmentation-aware loss with L2
/// decay. After each epoch the model is scored on `val_docs` (B-F1 at
/// tau = 0.5); the best epoch is kept and training stops once `patience`
/// epochs pass without improvement. With no validation documents the
/// training loss drives selection instead.
TrainResult train(std::span<const PairExample> train_pairs, std::span<const Document> val_docs,
                  const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                  const MetricConfig& metric_cfg = {});

std::vector<ProbabilityRecord> score_document(const LinearScorer& model, const Document& doc);
ProbabilityMap score_documents(const LinearScorer& model, std::span<const Document> docs);

void save_model(const LinearScorer& model, const std::string& path);
LinearScorer load_model(const std::string& path);
std::string model_to_json(const LinearScorer& model);
LinearScorer model_from_json(const std::string& text);

void write_train_log_csv(const std::vector<EpochLog>& log, const std::string& path);

}  // namespace tseg
