#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "tseg/corpus.hpp"
#include "tseg/metrics.hpp"
#include "tseg/probability.hpp"

namespace tseg {

struct ThresholdGrid {
    double start = 0.05;
    double stop = 0.95;
    double step = 0.01;

    /// Grid values rounded to 1e-9 so that e.g. 0.5 is represented exactly.
    std::vector<double> values() const;
};

struct SegmenterConfig {
    double tau = 0.5;
    ThresholdGrid grid;
    bool tune_on_val = true;

    void validate() const;
};

/// Gaps whose boundary probability strictly exceeds tau.
std::vector<std::size_t> infer_boundaries(std::span<const ProbabilityRecord> probs, double tau);

Segmentation segment_document(const Document& doc, std::span<const ProbabilityRecord> probs,
                              double tau);

struct SweepRow {
    double tau = 0.0;
    double macro_bf1 = 0.0;
    double macro_pk = 0.0;
    double macro_wd = 0.0;
    double mean_boundaries_per_doc = 0.0;
};

struct TuneResult {
    double tau_star = 0.5;
    std::vector<SweepRow> table;
};

/// Picks the grid value with the best macro B-F1; ties go to the value
/// nearest 0.5, then to the smaller value.
TuneResult tune_threshold(std::span<const Document> val_docs, const ProbabilityMap& probs,
                          const SegmenterConfig& cfg, const MetricConfig& metrics = {});

/// Sweep metrics at arbitrary thresholds (no selection).
std::vector<SweepRow> sweep(std::span<const Document> docs, const ProbabilityMap& probs,
                            std::span<const double> taus, const MetricConfig& metrics = {});

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace tseg
