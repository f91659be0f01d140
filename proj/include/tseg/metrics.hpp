#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tseg/corpus.hpp"

namespace tseg {

struct MetricConfig {
    std::size_t n_t = 2;                   // transposition window, exclusive
    std::optional<std::size_t> k_override;  // fixed window for Pk / WindowDiff

    void validate() const;
};

struct BoundaryPair {
    std::size_t ref_gap;
    std::size_t hyp_gap;
    long offset;  // hyp - ref
    bool operator==(const BoundaryPair&) const = default;
    auto operator<=>(const BoundaryPair&) const = default;
};

/// Optimal one-to-one alignment between reference and hypothesis boundaries.
struct BoundaryMatching {
    std::vector<BoundaryPair> matches;         // offset == 0
    std::vector<BoundaryPair> transpositions;  // 0 < |offset| < n_t
    std::vector<std::size_t> misses;           // unmatched reference gaps
    std::vector<std::size_t> false_alarms;     // unmatched hypothesis gaps
};

struct BoundaryScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

std::size_t compute_k(const Segmentation& ref);
double pk(const Segmentation& ref, const Segmentation& hyp, std::size_t k);
double window_diff(const Segmentation& ref, const Segmentation& hyp, std::size_t k);

/// Minimum-cost alignment: exact match 0, transposition |offset|/n_t,
/// unmatched gap 1. Ties prefer more exact matches, then more transpositions,
/// then the lexicographically smallest list of (ref, hyp) pairs.
BoundaryMatching match_boundaries(std::span<const std::size_t> ref_gaps,
                                  std::span<const std::size_t> hyp_gaps, std::size_t n_t);

BoundaryScores boundary_f1(const BoundaryMatching& m);
BoundaryScores boundary_f1(std::span<const std::size_t> ref_gaps,
                           std::span<const std::size_t> hyp_gaps, std::size_t n_t);
double boundary_similarity(const BoundaryMatching& m, std::size_t n_t);
double boundary_similarity(std::span<const std::size_t> ref_gaps,
                           std::span<const std::size_t> hyp_gaps, std::size_t n_t);

struct DocMetrics {
    std::string doc_id;
    std::optional<std::string> group;
    std::size_t n = 0;
    std::size_t ref_boundaries = 0;
    std::size_t hyp_boundaries = 0;
    double pk = 0.0;
    double wd = 0.0;
    double bf1 = 0.0;
    double b = 0.0;
    bool skipped = false;  // Pk/WD undefined (k >= n); excluded from their averages
};

struct MacroMetrics {
    double pk = 0.0;
    double wd = 0.0;
    double bf1 = 0.0;
    double b = 0.0;
    std::size_t documents = 0;
    std::size_t pk_documents = 0;  // documents contributing to Pk / WD
};

DocMetrics evaluate_document(const Document& ref, const Segmentation& hyp,
                             const MetricConfig& cfg = {});
MacroMetrics macro_average(std::span<const DocMetrics> records);

}  // namespace tseg
