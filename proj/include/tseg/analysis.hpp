#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tseg/corpus.hpp"
#include "tseg/probability.hpp"

namespace tseg {

using BoundaryMap = std::map<std::string, std::vector<std::size_t>>;

inline constexpr std::size_t kHistogramBins = 50;  // width 0.02

struct ProbabilityAnalysis {
    std::array<std::size_t, kHistogramBins> histogram{};
    std::array<std::size_t, kHistogramBins> histogram_boundary{};
    std::array<std::size_t, kHistogramBins> histogram_continuation{};
    std::size_t total = 0;
    double overlap_fraction = 0.0;  // share of probabilities in [0.4, 0.6]
    // 5th percentile of boundary-gap probabilities minus 95th percentile of
    // continuation-gap probabilities (nearest rank). Empty without both classes.
    std::optional<double> separation_gap;
};

/// Nearest-rank percentile: the value at 1-based rank ceil(pct/100 * N).
double nearest_rank_percentile(std::vector<double> values, double pct);

std::size_t histogram_bin(double p) noexcept;

ProbabilityAnalysis analyze_probabilities(std::span<const double> boundary_probs,
                                          std::span<const double> continuation_probs);
ProbabilityAnalysis analyze_probabilities(const ProbabilityMap& probs,
                                          std::span<const Document> docs);

inline constexpr std::size_t kDeciles = 10;

struct PositionalProfile {
    std::array<std::size_t, kDeciles> gaps{};
    std::array<std::size_t, kDeciles> false_positives{};
    std::array<std::size_t, kDeciles> false_negatives{};

    double fp_rate(std::size_t decile) const noexcept;
    double fn_rate(std::size_t decile) const noexcept;
};

/// Decile of a gap within a document of n sentences: floor(10 * gap / (n - 1)), capped at 9.
std::size_t gap_decile(std::size_t gap, std::size_t n) noexcept;

PositionalProfile positional_error_profile(std::span<const Document> docs,
                                           const BoundaryMap& hyp_by_doc, std::size_t n_t);

struct GroupRates {
    std::size_t documents = 0;
    std::size_t gaps = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;

    double fp_rate() const noexcept;
    double fn_rate() const noexcept;
};

inline constexpr const char* kUngrouped = "ungrouped";

std::map<std::string, GroupRates> group_error_rates(std::span<const Document> docs,
                                                    const BoundaryMap& hyp_by_doc,
                                                    std::size_t n_t);

// CSV renderings shared by eval reports and the analyze command. A missing
// analysis still writes the histogram header and bin rows with zero counts.
void write_prob_hist_csv(const ProbabilityAnalysis* analysis, std::ostream& out);
void write_positional_csv(const PositionalProfile& profile, std::ostream& out);
void write_groups_csv(const std::map<std::string, GroupRates>& groups, std::ostream& out);

}  // namespace tseg
