#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tseg/corpus.hpp"

namespace tseg {

enum class CutoffPolicy { mean_minus_half_sigma };

struct TilingConfig {
    std::size_t w = 20;  // tokens per pseudo-sentence
    std::size_t k = 10;  // pseudo-sentences per block
    std::size_t smoothing_width = 2;
    std::size_t smoothing_rounds = 1;
    CutoffPolicy cutoff = CutoffPolicy::mean_minus_half_sigma;
    std::vector<std::string> stopwords;  // removed before chunking; empty = none
    std::size_t stem_prefix = 0;         // truncate tokens to this many code points; 0 = off

    void validate() const;
};

struct PseudoSentences {
    std::vector<std::vector<std::string>> tokens;
    // gap_map[g] = sentence gap nearest to the boundary after pseudo-sentence g
    std::vector<std::size_t> gap_map;
};

/// Empty optional signals an unsegmentable document (fewer than 2w tokens
/// or a single sentence).
std::optional<PseudoSentences> to_pseudosentences(const Document& doc, const TilingConfig& cfg);

std::vector<double> gap_similarities(const PseudoSentences& pseudo, std::size_t k);
std::vector<double> smooth(std::span<const double> scores, std::size_t width, std::size_t rounds);
std::vector<double> depth_scores(std::span<const double> scores);

/// Cutoff mean(depths) - stddev(depths)/2 (population stddev). A gap is
/// selected when its depth exceeds the cutoff, is positive, and is a local
/// peak of the depth sequence; selected pseudo-gaps are mapped to sentence
/// gaps and deduplicated.
std::vector<std::size_t> select_boundaries(std::span<const double> depths,
                                           std::span<const std::size_t> gap_map,
                                           CutoffPolicy policy = CutoffPolicy::mean_minus_half_sigma);

Segmentation texttiling_segment(const Document& doc, const TilingConfig& cfg = {});

}  // namespace tseg
