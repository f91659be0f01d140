#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tseg/corpus.hpp"

namespace tseg {

enum class PairLabel : int { continuation = 0, boundary = 1 };
enum class PairKind { intra, inter, hard };

std::string_view to_string(PairKind kind) noexcept;

/// One sentence-pair training instance.
struct PairExample {
    std::string doc_id;
    std::optional<std::size_t> gap_index;  // empty for hard negatives
    std::string text_a;
    std::string text_b;
    PairLabel label = PairLabel::continuation;
    PairKind kind = PairKind::intra;
    std::optional<std::size_t> dist;  // empty encodes an infinite distance

    double distance() const noexcept {
        return dist ? static_cast<double>(*dist) : std::numeric_limits<double>::infinity();
    }
    bool operator==(const PairExample&) const = default;
};

using Rng = std::mt19937_64;

/// Deterministic per-document seed derived from a global seed and doc id.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key) noexcept;

std::vector<PairExample> extract_adjacent_pairs(const Document& doc);
std::vector<PairExample> sample_hard_negatives(const Document& doc, std::size_t max_count, Rng& rng);

struct BalanceResult {
    std::vector<PairExample> pairs;
    bool no_boundaries = false;  // warning: nothing to balance against
};

/// Keeps every boundary pair and downsamples continuation pairs so that
/// boundaries make up `boundary_fraction` of the output (never upsamples).
BalanceResult balance(std::span<const PairExample> pairs, double boundary_fraction, Rng& rng);

struct PairGenConfig {
    double boundary_fraction = 0.30;
    std::size_t max_hard_negatives = 10;
};

struct PairSet {
    std::vector<PairExample> pairs;
    std::size_t adjacent_boundary = 0;
    std::size_t adjacent_continuation = 0;
    std::size_t hard = 0;
    bool no_boundaries = false;
};

/// Corpus-level pipeline: adjacent pairs from every document, balanced over
/// the whole corpus, followed by per-document hard negatives.
PairSet build_training_pairs(std::span<const Document> docs, const PairGenConfig& cfg,
                             std::uint64_t seed);

std::string pair_to_json_line(const PairExample& p);
void write_pairs(std::span<const PairExample> pairs, std::ostream& out);
void write_pairs(std::span<const PairExample> pairs, const std::string& path);
std::vector<PairExample> read_pairs(const std::string& path);

}  // namespace tseg
