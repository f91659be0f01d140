#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tseg/corpus.hpp"

namespace tseg {

/// Boundary probability for one gap. This is the exchange format between
/// any pair scorer (built-in or external) and the segmenter.
struct ProbabilityRecord {
    std::string doc_id;
    std::size_t gap_index = 0;
    double p_not_next = 0.0;
    bool operator==(const ProbabilityRecord&) const = default;
};

using ProbabilityMap = std::map<std::string, std::vector<ProbabilityRecord>>;

/// Reads probability JSONL, grouped by document and sorted by gap. When a
/// corpus is supplied, every gap of every listed document must be covered
/// exactly once and no record may reference an unknown document.
ProbabilityMap read_external_probs(const std::string& path,
                                   std::optional<std::span<const Document>> corpus = std::nullopt);
ProbabilityMap read_external_probs(std::istream& in, std::string_view source,
                                   std::optional<std::span<const Document>> corpus = std::nullopt);

/// Checks that `probs` covers every gap of each document in `docs`.
void check_coverage(const ProbabilityMap& probs, std::span<const Document> docs);

void write_probs(const ProbabilityMap& probs, std::ostream& out);
void write_probs(const ProbabilityMap& probs, const std::string& path);

}  // namespace tseg
