#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tseg/corpus.hpp"

namespace tseg {

/// Synthetic topic corpus: every segment draws its words from one topic's
/// private vocabulary, with a fraction of tokens taken from a shared noise
/// vocabulary. Consecutive segments never share a topic.
struct SynthConfig {
    std::size_t documents = 200;
    std::size_t min_segments = 3;
    std::size_t max_segments = 8;
    std::size_t min_sentences = 4;  // per segment
    std::size_t max_sentences = 12;
    std::size_t topics = 30;
    std::size_t words_per_topic = 50;
    std::size_t noise_words = 40;
    double noise_fraction = 0.10;
    std::size_t min_tokens = 15;  // per sentence
    std::size_t max_tokens = 25;
    std::size_t groups = 0;       // 0 = no group labels
    std::uint64_t seed = 7;
};

std::vector<Document> generate_synthetic_corpus(const SynthConfig& cfg);

}  // namespace tseg
