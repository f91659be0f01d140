#include "tseg/synth.hpp"

#include <cstdio>
#include <random>
#include <string>

#include "tseg/error.hpp"

namespace tseg {

namespace {

// Pronounceable, collision-free pseudo-word for (namespace, index).
std::string make_word(std::size_t ns, std::size_t index) {
    static constexpr const char* kOnset[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static constexpr const char* kVowel[] = {"a", "e", "i", "o", "u"};
    std::string w;
    std::size_t v = ns * 1000 + index + 1;
    while (v > 0) {
        w += kOnset[v % 14];
        v /= 14;
        w += kVowel[v % 5];
        v /= 5;
    }
    return w;
}

std::string date_for(std::size_t day_index) {
    // days since 2021-01-01 in a 28-day-month calendar keeps dates valid and ordered
    const std::size_t year = 2021 + day_index / (12 * 28);
    const std::size_t month = 1 + (day_index / 28) % 12;
    const std::size_t day = 1 + day_index % 28;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04zu-%02zu-%02zu", year, month, day);
    return buf;
}

}  // namespace

std::vector<Document> generate_synthetic_corpus(const SynthConfig& cfg) {
    if (cfg.topics < 2) throw ValidationError("synthetic corpus needs at least two topics");
    if (cfg.min_segments < 1 || cfg.min_segments > cfg.max_segments ||
        cfg.min_sentences < 1 || cfg.min_sentences > cfg.max_sentences ||
        cfg.min_tokens < 1 || cfg.min_tokens > cfg.max_tokens)
        throw ValidationError("synthetic corpus ranges must be non-empty");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> seg_count(cfg.min_segments, cfg.max_segments);
    std::uniform_int_distribution<std::size_t> sent_count(cfg.min_sentences, cfg.max_sentences);
    std::uniform_int_distribution<std::size_t> tok_count(cfg.min_tokens, cfg.max_tokens);
    std::uniform_int_distribution<std::size_t> topic_pick(0, cfg.topics - 1);
    std::uniform_int_distribution<std::size_t> word_pick(0, cfg.words_per_topic - 1);
    std::uniform_int_distribution<std::size_t> noise_pick(0, cfg.noise_words ? cfg.noise_words - 1 : 0);
    std::bernoulli_distribution is_noise(cfg.noise_words ? cfg.noise_fraction : 0.0);

    std::vector<Document> docs;
    docs.reserve(cfg.documents);
    for (std::size_t d = 0; d < cfg.documents; ++d) {
        Document doc;
        char id[32];
        std::snprintf(id, sizeof id, "doc%04zu", d);
        doc.doc_id = id;
        doc.date = date_for(d);
        if (cfg.groups > 0) doc.group = "g" + std::to_string(d % cfg.groups);

        const std::size_t segments = seg_count(rng);
        std::size_t prev_topic = cfg.topics;  // none
        for (std::size_t s = 0; s < segments; ++s) {
            std::size_t topic;
            do topic = topic_pick(rng);
            while (topic == prev_topic);
            prev_topic = topic;

            if (s > 0) doc.boundaries.push_back(doc.sentences.size() - 1);
            const std::size_t sentences = sent_count(rng);
            for (std::size_t k = 0; k < sentences; ++k) {
                std::string sentence;
                const std::size_t tokens = tok_count(rng);
                for (std::size_t t = 0; t < tokens; ++t) {
                    if (t) sentence += ' ';
                    sentence += is_noise(rng) ? make_word(0, noise_pick(rng))
                                              : make_word(topic + 1, word_pick(rng));
                }
                sentence += '.';
                sentence[0] = static_cast<char>(sentence[0] - 'a' + 'A');
                doc.sentences.push_back(std::move(sentence));
            }
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace tseg
