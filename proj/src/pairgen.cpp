#include "tseg/pairgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "tseg/error.hpp"
#include "tseg/text.hpp"

namespace tseg {

using nlohmann::json;

std::string_view to_string(PairKind kind) noexcept {
    switch (kind) {
        case PairKind::intra: return "intra";
        case PairKind::inter: return "inter";
        case PairKind::hard: return "hard";
    }
    return "intra";
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key) noexcept {
    // splitmix64 finalizer over the mixed inputs
    std::uint64_t z = global_seed ^ text::fnv1a64(key);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<PairExample> extract_adjacent_pairs(const Document& doc) {
    std::vector<PairExample> out;
    const std::size_t n = doc.size();
    if (n < 2) return out;
    out.reserve(n - 1);
    std::size_t next_b = 0;  // index into doc.boundaries
    for (std::size_t gap = 0; gap + 1 < n; ++gap) {
        while (next_b < doc.boundaries.size() && doc.boundaries[next_b] < gap) ++next_b;
        std::optional<std::size_t> dist;
        if (next_b < doc.boundaries.size()) dist = doc.boundaries[next_b] - gap;
        if (next_b > 0) {
            const std::size_t left = gap - doc.boundaries[next_b - 1];
            if (!dist || left < *dist) dist = left;
        }
        const bool is_boundary = dist && *dist == 0;
        PairExample p;
        p.doc_id = doc.doc_id;
        p.gap_index = gap;
        p.text_a = doc.sentences[gap];
        p.text_b = doc.sentences[gap + 1];
        p.label = is_boundary ? PairLabel::boundary : PairLabel::continuation;
        p.kind = is_boundary ? PairKind::inter : PairKind::intra;
        p.dist = dist;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

// Maps a rank in [0, (n-1)(n-2)/2) to the pair (i, j), i < j, j - i >= 2,
// enumerated by i then j.
std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t rank, std::size_t n) {
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const std::uint64_t row = n - i - 2;
        if (rank < row) return {i, i + 2 + static_cast<std::size_t>(rank)};
        rank -= row;
    }
    return {0, 0};
}

}  // namespace

std::vector<PairExample> sample_hard_negatives(const Document& doc, std::size_t max_count,
                                               Rng& rng) {
    std::vector<PairExample> out;
    const std::size_t n = doc.size();
    if (n < 3 || max_count == 0) return out;
    const std::uint64_t pool = static_cast<std::uint64_t>(n - 1) * (n - 2) / 2;
    const std::uint64_t take = std::min<std::uint64_t>(max_count, pool);

    // Floyd's sampling without replacement.
    std::vector<std::uint64_t> chosen;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t j = pool - take; j < pool; ++j) {
        std::uniform_int_distribution<std::uint64_t> dist(0, j);
        const std::uint64_t t = dist(rng);
        const std::uint64_t pick = seen.count(t) ? j : t;
        seen.insert(pick);
        chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end());

    out.reserve(chosen.size());
    for (const auto rank : chosen) {
        const auto [i, j] = unrank_pair(rank, n);
        PairExample p;
        p.doc_id = doc.doc_id;
        p.text_a = doc.sentences[i];
        p.text_b = doc.sentences[j];
        p.label = PairLabel::boundary;
        p.kind = PairKind::hard;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool canonical_less(const PairExample& a, const PairExample& b) {
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.gap_index.value_or(0) < b.gap_index.value_or(0);
}

}  // namespace

BalanceResult balance(std::span<const PairExample> pairs, double boundary_fraction, Rng& rng) {
    if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0))
        throw ValidationError("boundary_fraction must lie in (0, 1)");
    std::vector<PairExample> boundary, continuation;
    for (const auto& p : pairs) {
        if (p.kind == PairKind::hard)
            throw ValidationError("balance expects adjacent pairs only; hard negatives are "
                                  "appended after balancing");
        (p.label == PairLabel::boundary ? boundary : continuation).push_back(p);
    }

    BalanceResult result;
    if (boundary.empty()) {
        result.pairs = std::move(continuation);
        result.no_boundaries = true;
        return result;
    }

    std::sort(boundary.begin(), boundary.end(), canonical_less);
    std::sort(continuation.begin(), continuation.end(), canonical_less);

    const double ratio = (1.0 - boundary_fraction) / boundary_fraction;
    const auto target = static_cast<std::size_t>(
        std::llround(static_cast<double>(boundary.size()) * ratio));
    const std::size_t keep = std::min(continuation.size(), target);

    // Partial Fisher-Yates: first `keep` slots become a uniform sample.
    for (std::size_t i = 0; i < keep; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, continuation.size() - 1);
        std::swap(continuation[i], continuation[pick(rng)]);
    }
    continuation.resize(keep);

    result.pairs = std::move(boundary);
    result.pairs.insert(result.pairs.end(), std::make_move_iterator(continuation.begin()),
                        std::make_move_iterator(continuation.end()));
    std::shuffle(result.pairs.begin(), result.pairs.end(), rng);
    return result;
}

PairSet build_training_pairs(std::span<const Document> docs, const PairGenConfig& cfg,
                             std::uint64_t seed) {
    std::vector<const Document*> order;
    for (const auto& d : docs) order.push_back(&d);
    std::sort(order.begin(), order.end(),
              [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

    std::vector<PairExample> adjacent;
    for (const auto* d : order) {
        auto pairs = extract_adjacent_pairs(*d);
        adjacent.insert(adjacent.end(), std::make_move_iterator(pairs.begin()),
                        std::make_move_iterator(pairs.end()));
    }

    PairSet set;
    Rng rng(derive_seed(seed, "balance"));
    auto balanced = balance(adjacent, cfg.boundary_fraction, rng);
    set.no_boundaries = balanced.no_boundaries;
    set.pairs = std::move(balanced.pairs);
    for (const auto& p : set.pairs)
        (p.label == PairLabel::boundary ? set.adjacent_boundary : set.adjacent_continuation)++;

    for (const auto* d : order) {
        Rng doc_rng(derive_seed(seed, d->doc_id));
        auto hard = sample_hard_negatives(*d, cfg.max_hard_negatives, doc_rng);
        set.hard += hard.size();
        set.pairs.insert(set.pairs.end(), std::make_move_iterator(hard.begin()),
                         std::make_move_iterator(hard.end()));
    }
    return set;
}

std::string pair_to_json_line(const PairExample& p) {
    json j;
    j["doc_id"] = p.doc_id;
    j["gap_index"] = p.gap_index ? json(*p.gap_index) : json(nullptr);
    j["text_a"] = p.text_a;
    j["text_b"] = p.text_b;
    j["label"] = static_cast<int>(p.label);
    j["kind"] = std::string(to_string(p.kind));
    j["dist"] = p.dist ? json(*p.dist) : json(nullptr);
    return j.dump();
}

void write_pairs(std::span<const PairExample> pairs, std::ostream& out) {
    for (const auto& p : pairs) out << pair_to_json_line(p) << '\n';
}

void write_pairs(std::span<const PairExample> pairs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write pairs file '" + path + "'");
    write_pairs(pairs, out);
}

std::vector<PairExample> read_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pairs file '" + path + "'");
    std::vector<PairExample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const json j = json::parse(line);
            PairExample p;
            p.doc_id = j.at("doc_id").get<std::string>();
            if (!j.at("gap_index").is_null()) p.gap_index = j["gap_index"].get<std::size_t>();
            p.text_a = j.at("text_a").get<std::string>();
            p.text_b = j.at("text_b").get<std::string>();
            const int label = j.at("label").get<int>();
            if (label != 0 && label != 1) throw ValidationError("label must be 0 or 1");
            p.label = static_cast<PairLabel>(label);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "intra") p.kind = PairKind::intra;
            else if (kind == "inter") p.kind = PairKind::inter;
            else if (kind == "hard") p.kind = PairKind::hard;
            else throw ValidationError("unknown pair kind '" + kind + "'");
            if (!j.at("dist").is_null()) p.dist = j["dist"].get<std::size_t>();
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace tseg
