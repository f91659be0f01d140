#include "tseg/texttiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "tseg/error.hpp"
#include "tseg/kernels.hpp"
#include "tseg/text.hpp"

namespace tseg {

void TilingConfig::validate() const {
    if (w < 1) throw ValidationError("texttiling.w must be >= 1");
    if (k < 1) throw ValidationError("texttiling.k must be >= 1");
}

namespace {

std::string truncate_code_points(const std::string& tok, std::size_t limit) {
    std::size_t pos = 0, count = 0;
    while (pos < tok.size() && count < limit) {
        text::decode_utf8(tok, pos);
        ++count;
    }
    return tok.substr(0, pos);
}

}  // namespace

std::optional<PseudoSentences> to_pseudosentences(const Document& doc, const TilingConfig& cfg) {
    cfg.validate();
    if (doc.size() < 2) return std::nullopt;

    const std::unordered_set<std::string> stop(cfg.stopwords.begin(), cfg.stopwords.end());
    std::vector<std::string> tokens;
    std::vector<std::size_t> sentence_end;  // cumulative token offset after each sentence
    for (const auto& s : doc.sentences) {
        for (auto& t : text::tokenize(s)) {
            if (stop.count(t)) continue;
            tokens.push_back(cfg.stem_prefix ? truncate_code_points(t, cfg.stem_prefix) : std::move(t));
        }
        sentence_end.push_back(tokens.size());
    }
    if (tokens.size() < 2 * cfg.w) return std::nullopt;

    PseudoSentences out;
    const std::size_t count = tokens.size() / cfg.w;
    for (std::size_t p = 0; p < count; ++p) {
        const auto begin = tokens.begin() + static_cast<std::ptrdiff_t>(p * cfg.w);
        const auto end = (p + 1 == count) ? tokens.end() : begin + static_cast<std::ptrdiff_t>(cfg.w);
        out.tokens.emplace_back(begin, end);
    }
    // Pseudo-gap g sits at token offset (g + 1) * w; sentence gap i at sentence_end[i].
    for (std::size_t g = 0; g + 1 < count; ++g) {
        const auto offset = static_cast<long>((g + 1) * cfg.w);
        std::size_t best = 0;
        long best_d = std::numeric_limits<long>::max();
        for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
            const long d = std::labs(static_cast<long>(sentence_end[i]) - offset);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        out.gap_map.push_back(best);
    }
    return out;
}

std::vector<double> gap_similarities(const PseudoSentences& pseudo, std::size_t k) {
    const std::size_t count = pseudo.tokens.size();
    if (count < 2) return {};
    if (k < 1) throw ValidationError("block size k must be >= 1");

    std::unordered_map<std::string, std::size_t> vocab;
    std::vector<std::vector<std::size_t>> ids(count);
    for (std::size_t p = 0; p < count; ++p)
        for (const auto& t : pseudo.tokens[p])
            ids[p].push_back(vocab.emplace(t, vocab.size()).first->second);

    std::vector<double> left(vocab.size()), right(vocab.size());
    std::vector<double> out;
    out.reserve(count - 1);
    for (std::size_t g = 0; g + 1 < count; ++g) {
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        const std::size_t lb = g + 1 >= k ? g + 1 - k : 0;
        const std::size_t re = std::min(count, g + 1 + k);
        for (std::size_t p = lb; p <= g; ++p)
            for (auto id : ids[p]) left[id] += 1.0;
        for (std::size_t p = g + 1; p < re; ++p)
            for (auto id : ids[p]) right[id] += 1.0;
        const auto r = kernels::dot_norms(left, right);
        const double denom = std::sqrt(r.norm_a2 * r.norm_b2);
        out.push_back(denom == 0.0 ? 0.0 : std::min(1.0, r.dot / denom));
    }
    return out;
}

std::vector<double> smooth(std::span<const double> scores, std::size_t width, std::size_t rounds) {
    std::vector<double> cur(scores.begin(), scores.end());
    std::vector<double> next(cur.size());
    for (std::size_t r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::size_t lo = i >= width ? i - width : 0;
            const std::size_t hi = std::min(cur.size() - 1, i + width);
            double sum = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) sum += cur[j];
            next[i] = sum / static_cast<double>(hi - lo + 1);
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<double> depth_scores(std::span<const double> scores) {
    std::vector<double> depths(scores.size(), 0.0);
    for (std::size_t g = 0; g < scores.size(); ++g) {
        double left = scores[g];
        for (std::size_t j = g; j-- > 0;) {
            if (scores[j] < left) break;
            left = scores[j];
        }
        double right = scores[g];
        for (std::size_t j = g + 1; j < scores.size(); ++j) {
            if (scores[j] < right) break;
            right = scores[j];
        }
        depths[g] = (left - scores[g]) + (right - scores[g]);
    }
    return depths;
}

std::vector<std::size_t> select_boundaries(std::span<const double> depths,
                                           std::span<const std::size_t> gap_map,
                                           CutoffPolicy policy) {
    if (depths.empty()) return {};
    if (gap_map.size() != depths.size())
        throw ValidationError("gap map and depth scores differ in length");
    (void)policy;  // only mean_minus_half_sigma exists

    const double n = static_cast<double>(depths.size());
    const double mean = std::accumulate(depths.begin(), depths.end(), 0.0) / n;
    double var = 0.0;
    for (const double d : depths) var += (d - mean) * (d - mean);
    const double cutoff = mean - std::sqrt(var / n) / 2.0;
    constexpr double tol = 1e-12;

    // A valley may smooth into a plateau of equal depths; each maximal run that
    // stands above both neighbours contributes its middle gap.
    std::set<std::size_t> chosen;
    const auto same = [&](double a, double b) { return std::fabs(a - b) <= tol; };
    for (std::size_t s = 0; s < depths.size();) {
        std::size_t e = s;
        while (e + 1 < depths.size() && same(depths[e + 1], depths[s])) ++e;
        const double d = depths[s];
        const bool left_ok = s == 0 || d > depths[s - 1];
        const bool right_ok = e + 1 == depths.size() || d > depths[e + 1];
        if (d > cutoff + tol && d > tol && left_ok && right_ok) chosen.insert(gap_map[(s + e) / 2]);
        s = e + 1;
    }
    return {chosen.begin(), chosen.end()};
}

Segmentation texttiling_segment(const Document& doc, const TilingConfig& cfg) {
    const auto pseudo = to_pseudosentences(doc, cfg);
    if (!pseudo) return Segmentation{{doc.size()}};
    const auto sims = gap_similarities(*pseudo, cfg.k);
    const auto smoothed = smooth(sims, cfg.smoothing_width, cfg.smoothing_rounds);
    const auto depths = depth_scores(smoothed);
    const auto gaps = select_boundaries(depths, pseudo->gap_map, cfg.cutoff);
    return boundaries_to_masses(gaps, doc.size());
}

}  // namespace tseg
