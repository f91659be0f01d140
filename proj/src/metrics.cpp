#include "tseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "tseg/error.hpp"

namespace tseg {

void MetricConfig::validate() const {
    if (n_t < 1) throw ValidationError("metrics.n_t must be >= 1");
    if (k_override && *k_override < 1) throw ValidationError("metrics.k must be >= 1");
}

std::size_t compute_k(const Segmentation& ref) {
    const double n = static_cast<double>(ref.sentence_count());
    const double m = static_cast<double>(ref.segment_count());
    if (m == 0) throw ValidationError("compute_k on an empty segmentation");
    const auto k = static_cast<std::size_t>(std::round(n / (2.0 * m)));
    return std::max<std::size_t>(2, k);
}

namespace {

void check_pair(const Segmentation& ref, const Segmentation& hyp, std::size_t k) {
    const std::size_t n = ref.sentence_count();
    if (hyp.sentence_count() != n)
        throw ValidationError("reference and hypothesis cover different sentence counts (" +
                              std::to_string(n) + " vs " + std::to_string(hyp.sentence_count()) +
                              ")");
    if (k < 1 || k >= n)
        throw ValidationError("window k=" + std::to_string(k) + " out of range for n=" +
                              std::to_string(n));
}

std::vector<std::size_t> segment_ids(const Segmentation& seg) {
    std::vector<std::size_t> ids;
    ids.reserve(seg.sentence_count());
    for (std::size_t s = 0; s < seg.masses.size(); ++s) ids.insert(ids.end(), seg.masses[s], s);
    return ids;
}

// prefix[i] = number of boundaries at gaps < i
std::vector<std::size_t> boundary_prefix(const Segmentation& seg) {
    const std::size_t n = seg.sentence_count();
    std::vector<std::size_t> prefix(n, 0);
    const auto bounds = masses_to_boundaries(seg);
    std::size_t b = 0;
    for (std::size_t g = 0; g + 1 < n; ++g) {
        prefix[g + 1] = prefix[g];
        if (b < bounds.size() && bounds[b] == g) {
            ++prefix[g + 1];
            ++b;
        }
    }
    return prefix;
}

}  // namespace

double pk(const Segmentation& ref, const Segmentation& hyp, std::size_t k) {
    check_pair(ref, hyp, k);
    const auto r = segment_ids(ref), h = segment_ids(hyp);
    const std::size_t probes = r.size() - k;
    std::size_t disagree = 0;
    for (std::size_t i = 0; i < probes; ++i)
        disagree += (r[i] == r[i + k]) != (h[i] == h[i + k]);
    return static_cast<double>(disagree) / static_cast<double>(probes);
}

double window_diff(const Segmentation& ref, const Segmentation& hyp, std::size_t k) {
    check_pair(ref, hyp, k);
    const auto r = boundary_prefix(ref), h = boundary_prefix(hyp);
    const std::size_t windows = r.size() - k;
    std::size_t differ = 0;
    for (std::size_t i = 0; i < windows; ++i)
        differ += (r[i + k] - r[i]) != (h[i + k] - h[i]);
    return static_cast<double>(differ) / static_cast<double>(windows);
}

namespace {

// Objective accumulated along an assignment, compared lexicographically:
// integer cost (sum of |offset| + n_t per unmatched gap), then -exact, then
// -transpositions.
struct Score {
    std::int64_t cost = 0;
    std::int64_t neg_exact = 0;
    std::int64_t neg_trans = 0;
    Score operator+(const Score& o) const {
        return {cost + o.cost, neg_exact + o.neg_exact, neg_trans + o.neg_trans};
    }
    auto operator<=>(const Score&) const = default;
};

// Dynamic program over reference gaps in ascending order. The state is the
// set of already-used hypothesis gaps that a later reference gap could still
// reach; it fits in a bitmask because candidates lie within a window of
// width 2*n_t - 1.
class Matcher {
public:
    Matcher(std::span<const std::size_t> ref, std::span<const std::size_t> hyp, std::size_t n_t)
        : ref_(ref), hyp_(hyp), n_t_(static_cast<std::int64_t>(n_t)) {
        lo_.resize(ref.size());
        hi_.resize(ref.size());
        std::size_t lo = 0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const auto r = static_cast<std::int64_t>(ref[i]);
            while (lo < hyp.size() && static_cast<std::int64_t>(hyp[lo]) <= r - n_t_) ++lo;
            std::size_t hi = lo;
            while (hi < hyp.size() && static_cast<std::int64_t>(hyp[hi]) < r + n_t_) ++hi;
            lo_[i] = lo;
            hi_[i] = hi;  // exclusive
        }
    }

    BoundaryMatching solve() {
        BoundaryMatching out;
        std::vector<bool> hyp_used(hyp_.size(), false);
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < ref_.size(); ++i) {
            const Score target = best(i, mask);
            bool matched = false;
            for (std::size_t h = lo_[i]; h < hi_[i]; ++h) {
                const std::size_t bit = h - lo_[i];
                if (mask & (std::uint64_t{1} << bit)) continue;
                const Score option = pair_score(i, h) + best(i + 1, shift(i, mask | (std::uint64_t{1} << bit)));
                if (option == target) {
                    const long off = static_cast<long>(hyp_[h]) - static_cast<long>(ref_[i]);
                    BoundaryPair p{ref_[i], hyp_[h], off};
                    (off == 0 ? out.matches : out.transpositions).push_back(p);
                    hyp_used[h] = true;
                    mask = shift(i, mask | (std::uint64_t{1} << bit));
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                out.misses.push_back(ref_[i]);
                mask = shift(i, mask);
            }
        }
        for (std::size_t h = 0; h < hyp_.size(); ++h)
            if (!hyp_used[h]) out.false_alarms.push_back(hyp_[h]);
        return out;
    }

private:
    Score pair_score(std::size_t i, std::size_t h) const {
        const std::int64_t d = std::llabs(static_cast<std::int64_t>(hyp_[h]) -
                                          static_cast<std::int64_t>(ref_[i]));
        // pairing removes two unmatched gaps (cost 2 n_t) and adds d
        return {d - 2 * n_t_, d == 0 ? -1 : 0, d == 0 ? 0 : -1};
    }

    // Re-base the mask from lo_[i] to lo_[i + 1].
    std::uint64_t shift(std::size_t i, std::uint64_t mask) const {
        if (i + 1 >= ref_.size()) return 0;
        const std::size_t delta = lo_[i + 1] - lo_[i];
        return delta >= 64 ? 0 : (mask >> delta);
    }

    Score best(std::size_t i, std::uint64_t mask) {
        if (i == ref_.size()) return {};
        const auto key = std::make_pair(i, mask);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Score result = best(i + 1, shift(i, mask));
        for (std::size_t h = lo_[i]; h < hi_[i]; ++h) {
            const std::size_t bit = h - lo_[i];
            if (mask & (std::uint64_t{1} << bit)) continue;
            const Score option =
                pair_score(i, h) + best(i + 1, shift(i, mask | (std::uint64_t{1} << bit)));
            if (option < result) result = option;
        }
        memo_.emplace(key, result);
        return result;
    }

    std::span<const std::size_t> ref_;
    std::span<const std::size_t> hyp_;
    std::int64_t n_t_;
    std::vector<std::size_t> lo_, hi_;
    std::map<std::pair<std::size_t, std::uint64_t>, Score> memo_;
};

}  // namespace

BoundaryMatching match_boundaries(std::span<const std::size_t> ref_gaps,
                                  std::span<const std::size_t> hyp_gaps, std::size_t n_t) {
    if (n_t < 1) throw ValidationError("n_t must be >= 1");
    if (n_t > 30) throw ValidationError("n_t above 30 is not supported");
    auto sorted_unique = [](std::span<const std::size_t> s) {
        return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end();
    };
    if (!sorted_unique(ref_gaps) || !sorted_unique(hyp_gaps))
        throw ValidationError("boundary gaps must be strictly increasing");
    return Matcher(ref_gaps, hyp_gaps, n_t).solve();
}

BoundaryScores boundary_f1(const BoundaryMatching& m) {
    const double tp = static_cast<double>(m.matches.size() + m.transpositions.size());
    const double n_ref = tp + static_cast<double>(m.misses.size());
    const double n_hyp = tp + static_cast<double>(m.false_alarms.size());
    if (n_ref == 0 && n_hyp == 0) return {1.0, 1.0, 1.0};
    BoundaryScores s;
    s.precision = n_hyp == 0 ? 0.0 : tp / n_hyp;
    s.recall = n_ref == 0 ? 0.0 : tp / n_ref;
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

BoundaryScores boundary_f1(std::span<const std::size_t> ref_gaps,
                           std::span<const std::size_t> hyp_gaps, std::size_t n_t) {
    return boundary_f1(match_boundaries(ref_gaps, hyp_gaps, n_t));
}

double boundary_similarity(const BoundaryMatching& m, std::size_t n_t) {
    const double errors_full = static_cast<double>(m.misses.size() + m.false_alarms.size());
    double partial = 0.0;
    for (const auto& t : m.transpositions)
        partial += static_cast<double>(std::labs(t.offset)) / static_cast<double>(n_t);
    const double total = static_cast<double>(m.matches.size() + m.transpositions.size()) +
                         errors_full;
    if (total == 0.0) return 1.0;
    return 1.0 - (errors_full + partial) / total;
}

double boundary_similarity(std::span<const std::size_t> ref_gaps,
                           std::span<const std::size_t> hyp_gaps, std::size_t n_t) {
    return boundary_similarity(match_boundaries(ref_gaps, hyp_gaps, n_t), n_t);
}

DocMetrics evaluate_document(const Document& ref, const Segmentation& hyp,
                             const MetricConfig& cfg) {
    const std::size_t n = ref.size();
    if (hyp.sentence_count() != n)
        throw ValidationError("document '" + ref.doc_id + "': hypothesis covers " +
                              std::to_string(hyp.sentence_count()) + " sentences, expected " +
                              std::to_string(n));
    const auto ref_seg = boundaries_to_masses(ref.boundaries, n);
    const auto hyp_gaps = masses_to_boundaries(hyp);

    DocMetrics out;
    out.doc_id = ref.doc_id;
    out.group = ref.group;
    out.n = n;
    out.ref_boundaries = ref.boundaries.size();
    out.hyp_boundaries = hyp_gaps.size();

    const std::size_t k = cfg.k_override.value_or(compute_k(ref_seg));
    if (k >= n) {
        out.skipped = true;
    } else {
        out.pk = pk(ref_seg, hyp, k);
        out.wd = window_diff(ref_seg, hyp, k);
    }
    const auto m = match_boundaries(ref.boundaries, hyp_gaps, cfg.n_t);
    out.bf1 = boundary_f1(m).f1;
    out.b = boundary_similarity(m, cfg.n_t);
    return out;
}

MacroMetrics macro_average(std::span<const DocMetrics> records) {
    if (records.empty()) throw ValidationError("macro average over zero documents");
    std::vector<const DocMetrics*> order;
    for (const auto& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const DocMetrics* a, const DocMetrics* b) { return a->doc_id < b->doc_id; });

    MacroMetrics m;
    double pk_sum = 0.0, wd_sum = 0.0, bf1_sum = 0.0, b_sum = 0.0;
    for (const auto* r : order) {
        bf1_sum += r->bf1;
        b_sum += r->b;
        if (!r->skipped) {
            pk_sum += r->pk;
            wd_sum += r->wd;
            ++m.pk_documents;
        }
    }
    m.documents = order.size();
    const double docs = static_cast<double>(m.documents);
    m.bf1 = bf1_sum / docs;
    m.b = b_sum / docs;
    if (m.pk_documents > 0) {
        m.pk = pk_sum / static_cast<double>(m.pk_documents);
        m.wd = wd_sum / static_cast<double>(m.pk_documents);
    }
    return m;
}

}  // namespace tseg
