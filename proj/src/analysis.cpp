#include "tseg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tseg/error.hpp"
#include "tseg/format.hpp"
#include "tseg/metrics.hpp"

namespace tseg {

double nearest_rank_percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw ValidationError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double raw = std::ceil(pct / 100.0 * static_cast<double>(values.size()) - 1e-9);
    const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1,
                                              values.size());
    return values[rank - 1];
}

std::size_t histogram_bin(double p) noexcept {
    const double scaled = std::floor(p * static_cast<double>(kHistogramBins) + 1e-9);
    return std::min<std::size_t>(kHistogramBins - 1,
                                 static_cast<std::size_t>(std::max(0.0, scaled)));
}

ProbabilityAnalysis analyze_probabilities(std::span<const double> boundary_probs,
                                          std::span<const double> continuation_probs) {
    ProbabilityAnalysis a;
    std::size_t ambiguous = 0;
    auto add = [&](double p, auto& class_hist) {
        const auto bin = histogram_bin(p);
        ++a.histogram[bin];
        ++class_hist[bin];
        ++a.total;
        if (p >= 0.4 && p <= 0.6) ++ambiguous;
    };
    for (const double p : boundary_probs) add(p, a.histogram_boundary);
    for (const double p : continuation_probs) add(p, a.histogram_continuation);
    a.overlap_fraction = a.total == 0 ? 0.0 : static_cast<double>(ambiguous) / static_cast<double>(a.total);
    if (!boundary_probs.empty() && !continuation_probs.empty()) {
        a.separation_gap =
            nearest_rank_percentile({boundary_probs.begin(), boundary_probs.end()}, 5.0) -
            nearest_rank_percentile({continuation_probs.begin(), continuation_probs.end()}, 95.0);
    }
    return a;
}

ProbabilityAnalysis analyze_probabilities(const ProbabilityMap& probs,
                                          std::span<const Document> docs) {
    check_coverage(probs, docs);
    std::vector<double> boundary, continuation;
    for (const auto& d : docs) {
        if (d.gap_count() == 0) continue;
        const auto& recs = probs.at(d.doc_id);
        std::size_t b = 0;
        for (std::size_t g = 0; g < recs.size(); ++g) {
            while (b < d.boundaries.size() && d.boundaries[b] < g) ++b;
            const bool is_boundary = b < d.boundaries.size() && d.boundaries[b] == g;
            (is_boundary ? boundary : continuation).push_back(recs[g].p_not_next);
        }
    }
    return analyze_probabilities(boundary, continuation);
}

double PositionalProfile::fp_rate(std::size_t d) const noexcept {
    return gaps[d] == 0 ? 0.0 : static_cast<double>(false_positives[d]) / static_cast<double>(gaps[d]);
}

double PositionalProfile::fn_rate(std::size_t d) const noexcept {
    return gaps[d] == 0 ? 0.0 : static_cast<double>(false_negatives[d]) / static_cast<double>(gaps[d]);
}

std::size_t gap_decile(std::size_t gap, std::size_t n) noexcept {
    if (n < 2) return 0;
    return std::min<std::size_t>(kDeciles - 1, (kDeciles * gap) / (n - 1));
}

namespace {

const std::vector<std::size_t>& hyp_for(const BoundaryMap& hyp_by_doc, const Document& d) {
    const auto it = hyp_by_doc.find(d.doc_id);
    if (it == hyp_by_doc.end())
        throw ValidationError("no hypothesis boundaries for document '" + d.doc_id + "'");
    return it->second;
}

}  // namespace

PositionalProfile positional_error_profile(std::span<const Document> docs,
                                           const BoundaryMap& hyp_by_doc, std::size_t n_t) {
    PositionalProfile prof;
    for (const auto& d : docs) {
        const std::size_t n = d.size();
        for (std::size_t g = 0; g + 1 < n; ++g) ++prof.gaps[gap_decile(g, n)];
        const auto m = match_boundaries(d.boundaries, hyp_for(hyp_by_doc, d), n_t);
        for (const auto g : m.false_alarms) ++prof.false_positives[gap_decile(g, n)];
        for (const auto g : m.misses) ++prof.false_negatives[gap_decile(g, n)];
    }
    return prof;
}

double GroupRates::fp_rate() const noexcept {
    return gaps == 0 ? 0.0 : static_cast<double>(false_positives) / static_cast<double>(gaps);
}

double GroupRates::fn_rate() const noexcept {
    return gaps == 0 ? 0.0 : static_cast<double>(false_negatives) / static_cast<double>(gaps);
}

std::map<std::string, GroupRates> group_error_rates(std::span<const Document> docs,
                                                    const BoundaryMap& hyp_by_doc,
                                                    std::size_t n_t) {
    std::map<std::string, GroupRates> out;
    for (const auto& d : docs) {
        auto& r = out[d.group.value_or(kUngrouped)];
        ++r.documents;
        r.gaps += d.gap_count();
        const auto m = match_boundaries(d.boundaries, hyp_for(hyp_by_doc, d), n_t);
        r.false_positives += m.false_alarms.size();
        r.false_negatives += m.misses.size();
    }
    return out;
}

void write_prob_hist_csv(const ProbabilityAnalysis* analysis, std::ostream& out) {
    out << "bin,lo,hi,count,boundary_count,continuation_count\n";
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
        out << b << ',' << fmt_num(b * 0.02, 2) << ',' << fmt_num((b + 1) * 0.02, 2) << ',';
        if (analysis)
            out << analysis->histogram[b] << ',' << analysis->histogram_boundary[b] << ','
                << analysis->histogram_continuation[b] << '\n';
        else
            out << "0,0,0\n";
    }
}

void write_positional_csv(const PositionalProfile& profile, std::ostream& out) {
    out << "decile,lo,hi,gaps,false_positives,false_negatives,fp_rate,fn_rate\n";
    for (std::size_t d = 0; d < kDeciles; ++d)
        out << d << ',' << fmt_num(d * 0.1, 1) << ',' << fmt_num((d + 1) * 0.1, 1) << ','
            << profile.gaps[d] << ',' << profile.false_positives[d] << ',' << profile.false_negatives[d]
            << ',' << fmt_num(profile.fp_rate(d)) << ',' << fmt_num(profile.fn_rate(d)) << '\n';
}

void write_groups_csv(const std::map<std::string, GroupRates>& groups, std::ostream& out) {
    out << "group,documents,gaps,false_positives,false_negatives,fp_rate,fn_rate\n";
    for (const auto& [g, rates] : groups)
        out << csv_field(g) << ',' << rates.documents << ',' << rates.gaps << ',' << rates.false_positives
            << ',' << rates.false_negatives << ',' << fmt_num(rates.fp_rate()) << ','
            << fmt_num(rates.fn_rate()) << '\n';
}

}  // namespace tseg
