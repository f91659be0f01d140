#include "tseg/segmenter.hpp"

#include <cmath>
#include <ostream>

#include "tseg/error.hpp"
#include "tseg/format.hpp"

namespace tseg {

std::vector<double> ThresholdGrid::values() const {
    if (!(step > 0.0) || stop < start) return {};
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    return out;
}

void SegmenterConfig::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("segmenter.tau must lie in [0, 1]");
    const auto v = grid.values();
    if (v.empty()) throw ValidationError("segmenter.grid is empty");
    if (v.front() < 0.0 || v.back() > 1.0)
        throw ValidationError("segmenter.grid must lie within [0, 1]");
}

std::vector<std::size_t> infer_boundaries(std::span<const ProbabilityRecord> probs, double tau) {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < probs.size(); ++g) {
        if (probs[g].gap_index != g)
            throw ValidationError("document '" + probs[g].doc_id +
                                  "': probabilities are not a complete gap-ordered sequence "
                                  "(missing gap " + std::to_string(g) + ")");
        if (probs[g].p_not_next > tau) out.push_back(g);
    }
    return out;
}

Segmentation segment_document(const Document& doc, std::span<const ProbabilityRecord> probs,
                              double tau) {
    if (probs.size() != doc.gap_count())
        throw ValidationError("document '" + doc.doc_id + "': expected " +
                              std::to_string(doc.gap_count()) + " gap probabilities, got " +
                              std::to_string(probs.size()));
    const auto gaps = infer_boundaries(probs, tau);
    return boundaries_to_masses(gaps, doc.size());
}

namespace {

std::span<const ProbabilityRecord> probs_for(const ProbabilityMap& probs, const Document& d) {
    const auto it = probs.find(d.doc_id);
    if (it == probs.end()) {
        if (d.gap_count() == 0) return {};
        throw ValidationError("no probabilities for document '" + d.doc_id + "'");
    }
    return it->second;
}

}  // namespace

std::vector<SweepRow> sweep(std::span<const Document> docs, const ProbabilityMap& probs,
                            std::span<const double> taus, const MetricConfig& metrics) {
    std::vector<SweepRow> rows;
    rows.reserve(taus.size());
    for (const double tau : taus) {
        std::vector<DocMetrics> records;
        records.reserve(docs.size());
        std::size_t boundaries = 0;
        for (const auto& d : docs) {
            const auto seg = segment_document(d, probs_for(probs, d), tau);
            boundaries += seg.segment_count() - 1;
            records.push_back(evaluate_document(d, seg, metrics));
        }
        const auto macro = macro_average(records);
        rows.push_back({tau, macro.bf1, macro.pk, macro.wd,
                        static_cast<double>(boundaries) / static_cast<double>(docs.size())});
    }
    return rows;
}

TuneResult tune_threshold(std::span<const Document> val_docs, const ProbabilityMap& probs,
                          const SegmenterConfig& cfg, const MetricConfig& metrics) {
    if (val_docs.empty()) throw ValidationError("threshold tuning needs validation documents");
    const auto taus = cfg.grid.values();
    if (taus.empty()) throw ValidationError("segmenter.grid is empty");

    TuneResult result;
    result.table = sweep(val_docs, probs, taus, metrics);
    const SweepRow* best = nullptr;
    for (const auto& row : result.table) {
        if (!best) {
            best = &row;
            continue;
        }
        constexpr double tol = 1e-12;
        if (row.macro_bf1 > best->macro_bf1 + tol) {
            best = &row;
        } else if (std::abs(row.macro_bf1 - best->macro_bf1) <= tol) {
            const double dr = std::abs(row.tau - 0.5), db = std::abs(best->tau - 0.5);
            if (dr < db - tol || (std::abs(dr - db) <= tol && row.tau < best->tau)) best = &row;
        }
    }
    result.tau_star = best->tau;
    return result;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
    out << "tau,macro_bf1,macro_pk,macro_wd,mean_boundaries_per_doc\n";
    for (const auto& r : rows)
        out << fmt_num(r.tau) << ',' << fmt_num(r.macro_bf1) << ',' << fmt_num(r.macro_pk) << ','
            << fmt_num(r.macro_wd) << ',' << fmt_num(r.mean_boundaries_per_doc) << '\n';
}

}  // namespace tseg
