#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tseg/analysis.hpp"
#include "tseg/config.hpp"
#include "tseg/metrics.hpp"
#include "tseg/scorer.hpp"
#include "tseg/segmenter.hpp"

namespace tseg {

struct EvalReport {
    std::string system;
    double tau = 0.5;
    bool tuned = false;
    std::string sweep_source = "none";  // "val", "test" or "none"
    std::size_t train_docs = 0;
    std::size_t val_docs = 0;
    std::size_t test_docs = 0;

    std::vector<DocMetrics> per_doc;
    MacroMetrics macro;
    std::vector<SweepRow> sweep;
    std::optional<ProbabilityAnalysis> probabilities;
    PositionalProfile positional;
    std::map<std::string, GroupRates> groups;
    BoundaryMap hypotheses;
    ProbabilityMap test_probs;

    std::optional<LinearScorer> model;
    std::vector<EpochLog> train_log;
};

struct CvFold {
    std::string group;
    EvalReport report;
};

struct CvReport {
    std::vector<CvFold> folds;
};

struct DataSplit {
    std::vector<Document> train;
    std::vector<Document> val;
    std::vector<Document> test;
};

/// Resolves the configured split (chronological, predefined or all).
DataSplit make_split(std::span<const Document> corpus, const RunConfig& cfg);

/// Runs the configured system on one train/val/test split.
EvalReport run_system(const RunConfig& cfg, const DataSplit& data,
                      const std::optional<ProbabilityMap>& external, std::uint64_t seed);

/// Trains the built-in scorer on pairs from `train` with `val` for early stopping.
TrainResult train_builtin(const RunConfig& cfg, std::span<const Document> train,
                          std::span<const Document> val, std::uint64_t seed);

EvalReport cmd_eval(const RunConfig& cfg);
CvReport cmd_cv(const RunConfig& cfg);

/// Inputs recorded in run_manifest.json, keyed by role.
std::map<std::string, std::string> input_paths(const RunConfig& cfg);

nlohmann::json build_manifest(const RunConfig& cfg, const EvalReport* report);

/// Writes metrics.csv, macro.csv, macro.md, sweep.csv, prob_hist.csv,
/// positional.csv, groups.csv, segments.jsonl and run_manifest.json (plus
/// model.json / train_log.csv when a model was trained).
void emit_report(const EvalReport& report, const std::string& outdir, const RunConfig& cfg);

/// One fold directory per held-out group plus cv_summary.csv / cv_summary.md.
void emit_cv_report(const CvReport& report, const std::string& outdir, const RunConfig& cfg);

/// Reads JSONL where each object is a Document, or carries "text" (split
/// into sentences, no boundaries) or "segments" (list of texts; boundaries
/// fall between them).
std::vector<Document> ingest_corpus(const std::string& path,
                                    std::span<const std::string> abbreviations);

std::string sha256_file(const std::string& path);

}  // namespace tseg
