#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tseg/corpus.hpp"
#include "tseg/metrics.hpp"
#include "tseg/pairgen.hpp"
#include "tseg/scorer.hpp"
#include "tseg/segloss.hpp"
#include "tseg/segmenter.hpp"
#include "tseg/texttiling.hpp"

namespace tseg {

inline constexpr const char* kToolkitVersion = "0.3.0";

enum class SystemKind { builtin_scorer, external_probs, texttiling };
enum class SplitMode { chronological, predefined, group_folds, all };

std::string_view to_string(SystemKind s) noexcept;
std::string_view to_string(SplitMode s) noexcept;

struct SplitSpec {
    SplitMode mode = SplitMode::chronological;
    SplitFractions fractions;
    std::string file;           // predefined split JSON
    double cv_train_fraction = 0.8;  // inner chronological split inside each fold
};

/// Everything a pipeline run needs. Loaded from a single JSON document with
/// one section per module; absent keys keep their defaults.
struct RunConfig {
    std::string corpus;
    SplitSpec split;
    SystemKind system = SystemKind::builtin_scorer;
    std::string model;  // pre-trained model for builtin_scorer (optional)
    std::string probs;  // probability JSONL for external_probs
    std::string abbreviations;
    PairGenConfig pairs;
    LossConfig loss;
    TrainConfig train;
    SegmenterConfig segmenter;
    MetricConfig metrics;
    TilingConfig texttiling;
    std::uint64_t seed = 13;
    std::string out = "out";

    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace tseg
