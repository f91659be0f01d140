#include <doctest.h>

#include <json.hpp>

#include "tseg/config.hpp"
#include "tseg/error.hpp"

using namespace tseg;
using nlohmann::json;

TEST_CASE("config defaults and overrides") {
    const auto d = config_from_json(json::object());
    CHECK(d.system == SystemKind::builtin_scorer);
    CHECK(d.loss.gamma == 1.5);
    CHECK(d.loss.alpha == 0.8);
    CHECK(d.loss.lambda1 == 0.15);
    CHECK(d.loss.lambda2 == 0.2);
    CHECK(d.pairs.boundary_fraction == 0.30);
    CHECK(d.pairs.max_hard_negatives == 10);
    CHECK(d.split.fractions.train == 0.6);
    CHECK(d.segmenter.tau == 0.5);
    CHECK(d.texttiling.w == 20);
    CHECK(d.metrics.n_t == 2);

    const auto c = config_from_json(json::parse(R"({
        "system": "texttiling", "seed": 99,
        "split": {"mode": "all"},
        "loss": {"gamma": 2.0},
        "metrics": {"n_t": 3, "k": 4},
        "texttiling": {"w": 10, "stopwords": ["de", "a"]}
    })"));
    CHECK(c.system == SystemKind::texttiling);
    CHECK(c.seed == 99);
    CHECK(c.split.mode == SplitMode::all);
    CHECK(c.loss.gamma == 2.0);
    CHECK(c.loss.alpha == 0.8);
    CHECK(c.metrics.k_override == 4u);
    CHECK(c.texttiling.stopwords.size() == 2);
}

TEST_CASE("config round-trips through JSON") {
    auto c = config_from_json(json::parse(R"({"system":"external_probs","probs":"p.jsonl","seed":5,
        "train":{"learning_rate":0.05},"segmenter":{"grid":{"start":0.1,"stop":0.9,"step":0.05}}})"));
    const auto again = config_from_json(config_to_json(c));
    CHECK(config_to_json(again) == config_to_json(c));
    CHECK(again.train.learning_rate == 0.05);
    CHECK(again.segmenter.grid.step == 0.05);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus": 1})")), ValidationError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"loss": {"gama": 1}})")), ValidationError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"system": "bert"})")), ValidationError);
    // Semantic checks run at command time, once CLI overrides are applied.
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"system": "external_probs"})")).validate(),
                    ValidationError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"loss": {"alpha": 0}})")).validate(), ValidationError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"split": {"fractions": [0.5, 0.5]}})")),
                    ValidationError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"train": {"seed": 3}})")), ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}
