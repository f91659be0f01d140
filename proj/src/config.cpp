#include "tseg/config.hpp"

#include <fstream>
#include <set>

#include "tseg/error.hpp"

namespace tseg {

using nlohmann::json;

std::string_view to_string(SystemKind s) noexcept {
    switch (s) {
        case SystemKind::builtin_scorer: return "builtin_scorer";
        case SystemKind::external_probs: return "external_probs";
        case SystemKind::texttiling: return "texttiling";
    }
    return "builtin_scorer";
}

std::string_view to_string(SplitMode s) noexcept {
    switch (s) {
        case SplitMode::chronological: return "chronological";
        case SplitMode::predefined: return "predefined";
        case SplitMode::group_folds: return "group_folds";
        case SplitMode::all: return "all";
    }
    return "chronological";
}

namespace {

void reject_unknown(const json& j, std::string_view section, std::set<std::string> known) {
    if (!j.is_object()) throw ValidationError("config section '" + std::string(section) + "' must be an object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw ValidationError("unknown config key '" + std::string(section) +
                                  (section.empty() ? "" : ".") + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) dst = it->get<T>();
}

}  // namespace

void RunConfig::validate() const {
    loss.validate();
    train.validate();
    segmenter.validate();
    metrics.validate();
    texttiling.validate();
    if (!(pairs.boundary_fraction > 0.0 && pairs.boundary_fraction < 1.0))
        throw ValidationError("pairs.boundary_fraction must lie in (0, 1)");
    if (split.mode == SplitMode::predefined && split.file.empty())
        throw ValidationError("split.mode 'predefined' needs split.file");
    if (system == SystemKind::external_probs && probs.empty())
        throw ValidationError("system 'external_probs' needs a 'probs' path");
    if (!(split.cv_train_fraction > 0.0 && split.cv_train_fraction <= 1.0))
        throw ValidationError("split.cv_train_fraction must lie in (0, 1]");
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    try {
        reject_unknown(j, "", {"corpus", "split", "system", "model", "probs", "abbreviations",
                               "pairs", "loss", "train", "segmenter", "metrics", "texttiling",
                               "seed", "out"});
        read(j, "corpus", c.corpus);
        read(j, "model", c.model);
        read(j, "probs", c.probs);
        read(j, "abbreviations", c.abbreviations);
        read(j, "seed", c.seed);
        read(j, "out", c.out);

        if (auto s = j.find("system"); s != j.end()) {
            const auto v = s->get<std::string>();
            if (v == "builtin_scorer") c.system = SystemKind::builtin_scorer;
            else if (v == "external_probs") c.system = SystemKind::external_probs;
            else if (v == "texttiling") c.system = SystemKind::texttiling;
            else throw ValidationError("unknown system '" + v + "'");
        }
        if (auto s = j.find("split"); s != j.end()) {
            reject_unknown(*s, "split", {"mode", "fractions", "file", "cv_train_fraction"});
            if (auto m = s->find("mode"); m != s->end()) {
                const auto v = m->get<std::string>();
                if (v == "chronological") c.split.mode = SplitMode::chronological;
                else if (v == "predefined") c.split.mode = SplitMode::predefined;
                else if (v == "group_folds") c.split.mode = SplitMode::group_folds;
                else if (v == "all") c.split.mode = SplitMode::all;
                else throw ValidationError("unknown split mode '" + v + "'");
            }
            if (auto f = s->find("fractions"); f != s->end()) {
                const auto v = f->get<std::vector<double>>();
                if (v.size() != 3) throw ValidationError("split.fractions needs three values");
                c.split.fractions = {v[0], v[1], v[2]};
            }
            read(*s, "file", c.split.file);
            read(*s, "cv_train_fraction", c.split.cv_train_fraction);
        }
        if (auto s = j.find("pairs"); s != j.end()) {
            reject_unknown(*s, "pairs", {"boundary_fraction", "max_hard_negatives"});
            read(*s, "boundary_fraction", c.pairs.boundary_fraction);
            read(*s, "max_hard_negatives", c.pairs.max_hard_negatives);
        }
        if (auto s = j.find("loss"); s != j.end()) {
            reject_unknown(*s, "loss", {"gamma", "alpha", "lambda1", "lambda2", "conf_margin", "sigma"});
            read(*s, "gamma", c.loss.gamma);
            read(*s, "alpha", c.loss.alpha);
            read(*s, "lambda1", c.loss.lambda1);
            read(*s, "lambda2", c.loss.lambda2);
            read(*s, "conf_margin", c.loss.conf_margin);
            read(*s, "sigma", c.loss.sigma);
        }
        if (auto s = j.find("train"); s != j.end()) {
            reject_unknown(*s, "train", {"learning_rate", "batch_size", "max_epochs", "patience", "l2"});
            read(*s, "learning_rate", c.train.learning_rate);
            read(*s, "batch_size", c.train.batch_size);
            read(*s, "max_epochs", c.train.max_epochs);
            read(*s, "patience", c.train.patience);
            read(*s, "l2", c.train.l2);
        }
        if (auto s = j.find("segmenter"); s != j.end()) {
            reject_unknown(*s, "segmenter", {"tau", "grid", "tune_on_val"});
            read(*s, "tau", c.segmenter.tau);
            read(*s, "tune_on_val", c.segmenter.tune_on_val);
            if (auto g = s->find("grid"); g != s->end()) {
                reject_unknown(*g, "segmenter.grid", {"start", "stop", "step"});
                read(*g, "start", c.segmenter.grid.start);
                read(*g, "stop", c.segmenter.grid.stop);
                read(*g, "step", c.segmenter.grid.step);
            }
        }
        if (auto s = j.find("metrics"); s != j.end()) {
            reject_unknown(*s, "metrics", {"n_t", "k"});
            read(*s, "n_t", c.metrics.n_t);
            if (auto k = s->find("k"); k != s->end() && !k->is_null())
                c.metrics.k_override = k->get<std::size_t>();
        }
        if (auto s = j.find("texttiling"); s != j.end()) {
            reject_unknown(*s, "texttiling", {"w", "k", "smoothing_width", "smoothing_rounds",
                                              "cutoff_policy", "stopwords", "stem_prefix"});
            read(*s, "w", c.texttiling.w);
            read(*s, "k", c.texttiling.k);
            read(*s, "smoothing_width", c.texttiling.smoothing_width);
            read(*s, "smoothing_rounds", c.texttiling.smoothing_rounds);
            read(*s, "stopwords", c.texttiling.stopwords);
            read(*s, "stem_prefix", c.texttiling.stem_prefix);
            if (auto p = s->find("cutoff_policy"); p != s->end() &&
                                                    p->get<std::string>() != "mean_minus_half_sigma")
                throw ValidationError("unknown texttiling.cutoff_policy '" + p->get<std::string>() + "'");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
    json j;
    j["corpus"] = c.corpus;
    j["split"] = {{"mode", std::string(to_string(c.split.mode))},
                  {"fractions", {c.split.fractions.train, c.split.fractions.val, c.split.fractions.test}},
                  {"file", c.split.file},
                  {"cv_train_fraction", c.split.cv_train_fraction}};
    j["system"] = std::string(to_string(c.system));
    j["model"] = c.model;
    j["probs"] = c.probs;
    j["abbreviations"] = c.abbreviations;
    j["pairs"] = {{"boundary_fraction", c.pairs.boundary_fraction},
                  {"max_hard_negatives", c.pairs.max_hard_negatives}};
    j["loss"] = {{"gamma", c.loss.gamma}, {"alpha", c.loss.alpha}, {"lambda1", c.loss.lambda1},
                 {"lambda2", c.loss.lambda2}, {"conf_margin", c.loss.conf_margin}, {"sigma", c.loss.sigma}};
    j["train"] = {{"learning_rate", c.train.learning_rate}, {"batch_size", c.train.batch_size},
                  {"max_epochs", c.train.max_epochs}, {"patience", c.train.patience},
                  {"l2", c.train.l2}};
    j["segmenter"] = {{"tau", c.segmenter.tau},
                      {"tune_on_val", c.segmenter.tune_on_val},
                      {"grid", {{"start", c.segmenter.grid.start}, {"stop", c.segmenter.grid.stop},
                                {"step", c.segmenter.grid.step}}}};
    j["metrics"] = {{"n_t", c.metrics.n_t},
                    {"k", c.metrics.k_override ? json(*c.metrics.k_override) : json(nullptr)}};
    j["texttiling"] = {{"w", c.texttiling.w}, {"k", c.texttiling.k},
                       {"smoothing_width", c.texttiling.smoothing_width},
                       {"smoothing_rounds", c.texttiling.smoothing_rounds},
                       {"cutoff_policy", "mean_minus_half_sigma"},
                       {"stopwords", c.texttiling.stopwords},
                       {"stem_prefix", c.texttiling.stem_prefix}};
    j["seed"] = c.seed;
    j["out"] = c.out;
    return j;
}

}  // namespace tseg
