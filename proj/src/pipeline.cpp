#include "tseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tseg/error.hpp"
#include "tseg/pairgen.hpp"
#include "tseg/text.hpp"
#include "tseg/texttiling.hpp"

namespace tseg {

using nlohmann::json;

DataSplit make_split(std::span<const Document> corpus, const RunConfig& cfg) {
    CorpusSplit ids;
    switch (cfg.split.mode) {
        case SplitMode::chronological:
            ids = chronological_split(corpus, cfg.split.fractions);
            break;
        case SplitMode::predefined:
            ids = load_predefined_split(cfg.split.file, corpus);
            break;
        case SplitMode::all:
            for (const auto& d : corpus) ids.test.push_back(d.doc_id);
            break;
        case SplitMode::group_folds:
            throw ValidationError("split mode 'group_folds' is only valid for the cv command");
    }
    return {select_documents(corpus, ids.train), select_documents(corpus, ids.val),
            select_documents(corpus, ids.test)};
}

TrainResult train_builtin(const RunConfig& cfg, std::span<const Document> train,
                          std::span<const Document> val, std::uint64_t seed) {
    const auto pairs = build_training_pairs(train, cfg.pairs, seed);
    if (pairs.pairs.empty()) throw ValidationError("training split yields no sentence pairs");
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(seed, "train");
    return tseg::train(pairs.pairs, val, cfg.loss, tc, cfg.metrics);
}

namespace {

bool covers(const ProbabilityMap& probs, std::span<const Document> docs) {
    try {
        check_coverage(probs, docs);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

ProbabilityMap restrict_to(const ProbabilityMap& probs, std::span<const Document> docs) {
    ProbabilityMap out;
    for (const auto& d : docs)
        if (auto it = probs.find(d.doc_id); it != probs.end()) out.emplace(it->first, it->second);
    return out;
}

}  // namespace

EvalReport run_system(const RunConfig& cfg, const DataSplit& data,
                      const std::optional<ProbabilityMap>& external, std::uint64_t seed) {
    cfg.validate();
    if (data.test.empty()) throw ValidationError("test split is empty");

    EvalReport report;
    report.system = std::string(to_string(cfg.system));
    report.train_docs = data.train.size();
    report.val_docs = data.val.size();
    report.test_docs = data.test.size();
    report.tau = cfg.segmenter.tau;

    std::map<std::string, Segmentation> hyp;
    if (cfg.system == SystemKind::texttiling) {
        for (const auto& d : data.test) hyp[d.doc_id] = texttiling_segment(d, cfg.texttiling);
    } else {
        ProbabilityMap val_probs, test_probs;
        if (cfg.system == SystemKind::builtin_scorer) {
            LinearScorer model;
            if (!cfg.model.empty()) {
                model = load_model(cfg.model);
            } else {
                if (data.train.empty())
                    throw ValidationError("built-in scorer needs a model or a non-empty train split");
                auto trained = train_builtin(cfg, data.train, data.val, seed);
                model = trained.model;
                report.train_log = std::move(trained.log);
            }
            val_probs = score_documents(model, data.val);
            test_probs = score_documents(model, data.test);
            report.model = std::move(model);
        } else {
            if (!external) throw ValidationError("external_probs system without probabilities");
            check_coverage(*external, data.test);
            test_probs = restrict_to(*external, data.test);
            if (covers(*external, data.val)) val_probs = restrict_to(*external, data.val);
        }

        const bool can_tune = cfg.segmenter.tune_on_val && !data.val.empty() &&
                              covers(val_probs, data.val);
        if (can_tune) {
            auto tuned = tune_threshold(data.val, val_probs, cfg.segmenter, cfg.metrics);
            report.tau = tuned.tau_star;
            report.tuned = true;
            report.sweep = std::move(tuned.table);
            report.sweep_source = "val";
        } else {
            const auto taus = cfg.segmenter.grid.values();
            report.sweep = sweep(data.test, test_probs, taus, cfg.metrics);
            report.sweep_source = "test";
        }
        for (const auto& d : data.test) {
            const auto it = test_probs.find(d.doc_id);
            const std::span<const ProbabilityRecord> recs =
                it == test_probs.end() ? std::span<const ProbabilityRecord>{} : it->second;
            hyp[d.doc_id] = segment_document(d, recs, report.tau);
        }
        report.probabilities = analyze_probabilities(test_probs, data.test);
        report.test_probs = std::move(test_probs);
    }

    for (const auto& d : data.test) {
        const auto& seg = hyp.at(d.doc_id);
        report.per_doc.push_back(evaluate_document(d, seg, cfg.metrics));
        report.hypotheses[d.doc_id] = masses_to_boundaries(seg);
    }
    std::sort(report.per_doc.begin(), report.per_doc.end(),
              [](const DocMetrics& a, const DocMetrics& b) { return a.doc_id < b.doc_id; });
    report.macro = macro_average(report.per_doc);
    report.positional = positional_error_profile(data.test, report.hypotheses, cfg.metrics.n_t);
    report.groups = group_error_rates(data.test, report.hypotheses, cfg.metrics.n_t);
    return report;
}

namespace {

std::optional<ProbabilityMap> load_external(const RunConfig& cfg, std::span<const Document> corpus) {
    if (cfg.system != SystemKind::external_probs) return std::nullopt;
    return read_external_probs(cfg.probs, corpus);
}

}  // namespace

EvalReport cmd_eval(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.corpus.empty()) throw ValidationError("config has no corpus path");
    const auto corpus = parse_corpus(cfg.corpus);
    const auto data = make_split(corpus, cfg);
    if (data.test.empty()) throw ValidationError("test split is empty");
    return run_system(cfg, data, load_external(cfg, corpus), cfg.seed);
}

CvReport cmd_cv(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.corpus.empty()) throw ValidationError("config has no corpus path");
    const auto corpus = parse_corpus(cfg.corpus);
    const auto external = load_external(cfg, corpus);
    const auto folds = group_folds(corpus);

    CvReport out;
    for (const auto& fold : folds) {
        const auto pool = select_documents(corpus, fold.train);
        DataSplit data;
        data.test = select_documents(corpus, fold.test);
        if (cfg.system == SystemKind::texttiling) {
            data.train = pool;
        } else {
            const double f = cfg.split.cv_train_fraction;
            const bool dated = std::all_of(pool.begin(), pool.end(),
                                           [](const Document& d) { return d.date.has_value(); });
            if (dated) {
                const auto inner = chronological_split(pool, {f, 1.0 - f, 0.0});
                data.train = select_documents(corpus, inner.train);
                data.val = select_documents(corpus, inner.val);
                const auto rest = select_documents(corpus, inner.test);
                data.val.insert(data.val.end(), rest.begin(), rest.end());
            } else {
                // Undated folds: same prefix rule over doc_id order.
                std::vector<Document> sorted = pool;
                std::sort(sorted.begin(), sorted.end(),
                          [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
                const auto n_train = static_cast<std::size_t>(
                    std::floor(f * static_cast<double>(sorted.size()) + 1e-9));
                data.train.assign(sorted.begin(), sorted.begin() + n_train);
                data.val.assign(sorted.begin() + n_train, sorted.end());
            }
            if (data.train.empty() && cfg.system == SystemKind::builtin_scorer && cfg.model.empty())
                throw ValidationError("fold '" + fold.held_out_group + "' has no training documents");
        }
        out.folds.push_back({fold.held_out_group,
                             run_system(cfg, data, external, derive_seed(cfg.seed, fold.held_out_group))});
    }
    return out;
}

std::vector<Document> ingest_corpus(const std::string& path,
                                    std::span<const std::string> abbreviations) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input '" + path + "'");
    std::vector<Document> docs;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        try {
            const json j = json::parse(line);
            if (j.contains("sentences")) {
                std::istringstream one(line);
                auto parsed = parse_corpus(one, path);
                docs.push_back(std::move(parsed.at(0)));
            } else {
                Document d;
                d.doc_id = j.at("doc_id").get<std::string>();
                if (j.contains("group") && !j["group"].is_null()) d.group = j["group"].get<std::string>();
                if (j.contains("date") && !j["date"].is_null()) d.date = j["date"].get<std::string>();
                if (j.contains("segments")) {
                    for (const auto& seg : j.at("segments")) {
                        const auto sents = split_sentences(seg.get<std::string>(), abbreviations);
                        if (sents.empty()) continue;
                        if (!d.sentences.empty()) d.boundaries.push_back(d.sentences.size() - 1);
                        d.sentences.insert(d.sentences.end(), sents.begin(), sents.end());
                    }
                } else {
                    d.sentences = split_sentences(j.at("text").get<std::string>(), abbreviations);
                }
                validate_document(d);
                docs.push_back(std::move(d));
            }
        } catch (const json::exception& e) {
            throw ValidationError(where + e.what());
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            throw ValidationError(msg.rfind(path, 0) == 0 ? msg : where + msg);
        }
        if (!seen.insert(docs.back().doc_id).second)
            throw ValidationError(where + "duplicate doc_id '" + docs.back().doc_id + "'");
    }
    return docs;
}

}  // namespace tseg
