// tseg: command-line front end for the segmentation toolkit.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tseg/analysis.hpp"
#include "tseg/config.hpp"
#include "tseg/error.hpp"
#include "tseg/format.hpp"
#include "tseg/pairgen.hpp"
#include "tseg/pipeline.hpp"
#include "tseg/synth.hpp"
#include "tseg/texttiling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tseg;

namespace {

struct Shared {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string corpus;
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--config", s.config, "Run configuration (JSON)");
    cmd->add_option("--seed", s.seed, "Global random seed");
    cmd->add_option("--out", s.out, "Output directory");
    cmd->add_option("--corpus", s.corpus, "Corpus JSONL (overrides config)");
}

RunConfig resolve(const Shared& s) {
    RunConfig cfg = s.config.empty() ? RunConfig{} : load_config(s.config);
    if (s.seed) cfg.seed = *s.seed;
    if (!s.out.empty()) cfg.out = s.out;
    if (!s.corpus.empty()) cfg.corpus = s.corpus;
    cfg.validate();
    return cfg;
}

void make_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

std::vector<Document> need_corpus(const RunConfig& cfg) {
    if (cfg.corpus.empty()) throw ValidationError("no corpus given (--corpus or config 'corpus')");
    return parse_corpus(cfg.corpus);
}

const std::vector<Document>& pick(const DataSplit& d, const std::string& which) {
    if (which == "train") return d.train;
    if (which == "val") return d.val;
    if (which == "test") return d.test;
    throw ValidationError("unknown split '" + which + "'");
}

ProbabilityMap probabilities_for(const RunConfig& cfg, std::span<const Document> corpus,
                                 std::span<const Document> docs) {
    if (cfg.system == SystemKind::external_probs) {
        auto probs = read_external_probs(cfg.probs, corpus);
        check_coverage(probs, docs);
        return probs;
    }
    if (cfg.system == SystemKind::builtin_scorer) {
        if (cfg.model.empty()) throw ValidationError("builtin_scorer needs 'model' (--model)");
        return score_documents(load_model(cfg.model), docs);
    }
    throw ValidationError("texttiling produces no probabilities");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tseg: linear text segmentation toolkit"};
    app.require_subcommand(1);

    Shared s;
    std::string input, abbrev_file, model_path, probs_path, which = "test", segments_path;
    std::optional<double> tau;
    bool whole_corpus = false;
    SynthConfig synth;

    auto* ingest = app.add_subcommand("ingest", "Validate/convert a corpus into canonical JSONL");
    add_shared(ingest, s);
    ingest->add_option("--input", input, "Input JSONL (documents, raw 'text' or 'segments')")->required();
    ingest->add_option("--abbreviations", abbrev_file, "Abbreviation list for sentence splitting");

    auto* pairs = app.add_subcommand("pairs", "Generate balanced NSP training pairs from the train split");
    add_shared(pairs, s);

    auto* train_cmd = app.add_subcommand("train", "Train the built-in pair scorer");
    add_shared(train_cmd, s);

    auto* score = app.add_subcommand("score", "Write per-gap boundary probabilities");
    add_shared(score, s);
    score->add_option("--model", model_path, "Model file (overrides config)");
    score->add_flag("--all", whole_corpus, "Score the whole corpus instead of one split");
    score->add_option("--split", which, "Split to score: train|val|test");

    auto* segment = app.add_subcommand("segment", "Segment documents with the configured system");
    add_shared(segment, s);
    segment->add_option("--model", model_path, "Model file (builtin_scorer)");
    segment->add_option("--probs", probs_path, "Probability JSONL (external_probs)");
    segment->add_option("--tau", tau, "Decision threshold");
    segment->add_flag("--all", whole_corpus, "Segment the whole corpus");

    auto* tune = app.add_subcommand("tune", "Sweep tau on the validation split");
    add_shared(tune, s);
    tune->add_option("--model", model_path, "Model file (builtin_scorer)");
    tune->add_option("--probs", probs_path, "Probability JSONL (external_probs)");

    auto* eval = app.add_subcommand("eval", "Segment and evaluate the test split");
    add_shared(eval, s);
    eval->add_option("--model", model_path, "Pre-trained model (builtin_scorer)");
    eval->add_option("--probs", probs_path, "Probability JSONL (external_probs)");

    auto* cv = app.add_subcommand("cv", "Leave-one-group-out cross-validation");
    add_shared(cv, s);

    auto* analyze = app.add_subcommand("analyze", "Probability and error analysis");
    add_shared(analyze, s);
    analyze->add_option("--probs", probs_path, "Probability JSONL")->required();
    analyze->add_option("--segments", segments_path, "Hypothesis segments JSONL (doc_id, boundaries)");
    analyze->add_option("--tau", tau, "Threshold used when --segments is absent");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic topic corpus");
    add_shared(synth_cmd, s);
    synth_cmd->add_option("--documents", synth.documents);
    synth_cmd->add_option("--groups", synth.groups);
    synth_cmd->add_option("--topics", synth.topics);
    synth_cmd->add_option("--min-tokens", synth.min_tokens, "Minimum tokens per sentence");
    synth_cmd->add_option("--max-tokens", synth.max_tokens, "Maximum tokens per sentence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) {
            RunConfig cfg = resolve(s);
            const auto abbrevs = !abbrev_file.empty()        ? load_abbreviations(abbrev_file)
                                 : !cfg.abbreviations.empty() ? load_abbreviations(cfg.abbreviations)
                                                              : default_abbreviations();
            const auto docs = ingest_corpus(input, abbrevs);
            make_out_dir(cfg.out);
            const auto path = (fs::path(cfg.out) / "corpus.jsonl").string();
            write_corpus(docs, path);
            std::size_t sentences = 0, bounds = 0;
            for (const auto& d : docs) {
                sentences += d.size();
                bounds += d.boundaries.size();
            }
            std::cout << "documents " << docs.size() << ", sentences " << sentences
                      << ", boundaries " << bounds << " -> " << path << '\n';
        } else if (pairs->parsed()) {
            const RunConfig cfg = resolve(s);
            const auto corpus = need_corpus(cfg);
            const auto data = make_split(corpus, cfg);
            const auto set = build_training_pairs(data.train, cfg.pairs, cfg.seed);
            make_out_dir(cfg.out);
            const auto path = (fs::path(cfg.out) / "pairs.jsonl").string();
            write_pairs(set.pairs, path);
            std::cout << "inter " << set.adjacent_boundary << ", intra " << set.adjacent_continuation
                      << ", hard " << set.hard << " -> " << path << '\n';
            if (set.no_boundaries) std::cerr << "warning: training split has no gold boundaries\n";
        } else if (train_cmd->parsed()) {
            const RunConfig cfg = resolve(s);
            const auto corpus = need_corpus(cfg);
            const auto data = make_split(corpus, cfg);
            if (data.train.empty()) throw ValidationError("train split is empty");
            const auto result = train_builtin(cfg, data.train, data.val, cfg.seed);
            make_out_dir(cfg.out);
            save_model(result.model, (fs::path(cfg.out) / "model.json").string());
            write_train_log_csv(result.log, (fs::path(cfg.out) / "train_log.csv").string());
            std::cout << "epochs " << result.log.size() << ", best epoch " << result.best_epoch
                      << " -> " << (fs::path(cfg.out) / "model.json").string() << '\n';
        } else if (score->parsed()) {
            RunConfig cfg = resolve(s);
            if (!model_path.empty()) cfg.model = model_path;
            if (cfg.model.empty()) throw ValidationError("score needs --model");
            const auto corpus = need_corpus(cfg);
            std::vector<Document> docs = whole_corpus ? corpus : pick(make_split(corpus, cfg), which);
            const auto probs = score_documents(load_model(cfg.model), docs);
            make_out_dir(cfg.out);
            write_probs(probs, (fs::path(cfg.out) / "probs.jsonl").string());
            std::cout << "scored " << docs.size() << " documents\n";
        } else if (segment->parsed()) {
            RunConfig cfg = resolve(s);
            if (!model_path.empty()) cfg.model = model_path;
            if (!probs_path.empty()) {
                cfg.probs = probs_path;
                cfg.system = SystemKind::external_probs;
            }
            const double t = tau.value_or(cfg.segmenter.tau);
            const auto corpus = need_corpus(cfg);
            std::vector<Document> docs = whole_corpus ? corpus : make_split(corpus, cfg).test;
            make_out_dir(cfg.out);
            std::ofstream out(fs::path(cfg.out) / "segments.jsonl", std::ios::binary);
            if (!out) throw IoError("cannot write segments.jsonl");
            ProbabilityMap probs;
            if (cfg.system != SystemKind::texttiling) probs = probabilities_for(cfg, corpus, docs);
            for (const auto& d : docs) {
                Segmentation seg;
                if (cfg.system == SystemKind::texttiling) {
                    seg = texttiling_segment(d, cfg.texttiling);
                } else {
                    const auto it = probs.find(d.doc_id);
                    seg = segment_document(d, it == probs.end() ? std::span<const ProbabilityRecord>{}
                                                                : std::span<const ProbabilityRecord>(it->second), t);
                }
                out << json{{"doc_id", d.doc_id}, {"boundaries", masses_to_boundaries(seg)},
                            {"masses", seg.masses}}.dump()
                    << '\n';
            }
            std::cout << "segmented " << docs.size() << " documents\n";
        } else if (tune->parsed()) {
            RunConfig cfg = resolve(s);
            if (!model_path.empty()) cfg.model = model_path;
            if (!probs_path.empty()) {
                cfg.probs = probs_path;
                cfg.system = SystemKind::external_probs;
            }
            const auto corpus = need_corpus(cfg);
            const auto val = make_split(corpus, cfg).val;
            const auto probs = probabilities_for(cfg, corpus, val);
            const auto result = tune_threshold(val, probs, cfg.segmenter, cfg.metrics);
            make_out_dir(cfg.out);
            std::ofstream out(fs::path(cfg.out) / "sweep.csv", std::ios::binary);
            if (!out) throw IoError("cannot write sweep.csv");
            write_sweep_csv(result.table, out);
            std::cout << "tau* = " << fmt_num(result.tau_star, 2) << '\n';
        } else if (eval->parsed()) {
            RunConfig cfg = resolve(s);
            if (!model_path.empty()) cfg.model = model_path;
            if (!probs_path.empty()) {
                cfg.probs = probs_path;
                cfg.system = SystemKind::external_probs;
            }
            const auto report = cmd_eval(cfg);
            emit_report(report, cfg.out, cfg);
            std::cout << report.system << ": B-F1 " << fmt_num(report.macro.bf1, 4) << ", B "
                      << fmt_num(report.macro.b, 4) << ", Pk " << fmt_num(report.macro.pk, 4)
                      << ", WD " << fmt_num(report.macro.wd, 4) << " (tau " << fmt_num(report.tau, 2)
                      << ") -> " << cfg.out << '\n';
        } else if (cv->parsed()) {
            const RunConfig cfg = resolve(s);
            const auto report = cmd_cv(cfg);
            emit_cv_report(report, cfg.out, cfg);
            for (const auto& f : report.folds)
                std::cout << f.group << ": B-F1 " << fmt_num(f.report.macro.bf1, 4) << ", Pk "
                          << fmt_num(f.report.macro.pk, 4) << '\n';
        } else if (analyze->parsed()) {
            const RunConfig cfg = resolve(s);
            const auto corpus = need_corpus(cfg);
            const auto probs = read_external_probs(probs_path, corpus);
            std::vector<Document> docs;
            for (const auto& d : corpus)
                if (probs.count(d.doc_id)) docs.push_back(d);
            BoundaryMap hyp;
            if (!segments_path.empty()) {
                std::ifstream in(segments_path);
                if (!in) throw IoError("cannot open '" + segments_path + "'");
                std::string line;
                while (std::getline(in, line))
                    if (!line.empty()) {
                        const auto j = json::parse(line);
                        hyp[j.at("doc_id").get<std::string>()] =
                            j.at("boundaries").get<std::vector<std::size_t>>();
                    }
            } else {
                const double t = tau.value_or(cfg.segmenter.tau);
                for (const auto& d : docs) hyp[d.doc_id] = infer_boundaries(probs.at(d.doc_id), t);
            }
            EvalReport r;
            r.system = "analysis";
            r.probabilities = analyze_probabilities(probs, docs);
            r.positional = positional_error_profile(docs, hyp, cfg.metrics.n_t);
            r.groups = group_error_rates(docs, hyp, cfg.metrics.n_t);
            make_out_dir(cfg.out);
            const fs::path dir(cfg.out);
            {
                std::ofstream out(dir / "prob_hist.csv", std::ios::binary);
                write_prob_hist_csv(&*r.probabilities, out);
            }
            {
                std::ofstream out(dir / "positional.csv", std::ios::binary);
                write_positional_csv(r.positional, out);
            }
            {
                std::ofstream out(dir / "groups.csv", std::ios::binary);
                write_groups_csv(r.groups, out);
            }
            std::cout << "overlap " << fmt_num(r.probabilities->overlap_fraction, 4) << ", separation gap "
                      << (r.probabilities->separation_gap ? fmt_num(*r.probabilities->separation_gap, 4)
                                                          : std::string("n/a"))
                      << '\n';
        } else if (synth_cmd->parsed()) {
            const RunConfig cfg = resolve(s);
            synth.seed = cfg.seed;
            const auto docs = generate_synthetic_corpus(synth);
            make_out_dir(cfg.out);
            const auto path = (fs::path(cfg.out) / "corpus.jsonl").string();
            write_corpus(docs, path);
            std::cout << "wrote " << docs.size() << " documents -> " << path << '\n';
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
