#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "tseg/error.hpp"
#include "tseg/format.hpp"
#include "tseg/kernels.hpp"
#include "tseg/pipeline.hpp"

namespace tseg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::map<std::string, std::string> input_paths(const RunConfig& cfg) {
    std::map<std::string, std::string> out;
    if (!cfg.corpus.empty()) out["corpus"] = cfg.corpus;
    if (cfg.split.mode == SplitMode::predefined) out["split"] = cfg.split.file;
    if (cfg.system == SystemKind::external_probs) out["probs"] = cfg.probs;
    if (cfg.system == SystemKind::builtin_scorer && !cfg.model.empty()) out["model"] = cfg.model;
    return out;
}

namespace {

json macro_json(const MacroMetrics& m) {
    return {{"bf1", m.bf1}, {"b", m.b}, {"pk", m.pk}, {"wd", m.wd},
            {"documents", m.documents}, {"pk_documents", m.pk_documents}};
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".write_probe";
    {
        std::ofstream t(probe);
        if (!t) throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

std::string sanitize(std::string_view name) {
    std::string s;
    for (const char c : name)
        s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return s.empty() ? "_" : s;
}

void write_report_files(const EvalReport& r, const fs::path& dir) {
    {
        auto out = open_out(dir / "metrics.csv");
        out << "doc_id,group,n,ref_boundaries,hyp_boundaries,pk,wd,bf1,b,skipped_flag\n";
        for (const auto& d : r.per_doc)
            out << csv_field(d.doc_id) << ',' << csv_field(d.group.value_or("")) << ',' << d.n << ','
                << d.ref_boundaries << ',' << d.hyp_boundaries << ',' << fmt_num(d.pk) << ',' << fmt_num(d.wd) << ','
                << fmt_num(d.bf1) << ',' << fmt_num(d.b) << ',' << (d.skipped ? 1 : 0) << '\n';
    }
    {
        auto out = open_out(dir / "macro.csv");
        out << "system,tau,documents,pk_documents,bf1,b,pk,wd\n";
        out << r.system << ',' << fmt_num(r.tau) << ',' << r.macro.documents << ','
            << r.macro.pk_documents << ',' << fmt_num(r.macro.bf1) << ',' << fmt_num(r.macro.b)
            << ',' << fmt_num(r.macro.pk) << ',' << fmt_num(r.macro.wd) << '\n';
    }
    {
        auto out = open_out(dir / "macro.md");
        out << "| System | B-F1 | B | Pk | WD |\n|---|---|---|---|---|\n";
        out << "| " << r.system << " | " << fmt_num(r.macro.bf1, 4) << " | " << fmt_num(r.macro.b, 4)
            << " | " << fmt_num(r.macro.pk, 4) << " | " << fmt_num(r.macro.wd, 4) << " |\n\n";
        out << "Macro-averaged over " << r.macro.documents << " test documents (Pk/WD over "
            << r.macro.pk_documents << "); tau = " << fmt_num(r.tau, 2)
            << (r.tuned ? " (tuned on validation B-F1)" : " (fixed)") << ".\n";
        if (r.probabilities) {
            out << "\nAmbiguous probabilities in [0.4, 0.6]: "
                << fmt_num(r.probabilities->overlap_fraction, 4) << "; separation gap: "
                << (r.probabilities->separation_gap ? fmt_num(*r.probabilities->separation_gap, 4)
                                                    : std::string("n/a"))
                << ".\n";
        }
    }
    {
        auto out = open_out(dir / "sweep.csv");
        write_sweep_csv(r.sweep, out);
    }
    {
        auto out = open_out(dir / "prob_hist.csv");
        write_prob_hist_csv(r.probabilities ? &*r.probabilities : nullptr, out);
    }
    {
        auto out = open_out(dir / "positional.csv");
        write_positional_csv(r.positional, out);
    }
    {
        auto out = open_out(dir / "groups.csv");
        write_groups_csv(r.groups, out);
    }
    {
        auto out = open_out(dir / "segments.jsonl");
        for (const auto& [id, gaps] : r.hypotheses)
            out << json{{"doc_id", id}, {"boundaries", gaps}}.dump() << '\n';
    }
    if (r.model) save_model(*r.model, (dir / "model.json").string());
    if (!r.train_log.empty()) write_train_log_csv(r.train_log, (dir / "train_log.csv").string());
}

}  // namespace

json build_manifest(const RunConfig& cfg, const EvalReport* report) {
    json m;
    m["toolkit"] = "tseg";
    m["version"] = kToolkitVersion;
    m["seed"] = cfg.seed;
    m["kernels"] = std::string(kernels::backend_name(kernels::active_backend()));
    m["config"] = config_to_json(cfg);
    json digests = json::object();
    for (const auto& [role, path] : input_paths(cfg))
        digests[role] = {{"path", path}, {"sha256", sha256_file(path)}};
    m["inputs"] = std::move(digests);
    if (report) {
        m["system"] = report->system;
        m["tau"] = report->tau;
        m["tau_tuned"] = report->tuned;
        m["sweep_source"] = report->sweep_source;
        m["documents"] = {{"train", report->train_docs}, {"val", report->val_docs},
                          {"test", report->test_docs}};
        m["macro"] = macro_json(report->macro);
        if (report->probabilities) {
            m["overlap_fraction"] = report->probabilities->overlap_fraction;
            m["separation_gap"] = report->probabilities->separation_gap
                                      ? json(*report->probabilities->separation_gap)
                                      : json(nullptr);
        }
        if (report->model) {
            std::size_t best = 0;
            for (const auto& e : report->train_log)
                if (e.improved) best = e.epoch;
            m["training"] = {{"epochs_run", report->train_log.size()}, {"best_epoch", best}};
        }
    }
    return m;
}

void emit_report(const EvalReport& report, const std::string& outdir, const RunConfig& cfg) {
    if (report.per_doc.empty()) throw ValidationError("refusing to write a report for an empty test set");
    const auto manifest = build_manifest(cfg, &report);
    const fs::path dir(outdir);
    ensure_dir(dir);
    write_report_files(report, dir);
    auto out = open_out(dir / "run_manifest.json");
    out << manifest.dump(2) << '\n';
}

void emit_cv_report(const CvReport& cv, const std::string& outdir, const RunConfig& cfg) {
    if (cv.folds.empty()) throw ValidationError("no folds to report");
    for (const auto& f : cv.folds)
        if (f.report.per_doc.empty())
            throw ValidationError("fold '" + f.group + "' has an empty test set");
    const fs::path dir(outdir);
    ensure_dir(dir);

    json manifest = build_manifest(cfg, nullptr);
    manifest["folds"] = json::array();
    for (const auto& f : cv.folds) {
        const auto sub = dir / ("fold_" + sanitize(f.group));
        ensure_dir(sub);
        write_report_files(f.report, sub);
        manifest["folds"].push_back({{"group", f.group},
                                     {"tau", f.report.tau},
                                     {"train", f.report.train_docs},
                                     {"val", f.report.val_docs},
                                     {"test", f.report.test_docs},
                                     {"macro", macro_json(f.report.macro)}});
    }

    struct Row {
        const char* name;
        double MacroMetrics::*field;
    };
    const Row rows[] = {{"bf1", &MacroMetrics::bf1}, {"b", &MacroMetrics::b},
                        {"pk", &MacroMetrics::pk}, {"wd", &MacroMetrics::wd}};
    {
        auto out = open_out(dir / "cv_summary.csv");
        out << "metric";
        for (const auto& f : cv.folds) out << ',' << csv_field(f.group);
        out << ",mean\n";
        for (const auto& row : rows) {
            out << row.name;
            double sum = 0.0;
            for (const auto& f : cv.folds) {
                const double v = f.report.macro.*row.field;
                sum += v;
                out << ',' << fmt_num(v);
            }
            out << ',' << fmt_num(sum / static_cast<double>(cv.folds.size())) << '\n';
        }
    }
    {
        auto out = open_out(dir / "cv_summary.md");
        out << "| Metric |";
        for (const auto& f : cv.folds) out << ' ' << f.group << " |";
        out << " Mean |\n|---|";
        for (std::size_t i = 0; i <= cv.folds.size(); ++i) out << "---|";
        out << '\n';
        const char* labels[] = {"B-F1", "B", "Pk", "WD"};
        for (std::size_t i = 0; i < 4; ++i) {
            out << "| " << labels[i] << " |";
            double sum = 0.0;
            for (const auto& f : cv.folds) {
                const double v = f.report.macro.*rows[i].field;
                sum += v;
                out << ' ' << fmt_num(v, 4) << " |";
            }
            out << ' ' << fmt_num(sum / static_cast<double>(cv.folds.size()), 4) << " |\n";
        }
    }
    auto out = open_out(dir / "run_manifest.json");
    out << manifest.dump(2) << '\n';
}

}  // namespace tseg
