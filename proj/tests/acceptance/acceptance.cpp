// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if all
// pass. Tolerances and time limits are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "frozen_values.hpp"
#include "oracles.hpp"
#include "tseg/kernels.hpp"
#include "tseg/pipeline.hpp"
#include "tseg/synth.hpp"
#include "tseg/texttiling.hpp"

using namespace tseg;
namespace fs = std::filesystem;

namespace {

constexpr double kMetricTol = 1e-12;      // C1
constexpr double kFixtureTol = 1e-12;     // C2
constexpr double kGradRelTol = 1e-4;      // C4, relative
constexpr double kRoundoffUlps = 4.0;     // C4, FD noise = ulps * eps * |L| / h
constexpr double kFdStep = 1e-5;          // C4
constexpr double kMinBoundaryFrac = 0.28; // C5
constexpr double kMaxBoundaryFrac = 0.32;
constexpr double kMinBf1 = 0.85;          // C6
constexpr double kMaxPk = 0.10;
constexpr double kMinMargin = 0.15;
constexpr double kLimitC1 = 10.0;         // seconds
constexpr double kLimitC3 = 60.0;
constexpr double kLimitC6 = 300.0;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Options {
    std::string python = "python3";
    std::string oracle;
    std::string frozen;
};

// C1 -----------------------------------------------------------------------
Outcome metric_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    std::size_t pairs = 0, evaluations = 0;
    while (pairs < 1000) {
        const std::size_t n = 2 + rng() % 29;  // 2..30
        const double p = 0.05 + 0.5 * std::uniform_real_distribution<double>()(rng);
        const auto ref = oracle::random_segmentation(n, p, rng);
        const auto hyp = oracle::random_segmentation(n, p, rng);
        ++pairs;
        std::vector<std::size_t> ks{compute_k(ref), 1 + rng() % (n - 1)};
        for (auto k : ks) {
            if (k >= n) continue;
            worst = std::max(worst, std::fabs(pk(ref, hyp, k) - oracle::pk(ref, hyp, k)));
            worst = std::max(worst, std::fabs(window_diff(ref, hyp, k) - oracle::window_diff(ref, hyp, k)));
            ++evaluations;
        }
    }
    const double t = seconds_since(t0);
    return {worst <= kMetricTol && t < kLimitC1,
            fmt("%zu pairs (n<=30), %zu k values, max |diff| %.1e (tol %.0e), %.2f s (limit %.0f s)",
                pairs, evaluations, worst, kMetricTol, t, kLimitC1)};
}

// C2 -----------------------------------------------------------------------
Outcome fixtures(const Options& opt) {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) failures.emplace_back(what);
    };
    auto near = [](double a, double b) { return std::fabs(a - b) <= kFixtureTol; };

    const Segmentation r33{{3, 3}}, h6{{6}};
    expect(compute_k(r33) == 2, "k([3,3])");
    expect(near(pk(r33, h6, 2), 0.5) && near(frozen::kPk33vs6, 0.5), "Pk [3,3] vs [6]");
    expect(near(window_diff(r33, h6, 2), 0.5) && near(frozen::kWd33vs6, 0.5), "WD [3,3] vs [6]");
    const std::vector<std::size_t> five{5}, six{6}, nine{9};
    expect(near(boundary_f1(five, six, 2).f1, 1.0), "B-F1 {5}/{6}");
    expect(near(boundary_similarity(five, six, 2), 0.5), "B {5}/{6}");
    expect(near(boundary_similarity(five, nine, 2), frozen::kBFar), "B {5}/{9}");
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const auto s = oracle::random_segmentation(2 + rng() % 29, 0.3, rng);
        Document d;
        d.doc_id = "d";
        d.sentences.assign(s.sentence_count(), "x");
        d.boundaries = masses_to_boundaries(s);
        const auto m = evaluate_document(d, s);
        if (!(m.pk == 0.0 && m.wd == 0.0 && m.bf1 == 1.0 && m.b == 1.0)) {
            failures.emplace_back("identity (0,0,1,1)");
            break;
        }
    }

    // Library values against the frozen constants.
    const std::vector<LossExample> one{{0.5, 1, 0.0}};
    expect(near(focal_loss(0.5, 1, 1.5, 0.8), frozen::kFocalHalf), "focal example");
    expect(near(boundary_term(0.5, 0, 2.0, 2.0), frozen::kBoundaryTermDist2), "boundary term example");
    expect(near(seg_loss(one, LossConfig{}), frozen::kSegLossSingle), "seg_loss example");
    expect(near(logistic(std::log(3.0)), frozen::kLogisticLn3), "logistic(ln 3)");
    const auto sm = smooth(std::vector<double>{0, 1, 0}, 1, 1);
    for (std::size_t i = 0; i < 3; ++i) expect(near(sm[i], frozen::kSmooth010[i]), "smoothing example");
    PseudoSentences half{{{"a", "b"}, {"b", "c"}}, {0}};
    expect(near(gap_similarities(half, 1)[0], frozen::kCosine110_011), "block cosine example");
    expect(gap_decile(8, 10) == frozen::kDecileGap8of10, "decile example");
    const std::vector<double> bp{0.9, 0.95}, cp{0.05, 0.1};
    expect(near(*analyze_probabilities(bp, cp).separation_gap, frozen::kSeparationGap), "separation gap");

    std::string oracle_note = "oracle script not run";
    bool oracle_ok = true;
    if (!opt.oracle.empty()) {
        const std::string cmd = "\"" + opt.python + "\" \"" + opt.oracle + "\" \"" + opt.frozen + "\" > " +
                                (fs::temp_directory_path() / "tseg_oracle.log").string() + " 2>&1";
        oracle_ok = std::system(cmd.c_str()) == 0;
        oracle_note = oracle_ok ? "independent oracle script agrees" : "ORACLE SCRIPT DISAGREES";
    } else {
        oracle_ok = false;
    }
    std::string detail = fmt("%zu fixture failures; %s (tol %.0e)", failures.size(), oracle_note.c_str(), kFixtureTol);
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty() && oracle_ok, detail};
}

// C3 -----------------------------------------------------------------------
Outcome matching_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t instances = 0, mismatches = 0;
    for (std::size_t n_t : {1u, 2u, 3u}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            const std::size_t gaps = n - 1;
            std::vector<std::vector<std::size_t>> sets;
            for (unsigned mask = 0; mask < (1u << gaps); ++mask) {
                std::vector<std::size_t> s;
                for (std::size_t g = 0; g < gaps; ++g)
                    if (mask & (1u << g)) s.push_back(g);
                if (s.size() <= 5) sets.push_back(std::move(s));
            }
            for (const auto& ref : sets)
                for (const auto& hyp : sets) {
                    ++instances;
                    const auto m = match_boundaries(ref, hyp, n_t);
                    const auto o = oracle::exhaustive_match(ref, hyp, n_t);
                    std::vector<std::size_t> choice(ref.size(), SIZE_MAX);
                    double cost = static_cast<double>(m.misses.size() + m.false_alarms.size());
                    for (const auto* list : {&m.matches, &m.transpositions})
                        for (const auto& p : *list) {
                            const auto i = static_cast<std::size_t>(
                                std::lower_bound(ref.begin(), ref.end(), p.ref_gap) - ref.begin());
                            choice[i] = p.hyp_gap;
                            cost += static_cast<double>(std::labs(p.offset)) / static_cast<double>(n_t);
                        }
                    if (choice != o.choice || std::fabs(cost - o.cost) > 1e-12 ||
                        static_cast<int>(m.matches.size()) != o.exact ||
                        static_cast<int>(m.transpositions.size()) != o.trans)
                        ++mismatches;
                }
        }
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < kLimitC3,
            fmt("%zu instances (n<=8, |sets|<=5, n_t in {1,2,3}), %zu mismatches, %.2f s (limit %.0f s)",
                instances, mismatches, t, kLimitC3)};
}

// C4 -----------------------------------------------------------------------
Outcome gradient_check() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 2.5);
    double worst = 0.0;
    std::size_t checked = 0, infinite = 0, failures = 0, resolved = 0;
    for (int draw = 0; draw < 100; ++draw) {
        LossConfig cfg;
        cfg.gamma = 3.0 * u(rng);
        cfg.alpha = 0.05 + 0.95 * u(rng);
        cfg.lambda1 = u(rng);
        cfg.lambda2 = u(rng);
        cfg.conf_margin = 0.1 + 0.8 * u(rng);
        cfg.sigma = 0.5 + 4.0 * u(rng);
        const std::size_t n = 1 + rng() % 32;
        std::vector<double> logits, dist;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            logits.push_back(std::clamp(z(rng), -8.0, 8.0));
            y.push_back(static_cast<int>(rng() % 2));
            const bool inf = rng() % 4 == 0;
            infinite += inf;
            dist.push_back(inf ? std::numeric_limits<double>::infinity() : static_cast<double>(rng() % 8));
        }
        std::vector<LossExample> batch;
        for (std::size_t i = 0; i < n; ++i) batch.push_back({logistic(logits[i]), y[i], dist[i]});
        const auto g = seg_loss_grad(batch, cfg);
        const auto fd = oracle::fd_grad(logits, y, dist, cfg, kFdStep);
        // A central difference of the batch loss carries an absolute cancellation error of
        // a few ulps of |L| divided by h; the relative tolerance applies on top of it.
        const double noise = kRoundoffUlps * std::numeric_limits<double>::epsilon() *
                             std::fabs(seg_loss(batch, cfg)) / kFdStep;
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = std::max(std::fabs(g[i]), std::fabs(fd[i]));
            const double err = std::fabs(g[i] - fd[i]);
            if (err > kGradRelTol * scale + noise) ++failures;
            if (kGradRelTol * scale >= noise) {
                worst = std::max(worst, err / scale);
                ++resolved;
            }
            ++checked;
        }
    }
    return {failures == 0,
            fmt("100 draws, %zu logits (%zu with dist=inf), %zu failures of |g-fd| <= %.0e*|g| + %.0f*eps*|L|/h "
                "(h=%.0e); max rel err %.2e over the %zu gradients where the noise term is below 1e-4*|g|",
                checked, infinite, failures, kGradRelTol, kRoundoffUlps, kFdStep, worst, resolved)};
}

// C5 -----------------------------------------------------------------------
std::string pairs_bytes(const std::vector<Document>& docs, std::uint64_t seed) {
    std::ostringstream out;
    write_pairs(build_training_pairs(docs, PairGenConfig{}, seed).pairs, out);
    return out.str();
}

Outcome pair_contract() {
    SynthConfig sc;
    sc.documents = 100;
    sc.seed = 55;
    const auto docs = generate_synthetic_corpus(sc);
    const auto set = build_training_pairs(docs, PairGenConfig{}, 13);
    const double frac = static_cast<double>(set.adjacent_boundary) /
                        static_cast<double>(set.adjacent_boundary + set.adjacent_continuation);
    std::map<std::string, std::size_t> hard;
    for (const auto& p : set.pairs)
        if (p.kind == PairKind::hard) ++hard[p.doc_id];
    std::size_t max_hard = 0;
    for (const auto& [id, n] : hard) max_hard = std::max(max_hard, n);
    const bool identical = pairs_bytes(docs, 13) == pairs_bytes(docs, 13);
    return {frac >= kMinBoundaryFrac && frac <= kMaxBoundaryFrac && max_hard <= 10 && identical,
            fmt("100 docs, boundary fraction %.4f (range [%.2f, %.2f]), max hard negatives/doc %zu (<=10), "
                "repeat run %s",
                frac, kMinBoundaryFrac, kMaxBoundaryFrac, max_hard, identical ? "byte-identical" : "DIFFERS")};
}

// C6 / C7 share the trained model.
struct EndToEnd {
    EvalReport scorer;
    EvalReport tiling;
    std::vector<Document> corpus;
    double seconds = 0.0;
};

EndToEnd run_end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    EndToEnd e;
    e.corpus = generate_synthetic_corpus(SynthConfig{});
    RunConfig cfg;  // default LossConfig, TrainConfig, chronological 60/20/20
    const auto data = make_split(e.corpus, cfg);
    e.scorer = run_system(cfg, data, std::nullopt, cfg.seed);
    cfg.system = SystemKind::texttiling;
    e.tiling = run_system(cfg, data, std::nullopt, cfg.seed);
    e.seconds = seconds_since(t0);
    return e;
}

Outcome synthetic_end_to_end(const EndToEnd& e) {
    const double margin = e.scorer.macro.bf1 - e.tiling.macro.bf1;
    const bool ok = e.scorer.macro.bf1 >= kMinBf1 && e.scorer.macro.pk <= kMaxPk && margin >= kMinMargin &&
                    e.seconds < kLimitC6;
    return {ok, fmt("200 docs, split %zu/%zu/%zu; scorer B-F1 %.4f (>= %.2f), Pk %.4f (<= %.2f), tau %.2f; "
                    "TextTiling B-F1 %.4f; margin %.4f (>= %.2f); %.1f s (limit %.0f s)",
                    e.scorer.train_docs, e.scorer.val_docs, e.scorer.test_docs, e.scorer.macro.bf1, kMinBf1,
                    e.scorer.macro.pk, kMaxPk, e.scorer.tau, e.tiling.macro.bf1, margin, kMinMargin, e.seconds,
                    kLimitC6)};
}

Outcome threshold_monotonicity(const EndToEnd& e) {
    const auto probs = score_documents(*e.scorer.model, e.corpus);
    const auto taus = ThresholdGrid{}.values();
    std::size_t violations = 0, comparisons = 0;
    for (const auto& d : e.corpus) {
        const auto& recs = probs.at(d.doc_id);
        std::vector<std::size_t> prev = infer_boundaries(recs, taus.front());
        for (std::size_t i = 1; i < taus.size(); ++i) {
            const auto cur = infer_boundaries(recs, taus[i]);
            ++comparisons;
            if (!std::includes(prev.begin(), prev.end(), cur.begin(), cur.end())) ++violations;
            prev = cur;
        }
    }
    return {violations == 0, fmt("%zu documents x %zu consecutive tau pairs, %zu nesting violations",
                                 e.corpus.size(), taus.size() - 1, violations)};
}

// C8 -----------------------------------------------------------------------
std::map<std::string, std::string> csv_files(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        out[fs::relative(entry.path(), root).string()] = ss.str();
    }
    return out;
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "tseg_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    SynthConfig sc;
    sc.documents = 60;
    sc.groups = 3;
    write_corpus(generate_synthetic_corpus(sc), (root / "corpus.jsonl").string());

    RunConfig cfg;
    cfg.corpus = (root / "corpus.jsonl").string();
    std::size_t files = 0, differing = 0;
    for (const char* cmd : {"eval", "cv"}) {
        std::map<std::string, std::string> runs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto dir = root / (std::string(cmd) + std::to_string(rep));
            if (std::string(cmd) == "eval") emit_report(cmd_eval(cfg), dir.string(), cfg);
            else emit_cv_report(cmd_cv(cfg), dir.string(), cfg);
            runs[rep] = csv_files(dir);
        }
        files += runs[0].size();
        if (runs[0].size() != runs[1].size()) ++differing;
        for (const auto& [name, body] : runs[0]) {
            const auto it = runs[1].find(name);
            if (it == runs[1].end() || it->second != body) ++differing;
        }
    }
    return {differing == 0 && files > 0,
            fmt("cmd_eval + cmd_cv run twice (60 docs, 3 groups): %zu CSV files compared, %zu differ", files,
                differing)};
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--oracle") opt.oracle = argv[i + 1];
        else if (flag == "--python") opt.python = argv[i + 1];
        else if (flag == "--frozen") opt.frozen = argv[i + 1];
    }

    std::printf("kernels: %s\n", std::string(kernels::backend_name(kernels::active_backend())).c_str());
    int failed = 0;
    auto report = [&](int id, const char* title, const Outcome& o) {
        std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    };
    report(1, "metric oracle equivalence", metric_oracle());
    report(2, "hand-worked fixtures", fixtures(opt));
    report(3, "match_boundaries vs exhaustive assignment", matching_oracle());
    report(4, "gradient check", gradient_check());
    report(5, "pair-generation contract", pair_contract());
    const auto e2e = run_end_to_end();
    report(6, "synthetic end-to-end", synthetic_end_to_end(e2e));
    report(7, "threshold monotonicity", threshold_monotonicity(e2e));
    report(8, "determinism", determinism());
    std::printf("%d/8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
