#include "tseg/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tseg/error.hpp"
#include "tseg/format.hpp"
#include "tseg/kernels.hpp"
#include "tseg/segmenter.hpp"

namespace tseg {

using nlohmann::json;

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("train.learning_rate must be > 0");
    if (batch_size == 0) throw ValidationError("train.batch_size must be > 0");
    if (max_epochs == 0) throw ValidationError("train.max_epochs must be > 0");
    if (!(l2 >= 0.0)) throw ValidationError("train.l2 must be >= 0");
}

namespace {

void check_dims(const LinearScorer& model) {
    if (model.feature_dim != kSparseDim || model.weights.size() != kSparseDim + kDenseDim)
        throw ValidationError("model dimension mismatch: expected " + std::to_string(kSparseDim) +
                              " + " + std::to_string(kDenseDim) + " weights");
}

std::array<double, kDenseDim> standardize(const LinearScorer& model,
                                          const std::array<double, kDenseDim>& x) {
    std::array<double, kDenseDim> z;
    for (std::size_t k = 0; k < kDenseDim; ++k)
        z[k] = (x[k] - model.dense_center[k]) / model.dense_scale[k];
    return z;
}

// Hashed counts enter the model L2-normalized so that long sentences do
// not swamp the dense block.
double sparse_scale(const PairFeatures& f) {
    const double n = kernels::dot(f.value, f.value);
    return n > 0.0 ? 1.0 / std::sqrt(n) : 0.0;
}

// Mean and population standard deviation per dense feature; constant
// features keep scale 1 so they cannot blow up.
void fit_standardization(LinearScorer& model, const std::vector<PairFeatures>& feats) {
    const double n = static_cast<double>(feats.size());
    for (std::size_t k = 0; k < kDenseDim; ++k) {
        double mean = 0.0;
        for (const auto& f : feats) mean += f.dense[k];
        mean /= n;
        double var = 0.0;
        for (const auto& f : feats) var += (f.dense[k] - mean) * (f.dense[k] - mean);
        const double sd = std::sqrt(var / n);
        model.dense_center[k] = mean;
        model.dense_scale[k] = sd > 1e-12 ? sd : 1.0;
    }
}

}  // namespace

double decision_value(const LinearScorer& model, const PairFeatures& f) {
    check_dims(model);
    if (f.index.size() != f.value.size())
        throw ValidationError("feature index/value length mismatch");
    if (!f.index.empty() && f.index.back() >= model.feature_dim)
        throw ValidationError("feature index out of range for model dimension");
    const std::span<const double> w(model.weights);
    const auto z = standardize(model, f.dense);
    return kernels::sparse_dot(w, f.index, f.value) * sparse_scale(f) +
           kernels::dot(w.subspan(model.feature_dim, kDenseDim), z) + model.bias;
}

double predict(const LinearScorer& model, const PairFeatures& f) {
    return logistic(decision_value(model, f));
}

std::vector<ProbabilityRecord> score_document(const LinearScorer& model, const Document& doc) {
    std::vector<ProbabilityRecord> out;
    if (doc.size() < 2) return out;
    out.reserve(doc.gap_count());
    for (std::size_t g = 0; g + 1 < doc.size(); ++g)
        out.push_back({doc.doc_id, g, predict(model, featurize(doc.sentences[g], doc.sentences[g + 1]))});
    return out;
}

ProbabilityMap score_documents(const LinearScorer& model, std::span<const Document> docs) {
    ProbabilityMap out;
    for (const auto& d : docs) out[d.doc_id] = score_document(model, d);
    return out;
}

namespace {

struct Sample {
    PairFeatures f;
    std::array<double, kDenseDim> z;  // standardized dense block
    double sparse_scale;
    int y;
    double dist;
};

double full_loss(const LinearScorer& model, const std::vector<Sample>& data,
                 const LossConfig& cfg) {
    std::vector<LossExample> batch;
    batch.reserve(data.size());
    for (const auto& s : data) batch.push_back({predict(model, s.f), s.y, s.dist});
    return seg_loss(batch, cfg);
}

struct ValDoc {
    const Document* doc;
    std::vector<PairFeatures> gaps;
};

double val_bf1(const LinearScorer& model, const std::vector<ValDoc>& val, const MetricConfig& mc) {
    double sum = 0.0;
    for (const auto& v : val) {
        std::vector<std::size_t> hyp;
        for (std::size_t g = 0; g < v.gaps.size(); ++g)
            if (predict(model, v.gaps[g]) > 0.5) hyp.push_back(g);
        sum += boundary_f1(v.doc->boundaries, hyp, mc.n_t).f1;
    }
    return sum / static_cast<double>(val.size());
}

}  // namespace

TrainResult train(std::span<const PairExample> train_pairs, std::span<const Document> val_docs,
                  const LossConfig& loss_cfg, const TrainConfig& cfg,
                  const MetricConfig& metric_cfg) {
    if (train_pairs.empty()) throw ValidationError("training set is empty");
    loss_cfg.validate();
    cfg.validate();

    std::vector<PairFeatures> feats;
    feats.reserve(train_pairs.size());
    for (const auto& p : train_pairs) feats.push_back(featurize(p.text_a, p.text_b));

    LinearScorer model;
    fit_standardization(model, feats);

    std::vector<Sample> data;
    data.reserve(train_pairs.size());
    for (std::size_t i = 0; i < train_pairs.size(); ++i) {
        const auto z = standardize(model, feats[i].dense);
        const double sc = sparse_scale(feats[i]);
        data.push_back({std::move(feats[i]), z, sc, static_cast<int>(train_pairs[i].label),
                        train_pairs[i].distance()});
    }

    std::vector<ValDoc> val;
    for (const auto& d : val_docs) {
        ValDoc v{&d, {}};
        for (std::size_t g = 0; g + 1 < d.size(); ++g)
            v.gaps.push_back(featurize(d.sentences[g], d.sentences[g + 1]));
        val.push_back(std::move(v));
    }

    TrainResult result;
    result.model = model;
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<LossExample> batch;
    std::span<double> w(model.weights);
    auto dense_w = w.subspan(kSparseDim, kDenseDim);
    const double decay = 1.0 - cfg.learning_rate * cfg.l2;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) {
                const auto& s = data[order[i]];
                batch.push_back({predict(model, s.f), s.y, s.dist});
            }
            const auto grad = seg_loss_grad(batch, loss_cfg);

            if (decay != 1.0) kernels::scale(decay, w);
            double bias_grad = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const double g = grad[i - start];
                if (g == 0.0) continue;
                const auto& s = data[order[i]];
                const double step = -cfg.learning_rate * g;
                const double sstep = step * s.sparse_scale;
                for (std::size_t j = 0; j < s.f.index.size(); ++j) w[s.f.index[j]] += sstep * s.f.value[j];
                kernels::axpy(step, s.z, dense_w);
                bias_grad += g;
            }
            model.bias -= cfg.learning_rate * bias_grad;
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.train_loss = full_loss(model, data, loss_cfg);
        entry.val_bf1 = val.empty() ? 0.0 : val_bf1(model, val, metric_cfg);
        const double score = val.empty() ? -entry.train_loss : entry.val_bf1;
        if (score > best_score) {
            best_score = score;
            since_best = 0;
            entry.improved = true;
            result.model = model;
            result.best_epoch = epoch;
        } else {
            ++since_best;
        }
        result.log.push_back(entry);
        if (since_best >= cfg.patience) break;
    }
    return result;
}

std::string model_to_json(const LinearScorer& model) {
    check_dims(model);
    json j;
    j["version"] = model.version;
    j["feature_dim"] = model.feature_dim;
    j["dense_names"] = json::array();
    for (const auto name : kDenseNames) j["dense_names"].push_back(std::string(name));
    json weights = json::array();
    for (std::size_t i = 0; i < model.weights.size(); ++i)
        if (model.weights[i] != 0.0) weights.push_back(json::array({i, model.weights[i]}));
    j["weights"] = std::move(weights);
    j["bias"] = model.bias;
    j["dense_center"] = model.dense_center;
    j["dense_scale"] = model.dense_scale;
    return j.dump();
}

LinearScorer model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const int version = j.at("version").get<int>();
        if (version != kModelVersion)
            throw ValidationError("unsupported model version " + std::to_string(version) +
                                  " (expected " + std::to_string(kModelVersion) + ")");
        LinearScorer m;
        m.feature_dim = j.at("feature_dim").get<std::uint32_t>();
        if (m.feature_dim != kSparseDim)
            throw ValidationError("model feature_dim " + std::to_string(m.feature_dim) +
                                  " does not match " + std::to_string(kSparseDim));
        const auto& names = j.at("dense_names");
        if (names.size() != kDenseDim)
            throw ValidationError("model dense feature list does not match this build");
        for (std::size_t i = 0; i < kDenseDim; ++i)
            if (names[i].get<std::string>() != kDenseNames[i])
                throw ValidationError("model dense feature list does not match this build");
        for (const auto& entry : j.at("weights")) {
            const auto idx = entry.at(0).get<std::size_t>();
            const auto val = entry.at(1).get<double>();
            if (idx >= m.weights.size()) throw ValidationError("model weight index out of range");
            if (!std::isfinite(val)) throw ValidationError("model weight is not finite");
            m.weights[idx] = val;
        }
        m.bias = j.at("bias").get<double>();
        if (!std::isfinite(m.bias)) throw ValidationError("model bias is not finite");
        m.dense_center = j.at("dense_center").get<std::array<double, kDenseDim>>();
        m.dense_scale = j.at("dense_scale").get<std::array<double, kDenseDim>>();
        for (std::size_t k = 0; k < kDenseDim; ++k)
            if (!std::isfinite(m.dense_center[k]) || !(m.dense_scale[k] > 0.0) ||
                !std::isfinite(m.dense_scale[k]))
                throw ValidationError("model dense standardization is invalid");
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const LinearScorer& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file '" + path + "'");
    out << model_to_json(model) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

LinearScorer load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

void write_train_log_csv(const std::vector<EpochLog>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write training log '" + path + "'");
    out << "epoch,train_loss,val_bf1,improved\n";
    for (const auto& e : log)
        out << e.epoch << ',' << fmt_num(e.train_loss, 9) << ',' << fmt_num(e.val_bf1) << ','
            << (e.improved ? 1 : 0) << '\n';
}

}  // namespace tseg
