#include "finray/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>

#include "finray/config.hpp"
#include "finray/errors.hpp"
#include "finray/knn.hpp"
#include "finray/png_io.hpp"
#include "finray/rng.hpp"
#include "finray/svm.hpp"

namespace fs = std::filesystem;

namespace finray {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw InvalidArgument("train config: learning_rate must be > 0");
    if (batch_size < 1) throw InvalidArgument("train config: batch_size must be >= 1");
    if (epochs < 1) throw InvalidArgument("train config: epochs must be >= 1");
    if (grad_clip && *grad_clip <= 0.0)
        throw InvalidArgument("train config: grad_clip must be > 0");
}

std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& m, double train_fraction,
                                                  std::uint64_t seed) {
    if (m.records.empty()) throw DataError("split: empty manifest");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidArgument("split: train_fraction must be in (0,1)");

    DatasetManifest train_m = m, val_m = m;
    train_m.records.clear();
    val_m.records.clear();

    auto emit = [&](const std::vector<std::size_t>& idx, std::size_t n_train) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            ManifestRecord r = m.records[idx[i]];
            r.split = i < n_train ? "train" : "val";
            (i < n_train ? train_m : val_m).records.push_back(std::move(r));
        }
    };

    if (m.kind == DatasetKind::Classification) {
        for (int cls = 0; cls < 4; ++cls) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < m.records.size(); ++i)
                if (m.records[i].class_label == cls) idx.push_back(i);
            if (idx.empty()) continue;
            Rng rng(mix_seed(seed, 0x5117 + static_cast<std::uint64_t>(cls)));
            rng.shuffle(idx);
            emit(idx, static_cast<std::size_t>(
                          std::llround(train_fraction * static_cast<double>(idx.size()))));
        }
    } else {
        std::vector<std::size_t> idx(m.records.size());
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng(mix_seed(seed, 0x5917));
        rng.shuffle(idx);
        emit(idx, static_cast<std::size_t>(
                      std::llround(train_fraction * static_cast<double>(idx.size()))));
    }

    auto by_id = [](const ManifestRecord& a, const ManifestRecord& b) { return a.id < b.id; };
    std::sort(train_m.records.begin(), train_m.records.end(), by_id);
    std::sort(val_m.records.begin(), val_m.records.end(), by_id);
    return {train_m, val_m};
}

namespace {

// Quantized CHW cache of dataset inputs plus labels/targets; keeps the large
// regression sets within memory while staying bit-deterministic.
struct LoadedData {
    int in_h = 0, in_w = 0;
    std::vector<std::vector<std::uint8_t>> q; // CHW, round(v*255)
    std::vector<int> labels;
    std::vector<std::array<double, 2>> targets; // normalized (pos, force)
    std::vector<std::vector<double>> features;  // classical path only
};

std::vector<std::uint8_t> quantize_chw(const TactileImage& img) {
    std::vector<std::uint8_t> q(img.px.size());
    std::size_t idx = 0;
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < img.h; ++r)
            for (int c = 0; c < img.w; ++c)
                q[idx++] = static_cast<std::uint8_t>(
                    std::lround(std::clamp(img.at(r, c, ch), 0.0, 1.0) * 255.0));
    return q;
}

TactileImage dequantize_chw(const std::vector<std::uint8_t>& q, int h, int w) {
    TactileImage img(h, w);
    std::size_t idx = 0;
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) img.at(r, c, ch) = q[idx++] / 255.0;
    return img;
}

LoadedData load_data(const DatasetManifest& m, const std::string& root, int in_h, int in_w,
                     bool with_features, int feat_h, int feat_w) {
    LoadedData data;
    data.in_h = in_h;
    data.in_w = in_w;
    data.q.reserve(m.records.size());
    for (const ManifestRecord& r : m.records) {
        TactileImage img = load_png((fs::path(root) / r.path).string());
        if (with_features) data.features.push_back(raw_pixel_features(img, feat_h, feat_w));
        TactileImage small = (img.h == in_h && img.w == in_w)
                                 ? img
                                 : downsample_area(img, in_h, in_w);
        data.q.push_back(quantize_chw(small));
        data.labels.push_back(r.class_label);
        auto [pn, fn] = normalize_regression(r.position_mm, r.force_n);
        data.targets.push_back({pn, fn});
    }
    return data;
}

Tensor sample_tensor(const LoadedData& data, std::size_t i, const AugmentPolicy* aug,
                     std::uint64_t aug_seed) {
    TactileImage img = dequantize_chw(data.q[i], data.in_h, data.in_w);
    if (aug) img = augment(img, *aug, aug_seed);
    return image_to_tensor(img, data.in_h, data.in_w);
}

double global_grad_norm(const std::vector<Tensor>& params) {
    double sq = 0.0;
    for (const Tensor& p : params)
        for (double g : p.grad()) sq += g * g;
    return std::sqrt(sq);
}

struct NetEval {
    int correct = 0;
    double mae_pos_norm = 0.0, mae_force_norm = 0.0;
    int total = 0;

    double metric(Head head) const {
        if (total == 0) return 0.0;
        if (head == Head::Classify4) return static_cast<double>(correct) / total;
        return 0.5 * (mae_pos_norm + mae_force_norm) / total;
    }
};

NetEval evaluate_net(const Network& net, const LoadedData& data) {
    NetEval ev;
    for (std::size_t i = 0; i < data.q.size(); ++i) {
        Tensor x = sample_tensor(data, i, nullptr, 0);
        Tape tape;
        Tensor out = net.forward(tape, x);
        if (net.spec.head == Head::Classify4) {
            const auto& v = out.values();
            int pred = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
            if (pred == data.labels[i]) ++ev.correct;
        } else {
            ev.mae_pos_norm += std::abs(out.values()[0] - data.targets[i][0]);
            ev.mae_force_norm += std::abs(out.values()[1] - data.targets[i][1]);
        }
        ++ev.total;
    }
    return ev;
}

TrainResult train_network(const ModelSpec& spec, const LoadedData& train_d,
                          const LoadedData& val_d, const TrainConfig& cfg) {
    Network net = build_network(spec, 3, spec.input_h, spec.input_w);

    std::vector<std::vector<double>> velocity;
    for (const Tensor& p : net.params) velocity.emplace_back(p.values().size(), 0.0);

    AugmentPolicy aug = spec.head == Head::Classify4 ? AugmentPolicy::classification_default()
                                                     : AugmentPolicy::regression_default();
    const bool use_aug = cfg.augment_enabled;

    TrainResult result;
    const bool maximize = spec.head == Head::Classify4;
    double best_metric = maximize ? -1.0 : 1e300;
    std::vector<std::vector<double>> best_params;
    for (const Tensor& p : net.params) best_params.push_back(p.values());

    std::vector<std::size_t> order(train_d.q.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, 0xe90c, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        double epoch_max_grad = 0.0;
        std::size_t batches = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            Tape tape;
            Tensor loss_sum;
            for (std::size_t bi = start; bi < end; ++bi) {
                const std::size_t i = order[bi];
                const std::uint64_t aug_seed =
                    mix_seed(cfg.seed, 0xa06 + static_cast<std::uint64_t>(epoch), i);
                Tensor x = sample_tensor(train_d, i, use_aug ? &aug : nullptr, aug_seed);
                Tensor out = net.forward(tape, x);
                Tensor sample_loss;
                if (spec.head == Head::Classify4) {
                    sample_loss = tape.softmax_cross_entropy(out, train_d.labels[i]);
                } else {
                    Tensor target = Tensor::from(
                        {2}, {train_d.targets[i][0], train_d.targets[i][1]});
                    sample_loss = tape.mse(out, target);
                }
                loss_sum = loss_sum.defined() ? tape.add(loss_sum, sample_loss) : sample_loss;
            }
            Tensor loss = tape.scale(loss_sum, 1.0 / static_cast<double>(end - start));
            const double loss_value = loss.values()[0];
            if (!std::isfinite(loss_value) || loss_value > cfg.early_divergence_threshold) {
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "training diverged at epoch %d batch %zu: loss %g exceeds %g",
                              epoch, batches, loss_value, cfg.early_divergence_threshold);
                result.diverged = true;
                result.divergence_info = buf;
                for (std::size_t pi = 0; pi < net.params.size(); ++pi)
                    net.params[pi].values() = best_params[pi];
                result.checkpoint = network_to_checkpoint(net);
                return result;
            }
            backward(tape, loss);

            double gnorm = global_grad_norm(net.params);
            if (cfg.grad_clip && gnorm > *cfg.grad_clip) {
                const double s = *cfg.grad_clip / gnorm;
                for (Tensor& p : net.params)
                    for (double& g : p.grad()) g *= s;
                gnorm = *cfg.grad_clip;
            }
            epoch_max_grad = std::max(epoch_max_grad, gnorm);

            for (std::size_t pi = 0; pi < net.params.size(); ++pi) {
                auto& v = net.params[pi].values();
                const auto& g = net.params[pi].grad();
                auto& mom = velocity[pi];
                if (cfg.optimizer == OptimizerKind::SgdMomentum) {
                    for (std::size_t j = 0; j < v.size(); ++j) {
                        mom[j] = cfg.momentum * mom[j] - cfg.learning_rate * g[j];
                        v[j] += mom[j];
                    }
                } else {
                    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= cfg.learning_rate * g[j];
                }
            }
            epoch_loss += loss_value;
            ++batches;
        }

        const double val_metric = evaluate_net(net, val_d).metric(spec.head);
        result.history.push_back({epoch, epoch_loss / static_cast<double>(batches), val_metric,
                                  epoch_max_grad});

        const bool improved = maximize ? val_metric > best_metric : val_metric < best_metric;
        if (improved) {
            best_metric = val_metric;
            result.best_epoch = epoch;
            for (std::size_t pi = 0; pi < net.params.size(); ++pi)
                best_params[pi] = net.params[pi].values();
        }
    }

    for (std::size_t pi = 0; pi < net.params.size(); ++pi) net.params[pi].values() = best_params[pi];
    result.checkpoint = network_to_checkpoint(net);
    return result;
}

Blob vec_blob(const std::vector<double>& v) {
    Blob b;
    b.dims = {static_cast<std::uint32_t>(v.size())};
    b.data = v;
    return b;
}

Blob mat_blob(const std::vector<std::vector<double>>& rows, std::size_t dim) {
    Blob b;
    b.dims = {static_cast<std::uint32_t>(rows.size()), static_cast<std::uint32_t>(dim)};
    b.data.reserve(rows.size() * dim);
    for (const auto& r : rows) b.data.insert(b.data.end(), r.begin(), r.end());
    return b;
}

std::vector<std::vector<double>> blob_mat(const Blob& b) {
    if (b.dims.size() != 2) throw DataError("checkpoint: expected a matrix blob");
    std::vector<std::vector<double>> rows(b.dims[0], std::vector<double>(b.dims[1]));
    for (std::uint32_t i = 0; i < b.dims[0]; ++i)
        std::copy(b.data.begin() + static_cast<std::size_t>(i) * b.dims[1],
                  b.data.begin() + static_cast<std::size_t>(i + 1) * b.dims[1], rows[i].begin());
    return rows;
}

KernelSpec kernel_for(const ModelSpec& spec, std::size_t feature_dim) {
    KernelSpec k;
    if (spec.arch == Arch::SvmPoly) {
        k.kind = KernelKind::Poly;
        k.gamma = spec.hyper_or("gamma", 1.0 / static_cast<double>(feature_dim));
        k.degree = spec.hyper_or("degree", 3.0);
        k.coef0 = spec.hyper_or("coef0", 1.0);
    } else {
        k.kind = KernelKind::Rbf;
        // standardized features have unit variance per column
        k.gamma = spec.hyper_or("gamma", 1.0 / static_cast<double>(feature_dim));
    }
    return k;
}

TrainResult train_classical(const ModelSpec& spec, const LoadedData& train_d,
                            const LoadedData& val_d, const TrainConfig& cfg) {
    FeatureStandardizer std_izer;
    std_izer.fit(train_d.features);
    std::vector<std::vector<double>> xtr(train_d.features.size());
    for (std::size_t i = 0; i < train_d.features.size(); ++i)
        xtr[i] = std_izer.transform(train_d.features[i]);

    Checkpoint ck;
    spec_to_checkpoint_header(spec, ck);
    ck.hyper["feature_h"] = std::to_string(cfg.feature_h);
    ck.hyper["feature_w"] = std::to_string(cfg.feature_w);
    ck.blobs.push_back(vec_blob(std_izer.mean()));
    ck.blobs.push_back(vec_blob(std_izer.stddev()));

    if (spec.arch == Arch::Knn) {
        const int k = static_cast<int>(spec.hyper_or("k", 5.0));
        KnnModel model = knn_train(xtr, train_d.labels, k);
        ck.blobs.push_back(mat_blob(model.features, xtr[0].size()));
        std::vector<double> labels(model.labels.begin(), model.labels.end());
        ck.blobs.push_back(vec_blob(labels));
        ck.hyper["k"] = std::to_string(k);
    } else {
        const double c = spec.hyper_or("C", 10.0);
        KernelSpec kernel = kernel_for(spec, xtr[0].size());
        SvmModel model =
            svm_train_ovo(xtr, train_d.labels, 4, kernel, c, cfg.svm_tol, cfg.svm_max_passes);
        ck.hyper["C"] = format_double(c);
        ck.hyper["gamma"] = format_double(kernel.gamma);
        ck.hyper["degree"] = format_double(kernel.degree);
        ck.hyper["coef0"] = format_double(kernel.coef0);
        Blob pc;
        pc.dims = {static_cast<std::uint32_t>(model.models.size())};
        for (const auto& [pos, neg] : model.pairs)
            pc.data.push_back(static_cast<double>(pos * 4 + neg));
        ck.blobs.push_back(pc);
        for (std::size_t p = 0; p < model.models.size(); ++p) {
            const BinarySvm& bm = model.models[p];
            ck.blobs.push_back(mat_blob(bm.support_vectors, xtr[0].size()));
            ck.blobs.push_back(vec_blob(bm.coeffs));
            ck.blobs.push_back(vec_blob({bm.bias}));
        }
    }

    // single-entry history: classical learners have no epochs
    (void)val_d;
    TrainResult result;
    result.checkpoint = std::move(ck);
    result.best_epoch = 1;
    result.history.push_back({1, 0.0, 0.0, 0.0});
    return result;
}

struct ClassicalModel {
    Arch arch;
    FeatureStandardizer standardizer;
    int feature_h = 32, feature_w = 24;
    SvmModel svm;
    KnnModel knn;
};

ClassicalModel classical_from_checkpoint(const Checkpoint& ck) {
    ClassicalModel m;
    m.arch = arch_from_token(ck.arch);
    m.feature_h = static_cast<int>(ck.hyper_double("feature_h", 32));
    m.feature_w = static_cast<int>(ck.hyper_double("feature_w", 24));
    if (ck.blobs.size() < 3) throw DataError("checkpoint: classical model requires >= 3 blobs");
    m.standardizer.set(ck.blobs[0].data, ck.blobs[1].data);

    if (m.arch == Arch::Knn) {
        auto features = blob_mat(ck.blobs[2]);
        if (ck.blobs.size() < 4) throw DataError("checkpoint: knn model missing labels blob");
        std::vector<int> labels;
        for (double v : ck.blobs[3].data) labels.push_back(static_cast<int>(v));
        m.knn = knn_train(std::move(features), std::move(labels),
                          static_cast<int>(ck.hyper_double("k", 5)));
    } else {
        m.svm.num_classes = 4;
        m.svm.c = ck.hyper_double("C", 10.0);
        m.svm.kernel.kind = m.arch == Arch::SvmPoly ? KernelKind::Poly : KernelKind::Rbf;
        m.svm.kernel.gamma = ck.hyper_double("gamma", 1.0);
        m.svm.kernel.degree = ck.hyper_double("degree", 3.0);
        m.svm.kernel.coef0 = ck.hyper_double("coef0", 1.0);
        const Blob& pairs = ck.blobs[2];
        std::size_t bi = 3;
        for (double pd : pairs.data) {
            const int code = static_cast<int>(pd);
            if (bi + 3 > ck.blobs.size())
                throw DataError("checkpoint: truncated svm pair blobs");
            BinarySvm bm;
            bm.kernel = m.svm.kernel;
            bm.support_vectors = blob_mat(ck.blobs[bi]);
            bm.coeffs = ck.blobs[bi + 1].data;
            bm.bias = ck.blobs[bi + 2].data.at(0);
            bi += 3;
            m.svm.models.push_back(std::move(bm));
            m.svm.pairs.emplace_back(code / 4, code % 4);
        }
    }
    return m;
}

int classical_predict(const ClassicalModel& m, const TactileImage& img) {
    std::vector<double> f =
        m.standardizer.transform(raw_pixel_features(img, m.feature_h, m.feature_w));
    return m.arch == Arch::Knn ? knn_classify(m.knn, f) : svm_predict(m.svm, f);
}

} // namespace

TrainResult train(const ModelSpec& spec, const DatasetManifest& train_m,
                  const DatasetManifest& val_m, const TrainConfig& cfg,
                  const std::string& data_root) {
    spec.validate();
    cfg.validate();
    if (train_m.records.empty() || val_m.records.empty())
        throw DataError("train: empty train or validation manifest");
    const DatasetKind want =
        spec.head == Head::Classify4 ? DatasetKind::Classification : DatasetKind::Regression;
    if (train_m.kind != want || val_m.kind != want)
        throw InvalidArgument("train: label kind mismatch between model head and manifest");

    const bool classical = !is_network_arch(spec.arch);
    LoadedData train_d = load_data(train_m, data_root, spec.input_h, spec.input_w, classical,
                                   cfg.feature_h, cfg.feature_w);
    LoadedData val_d = load_data(val_m, data_root, spec.input_h, spec.input_w, classical,
                                 cfg.feature_h, cfg.feature_w);

    if (classical) {
        TrainResult result = train_classical(spec, train_d, val_d, cfg);
        // validation accuracy through the final model
        ClassicalModel m = classical_from_checkpoint(result.checkpoint);
        int correct = 0;
        for (std::size_t i = 0; i < val_d.features.size(); ++i) {
            const int pred =
                m.arch == Arch::Knn
                    ? knn_classify(m.knn, m.standardizer.transform(val_d.features[i]))
                    : svm_predict(m.svm, m.standardizer.transform(val_d.features[i]));
            if (pred == val_d.labels[i]) ++correct;
        }
        result.history.back().val_metric =
            val_d.features.empty() ? 0.0
                                   : static_cast<double>(correct) /
                                         static_cast<double>(val_d.features.size());
        return result;
    }
    return train_network(spec, train_d, val_d, cfg);
}

namespace {

void check_eval_inputs(const Checkpoint& ck, const DatasetManifest& m, Head expect_head) {
    const Head head = head_from_token(ck.head);
    if (head != expect_head) throw InvalidArgument("evaluate: checkpoint head mismatch");
    const DatasetKind want =
        expect_head == Head::Classify4 ? DatasetKind::Classification : DatasetKind::Regression;
    if (m.kind != want) throw InvalidArgument("evaluate: label kind mismatch with manifest");
    if (m.records.empty()) throw DataError("evaluate: empty manifest");
}

} // namespace

MetricsReport classification_report(const std::vector<int>& truth,
                                    const std::vector<int>& predictions) {
    if (truth.size() != predictions.size() || truth.empty())
        throw InvalidArgument("classification_report: empty or mismatched prediction lists");
    MetricsReport report;
    report.kind = DatasetKind::Classification;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= 4 || predictions[i] < 0 || predictions[i] >= 4)
            throw InvalidArgument("classification_report: class index out of range");
        ++report.confusion[truth[i]][predictions[i]];
        ++report.sample_count;
    }
    int correct = 0;
    for (int t = 0; t < 4; ++t) {
        int row_total = 0;
        for (int p = 0; p < 4; ++p) row_total += report.confusion[t][p];
        correct += report.confusion[t][t];
        report.per_class_accuracy[t] =
            row_total > 0 ? static_cast<double>(report.confusion[t][t]) / row_total : 0.0;
    }
    report.overall_accuracy = static_cast<double>(correct) / report.sample_count;
    return report;
}

MetricsReport regression_report(const std::vector<double>& true_position_mm,
                                const std::vector<double>& true_force_n,
                                const std::vector<double>& pred_position_mm,
                                const std::vector<double>& pred_force_n) {
    const std::size_t n = true_position_mm.size();
    if (n == 0 || true_force_n.size() != n || pred_position_mm.size() != n ||
        pred_force_n.size() != n)
        throw InvalidArgument("regression_report: empty or mismatched prediction lists");
    MetricsReport report;
    report.kind = DatasetKind::Regression;
    double sum_pos = 0.0, sum_force = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_pos += std::abs(pred_position_mm[i] - true_position_mm[i]);
        sum_force += std::abs(pred_force_n[i] - true_force_n[i]);
    }
    report.sample_count = static_cast<int>(n);
    report.mae_position_mm = sum_pos / static_cast<double>(n);
    report.mae_force_n = sum_force / static_cast<double>(n);
    return report;
}

MetricsReport evaluate_classification(const Checkpoint& ck, const DatasetManifest& m,
                                      const std::string& data_root) {
    check_eval_inputs(ck, m, Head::Classify4);
    const Arch arch = arch_from_token(ck.arch);
    Network net;
    ClassicalModel classical;
    if (is_network_arch(arch)) net = network_from_checkpoint(ck);
    else classical = classical_from_checkpoint(ck);

    std::vector<int> truth, preds;
    for (const ManifestRecord& r : m.records) {
        TactileImage img = load_png((fs::path(data_root) / r.path).string());
        truth.push_back(r.class_label);
        preds.push_back(is_network_arch(arch) ? net_predict(net, img).class_index
                                              : classical_predict(classical, img));
    }
    return classification_report(truth, preds);
}

MetricsReport evaluate_regression(const Checkpoint& ck, const DatasetManifest& m,
                                  const std::string& data_root) {
    RegressionPredictions p = regression_predictions(ck, m, data_root);
    return regression_report(p.true_position, p.true_force, p.pred_position, p.pred_force);
}

RegressionPredictions regression_predictions(const Checkpoint& ck, const DatasetManifest& m,
                                             const std::string& data_root) {
    check_eval_inputs(ck, m, Head::RegressPosForce);
    Network net = network_from_checkpoint(ck);
    RegressionPredictions out;
    for (const ManifestRecord& r : m.records) {
        TactileImage img = load_png((fs::path(data_root) / r.path).string());
        Prediction p = net_predict(net, img);
        out.true_position.push_back(r.position_mm);
        out.pred_position.push_back(p.position_mm);
        out.true_force.push_back(r.force_n);
        out.pred_force.push_back(p.force_n);
    }
    return out;
}

std::string history_to_csv(const std::vector<EpochStats>& history) {
    std::ostringstream out;
    out << "epoch,train_loss,val_metric\n";
    for (const EpochStats& e : history)
        out << e.epoch << "," << format_double(e.train_loss) << "," << format_double(e.val_metric)
            << "\n";
    return out.str();
}

std::string metrics_to_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "metric,value\n";
    if (r.kind == DatasetKind::Classification) {
        out << "overall_accuracy," << format_double(r.overall_accuracy) << "\n";
        static const char* names[4] = {"almond", "brazil_nut", "pecan", "walnut"};
        for (int c = 0; c < 4; ++c)
            out << "accuracy_" << names[c] << "," << format_double(r.per_class_accuracy[c]) << "\n";
        for (int t = 0; t < 4; ++t)
            for (int p = 0; p < 4; ++p)
                out << "confusion_" << t << "_" << p << "," << r.confusion[t][p] << "\n";
    } else {
        out << "mae_position_mm," << format_double(r.mae_position_mm) << "\n";
        out << "mae_force_n," << format_double(r.mae_force_n) << "\n";
    }
    out << "sample_count," << r.sample_count << "\n";
    return out.str();
}

namespace {

std::string pct(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.1f%%", v * 100.0);
    return buf;
}

} // namespace

std::string format_classification_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-18s %8s %8s %12s %8s %8s\n", "Network", "Overall",
                  "Almonds", "Brazil Nuts", "Pecans", "Walnuts");
    out << line;
    for (const auto& [name, r] : rows) {
        std::snprintf(line, sizeof(line), "%-18s %8s %8s %12s %8s %8s\n", name.c_str(),
                      pct(r.overall_accuracy).c_str(), pct(r.per_class_accuracy[0]).c_str(),
                      pct(r.per_class_accuracy[1]).c_str(), pct(r.per_class_accuracy[2]).c_str(),
                      pct(r.per_class_accuracy[3]).c_str());
        out << line;
    }
    return out.str();
}

std::string format_regression_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-18s %28s %24s\n", "Network",
                  "Contact Position Error (mm)", "Normal Force Error (N)");
    out << line;
    for (const auto& [name, r] : rows) {
        std::snprintf(line, sizeof(line), "%-18s %28.2f %24.2f\n", name.c_str(),
                      r.mae_position_mm, r.mae_force_n);
        out << line;
    }
    return out.str();
}

} // namespace finray
