#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finray/checkpoint.hpp"
#include "finray/imaging.hpp"
#include "finray/manifest.hpp"
#include "finray/network.hpp"

namespace finray {

enum class OptimizerKind { Sgd, SgdMomentum };

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 0.01;
    OptimizerKind optimizer = OptimizerKind::SgdMomentum;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    std::optional<double> grad_clip; // global max-norm on the parameter gradient
    double early_divergence_threshold = 1e3;
    bool augment_enabled = true;
    int feature_h = 32, feature_w = 24; // classical raw-pixel feature size
    int svm_max_passes = 200;
    double svm_tol = 1e-3;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_metric = 0.0;    // accuracy (classification) or normalized MAE (regression)
    double max_grad_norm = 0.0; // post-clip
};

struct MetricsReport {
    DatasetKind kind = DatasetKind::Classification;
    double overall_accuracy = 0.0;
    std::array<double, 4> per_class_accuracy{}; // recall convention
    std::array<std::array<int, 4>, 4> confusion{}; // [true][predicted]
    double mae_position_mm = 0.0;
    double mae_force_n = 0.0;
    int sample_count = 0;
};

struct TrainResult {
    Checkpoint checkpoint; // best-validation epoch
    std::vector<EpochStats> history;
    bool diverged = false;
    std::string divergence_info;
    int best_epoch = -1;
};

// Seeded shuffle + split, stratified by class for classification manifests.
std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& m, double train_fraction,
                                                  std::uint64_t seed);

// Trains any of the seven learners. data_root is the directory image paths
// resolve against (usually the manifest's directory).
TrainResult train(const ModelSpec& spec, const DatasetManifest& train_m,
                  const DatasetManifest& val_m, const TrainConfig& cfg,
                  const std::string& data_root);

MetricsReport evaluate_classification(const Checkpoint& ck, const DatasetManifest& m,
                                      const std::string& data_root);
MetricsReport evaluate_regression(const Checkpoint& ck, const DatasetManifest& m,
                                  const std::string& data_root);

// Metric arithmetic, separated from model plumbing.
MetricsReport classification_report(const std::vector<int>& truth,
                                    const std::vector<int>& predictions);
MetricsReport regression_report(const std::vector<double>& true_position_mm,
                                const std::vector<double>& true_force_n,
                                const std::vector<double>& pred_position_mm,
                                const std::vector<double>& pred_force_n);

// Per-sample physical-unit predictions, for plotting.
struct RegressionPredictions {
    std::vector<double> true_position, pred_position;
    std::vector<double> true_force, pred_force;
};
RegressionPredictions regression_predictions(const Checkpoint& ck, const DatasetManifest& m,
                                             const std::string& data_root);

std::string history_to_csv(const std::vector<EpochStats>& history);
std::string metrics_to_csv(const MetricsReport& r);

// Text tables with the published layouts: classification columns
// Overall/Almonds/Brazil Nuts/Pecans/Walnuts, regression columns
// Contact Position Error (mm) / Normal Force Error (N).
std::string format_classification_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);
std::string format_regression_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

} // namespace finray
