#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace finray {

enum class KernelKind { Poly, Rbf };

// poly: (gamma * <a,b> + coef0)^degree, rbf: exp(-gamma * |a-b|^2)
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0;
    double degree = 3.0;
    double coef0 = 1.0;

    double operator()(const std::vector<double>& a, const std::vector<double>& b) const;
};

struct BinarySvm {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coeffs; // alpha_i * y_i
    double bias = 0.0;
    KernelSpec kernel;
};

// Convergence/optimality evidence from one SMO run.
struct SmoDiagnostics {
    long accepted_steps = 0;
    bool objective_monotone = true;     // every accepted step raised the dual (1e-9 slack)
    double objective_tracked = 0.0;     // maintained incrementally step by step
    double objective_recomputed = 0.0;  // recomputed from the final alphas
    double max_kkt_violation = 0.0;
    std::vector<double> alphas;
    double bias = 0.0;
};

// Two-multiplier coordinate ascent on the soft-margin dual. Deterministic:
// the second-choice sweep order comes from a fixed internal seed.
BinarySvm smo_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    const KernelSpec& kernel, double c, double tol, int max_passes,
                    SmoDiagnostics* diag = nullptr);

double svm_decision(const BinarySvm& m, const std::vector<double>& feature);

struct SvmModel {
    int num_classes = 4;
    double c = 10.0;
    KernelSpec kernel;
    std::vector<std::pair<int, int>> pairs; // (positive class, negative class)
    std::vector<BinarySvm> models;
};

// One-vs-one multiclass; majority vote, ties broken by summed decision
// values, then by smallest class index.
SvmModel svm_train_ovo(const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
                       int num_classes, const KernelSpec& kernel, double c, double tol,
                       int max_passes, std::vector<SmoDiagnostics>* diags = nullptr);

int svm_predict(const SvmModel& model, const std::vector<double>& feature);

} // namespace finray
