#include "finray/svm.hpp"

#include <algorithm>
#include <cmath>

#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

double KernelSpec::operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    if (a.size() != b.size())
        throw ShapeError("kernel: feature dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    if (kind == KernelKind::Rbf) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            d2 += d * d;
        }
        return std::exp(-gamma * d2);
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return std::pow(gamma * dot + coef0, degree);
}

namespace {

constexpr double kAlphaEps = 1e-12;

// Working state for one binary SMO problem with a cached Gram matrix.
struct SmoState {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    double c, tol;
    int n;
    std::vector<double> gram;
    std::vector<double> alpha;
    std::vector<double> err; // f(x_i) - y_i
    double b = 0.0;
    double objective = 0.0;
    long accepted = 0;
    bool monotone = true;
    Rng rng{0x5eedf00dULL};

    SmoState(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
             const KernelSpec& kernel, double cc, double tt)
        : x(xs), y(ys), c(cc), tol(tt), n(static_cast<int>(xs.size())) {
        gram.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double k = kernel(x[i], x[j]);
                gram[static_cast<std::size_t>(i) * n + j] = k;
                gram[static_cast<std::size_t>(j) * n + i] = k;
            }
        alpha.assign(n, 0.0);
        err.resize(n);
        for (int i = 0; i < n; ++i) err[i] = -y[i]; // f = 0 initially
    }

    double k(int i, int j) const { return gram[static_cast<std::size_t>(i) * n + j]; }

    bool take_step(int i1, int i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha[i1], a2_old = alpha[i2];
        const double y1 = y[i1], y2 = y[i2];
        const double e1 = err[i1], e2 = err[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c, c + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c);
            hi = std::min(c, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        const double q1 = e1 + y1 - b; // sum_j alpha_j y_j K_1j
        const double q2 = e2 + y2 - b;

        // exact dual change for moving to candidate a2 (a1 follows from the
        // equality constraint), in terms of signed-coefficient increments
        auto dual_delta = [&](double a2_cand) {
            const double a1_cand = a1_old + s * (a2_old - a2_cand);
            const double d1 = y1 * (a1_cand - a1_old);
            const double d2 = y2 * (a2_cand - a2_old);
            return (a1_cand - a1_old) + (a2_cand - a2_old) - d1 * q1 - d2 * q2 -
                   0.5 * (d1 * d1 * k11 + d2 * d2 * k22) - d1 * d2 * k12;
        };

        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // flat or concave along the pair direction: move to the better end
            a2 = dual_delta(lo) > dual_delta(hi) ? lo : hi;
            if (dual_delta(a2) <= 1e-12) return false;
        }
        if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;
        const double a1 = a1_old + s * (a2_old - a2);

        const double delta_obj = dual_delta(a2);
        if (delta_obj < -1e-9) monotone = false;
        objective += delta_obj;

        // threshold update (Platt's b1/b2 rule, f(x) = sum + b convention)
        const double b_old = b;
        const double b1 = b_old - e1 - y1 * (a1 - a1_old) * k11 - y2 * (a2 - a2_old) * k12;
        const double b2 = b_old - e2 - y1 * (a1 - a1_old) * k12 - y2 * (a2 - a2_old) * k22;
        if (a1 > kAlphaEps && a1 < c - kAlphaEps) b = b1;
        else if (a2 > kAlphaEps && a2 < c - kAlphaEps) b = b2;
        else b = 0.5 * (b1 + b2);

        alpha[i1] = a1;
        alpha[i2] = a2;
        for (int i = 0; i < n; ++i)
            err[i] += y1 * (a1 - a1_old) * k(i1, i) + y2 * (a2 - a2_old) * k(i2, i) + (b - b_old);
        ++accepted;
        return true;
    }

    bool examine(int i2) {
        const double y2 = y[i2], a2 = alpha[i2], e2 = err[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -tol && a2 < c) || (r2 > tol && a2 > 0))) return false;

        // heuristic 1: maximize |E1 - E2| over non-bound multipliers
        int best = -1;
        double best_gap = 0.0;
        for (int i = 0; i < n; ++i) {
            if (alpha[i] <= kAlphaEps || alpha[i] >= c - kAlphaEps) continue;
            const double gap = std::abs(err[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best >= 0 && take_step(best, i2)) return true;

        // heuristic 2: sweep non-bound, then all, from a seeded start
        const int start = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        for (int d = 0; d < n; ++d) {
            const int i = (start + d) % n;
            if (alpha[i] <= kAlphaEps || alpha[i] >= c - kAlphaEps) continue;
            if (take_step(i, i2)) return true;
        }
        for (int d = 0; d < n; ++d) {
            const int i = (start + d) % n;
            if (take_step(i, i2)) return true;
        }
        return false;
    }

    double recompute_objective() const {
        double sum = 0.0, quad = 0.0;
        for (int i = 0; i < n; ++i) {
            if (alpha[i] == 0.0) continue;
            sum += alpha[i];
            for (int j = 0; j < n; ++j) {
                if (alpha[j] == 0.0) continue;
                quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
            }
        }
        return sum - 0.5 * quad;
    }

    double kkt_violation() const {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = y[i] * (err[i] + y[i]); // y_i * f(x_i)
            double v = 0.0;
            if (alpha[i] <= kAlphaEps) v = std::max(0.0, 1.0 - u);
            else if (alpha[i] >= c - kAlphaEps) v = std::max(0.0, u - 1.0);
            else v = std::abs(u - 1.0);
            worst = std::max(worst, v);
        }
        return worst;
    }
};

} // namespace

BinarySvm smo_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    const KernelSpec& kernel, double c, double tol, int max_passes,
                    SmoDiagnostics* diag) {
    if (x.size() < 2 || x.size() != y.size())
        throw InvalidArgument("smo_train: need at least 2 labeled samples");
    bool has_pos = false, has_neg = false;
    for (int yi : y) {
        if (yi == 1) has_pos = true;
        else if (yi == -1) has_neg = true;
        else throw InvalidArgument("smo_train: labels must be +1/-1");
    }
    if (!has_pos || !has_neg) throw InvalidArgument("smo_train: degenerate single-class data");
    if (c <= 0.0) throw InvalidArgument("smo_train: C must be positive");

    SmoState st(x, y, kernel, c, tol);
    int changed = 0;
    bool examine_all = true;
    int passes = 0;
    while ((changed > 0 || examine_all) && passes < max_passes) {
        changed = 0;
        if (examine_all) {
            for (int i = 0; i < st.n; ++i) changed += st.examine(i) ? 1 : 0;
        } else {
            for (int i = 0; i < st.n; ++i) {
                if (st.alpha[i] <= kAlphaEps || st.alpha[i] >= c - kAlphaEps) continue;
                changed += st.examine(i) ? 1 : 0;
            }
        }
        if (examine_all) examine_all = false;
        else if (changed == 0) examine_all = true;
        ++passes;
    }

    BinarySvm model;
    model.kernel = kernel;
    model.bias = st.b;
    for (int i = 0; i < st.n; ++i) {
        if (st.alpha[i] > kAlphaEps) {
            model.support_vectors.push_back(x[i]);
            model.coeffs.push_back(st.alpha[i] * y[i]);
        }
    }
    if (diag) {
        diag->accepted_steps = st.accepted;
        diag->objective_monotone = st.monotone;
        diag->objective_tracked = st.objective;
        diag->objective_recomputed = st.recompute_objective();
        diag->max_kkt_violation = st.kkt_violation();
        diag->alphas = st.alpha;
        diag->bias = st.b;
    }
    return model;
}

double svm_decision(const BinarySvm& m, const std::vector<double>& feature) {
    double f = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
        f += m.coeffs[i] * m.kernel(m.support_vectors[i], feature);
    return f;
}

SvmModel svm_train_ovo(const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
                       int num_classes, const KernelSpec& kernel, double c, double tol,
                       int max_passes, std::vector<SmoDiagnostics>* diags) {
    if (x.size() != labels.size() || x.empty())
        throw InvalidArgument("svm_train_ovo: empty or mismatched training data");
    SvmModel model;
    model.num_classes = num_classes;
    model.kernel = kernel;
    model.c = c;
    for (int a = 0; a < num_classes; ++a) {
        for (int b = a + 1; b < num_classes; ++b) {
            std::vector<std::vector<double>> xs;
            std::vector<int> ys;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (labels[i] == a) {
                    xs.push_back(x[i]);
                    ys.push_back(1);
                } else if (labels[i] == b) {
                    xs.push_back(x[i]);
                    ys.push_back(-1);
                }
            }
            SmoDiagnostics diag;
            model.models.push_back(smo_train(xs, ys, kernel, c, tol, max_passes, &diag));
            model.pairs.emplace_back(a, b);
            if (diags) diags->push_back(std::move(diag));
        }
    }
    return model;
}

int svm_predict(const SvmModel& model, const std::vector<double>& feature) {
    std::vector<int> votes(model.num_classes, 0);
    std::vector<double> score(model.num_classes, 0.0);
    for (std::size_t p = 0; p < model.models.size(); ++p) {
        const double f = svm_decision(model.models[p], feature);
        const auto [pos, neg] = model.pairs[p];
        if (f >= 0.0) ++votes[pos];
        else ++votes[neg];
        score[pos] += f;
        score[neg] -= f;
    }
    int best = 0;
    for (int cl = 1; cl < model.num_classes; ++cl) {
        if (votes[cl] > votes[best]) best = cl;
        else if (votes[cl] == votes[best] && score[cl] > score[best]) best = cl;
    }
    return best;
}

} // namespace finray
