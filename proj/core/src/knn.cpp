#include "finray/knn.hpp"

#include <algorithm>

#include "finray/errors.hpp"

namespace finray {

KnnModel knn_train(std::vector<std::vector<double>> features, std::vector<int> labels, int k,
                   int num_classes) {
    if (features.empty() || features.size() != labels.size())
        throw InvalidArgument("knn_train: empty or mismatched training data");
    if (k < 1 || static_cast<std::size_t>(k) > features.size())
        throw InvalidArgument("knn_train: k must be in [1, n_samples]");
    for (int l : labels)
        if (l < 0 || l >= num_classes) throw InvalidArgument("knn_train: label out of range");
    return {std::move(features), std::move(labels), k, num_classes};
}

int knn_classify(const KnnModel& model, const std::vector<double>& feature) {
    if (model.features.empty()) throw InvalidArgument("knn_classify: empty model");
    if (feature.size() != model.features[0].size())
        throw ShapeError("knn_classify: feature dimension mismatch (" +
                         std::to_string(feature.size()) + " vs " +
                         std::to_string(model.features[0].size()) + ")");

    const std::size_t n = model.features.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        const auto& f = model.features[i];
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d = f[j] - feature[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    const std::size_t k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end()); // (d, idx) lexicographic

    std::vector<int> votes(model.num_classes, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[model.labels[dist[i].second]];
    int best = 0;
    for (int c = 1; c < model.num_classes; ++c)
        if (votes[c] > votes[best]) best = c;
    return best;
}

} // namespace finray
