#pragma once

#include <vector>

namespace finray {

struct KnnModel {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    int k = 5;
    int num_classes = 4;
};

KnnModel knn_train(std::vector<std::vector<double>> features, std::vector<int> labels, int k,
                   int num_classes = 4);

// Majority label among the k Euclidean-nearest training points. Distance ties
// resolve toward the lower training index; vote ties toward the smallest
// class index present in the tie.
int knn_classify(const KnnModel& model, const std::vector<double>& feature);

} // namespace finray
