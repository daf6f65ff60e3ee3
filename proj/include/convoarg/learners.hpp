#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "convoarg/labeling.hpp"

namespace convoarg {

enum class ModelKind { gaussian_nb, cond_tree, random_forest, linear_svm };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct Hyperparams {
    double nb_var_floor = 1e-9;
    double tree_alpha = 0.05;
    int tree_min_leaf = 7;
    int forest_trees = 100;
    int forest_mtry = 0;  // 0 = ceil(sqrt(d))
    double svm_lambda = 1e-4;
    int svm_epochs = 100;
    std::uint64_t seed = 0;
};

/// Per-feature z-scoring fitted on training data. Zero-variance features get
/// unit scale so they center to zero instead of exploding.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::vector<double> apply(const std::vector<double>& v) const;
};

struct NbParams {
    double log_prior_neg = 0.0;
    double log_prior_pos = 0.0;
    std::vector<double> mean_neg, var_neg;
    std::vector<double> mean_pos, var_pos;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double prob_top = 0.0;
    int count = 0;
};

struct TreeParams {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestParams {
    std::vector<TreeParams> trees;
    std::vector<double> feature_importances;  // mean impurity gain per feature
    std::optional<double> oob_accuracy;
};

struct SvmParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct TrainMeta {
    std::uint64_t seed = 0;
    Hyperparams hyperparams;
    std::int64_t trained_at = 0;  // epoch seconds; 0 keeps artifacts reproducible
};

struct TrainedModel {
    ModelKind kind = ModelKind::gaussian_nb;
    FeatureSetSelector selector;
    Standardization standardization;
    std::variant<NbParams, TreeParams, ForestParams, SvmParams> parameters;
    TrainMeta train_meta;
};

struct Prediction {
    bool label = false;
    double score = 0.0;  // posterior / vote fraction / sigmoid of margin
};

TrainedModel train_gaussian_nb(const Dataset& data, const Hyperparams& hp);
TrainedModel train_cond_tree(const Dataset& data, const Hyperparams& hp);
TrainedModel train_random_forest(const Dataset& data, const Hyperparams& hp);
TrainedModel train_linear_svm(const Dataset& data, const Hyperparams& hp);
TrainedModel train_model(ModelKind kind, const Dataset& data, const Hyperparams& hp);

/// Throws ArityMismatch when v does not match the model's selector.
Prediction predict(const TrainedModel& model, const std::vector<double>& v);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

namespace detail {

/// Row-major training matrix after selector projection and standardization.
struct TrainMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> x;  // n*d
    std::vector<int> y;     // 0/1

    double at(std::size_t i, std::size_t j) const { return x[i * d + j]; }
    const double* row(std::size_t i) const { return x.data() + i * d; }
};

/// Projects, fits standardization, transforms. Throws SingleClass when one
/// class is absent.
TrainMatrix prepare(const Dataset& data, Standardization& std_out);

double tree_prob(const TreeParams& tree, const std::vector<double>& z);

TreeParams grow_cond_tree(const TrainMatrix& m, const Hyperparams& hp);
ForestParams grow_forest(const TrainMatrix& m, const Hyperparams& hp);

}  // namespace detail

}  // namespace convoarg
