#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convoarg/learners.hpp"

namespace convoarg {

/// Accuracy plus IR metrics on the top-user class. Zero-denominator metrics
/// are reported as absent, never silently as 0.
struct EvalReport {
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double flagged_fraction = 0.0;
    std::vector<double> fold_accuracies;  // non-empty for cross-validation reports

    std::size_t total() const { return tp + fp + fn + tn; }
};

std::string report_to_json(const EvalReport& report);

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// k disjoint covering folds with per-fold class counts within one example
/// of the global proportion. Throws TooFewExamples when a class has < k.
std::vector<FoldSplit> stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed);

EvalReport evaluate(const TrainedModel& model, const Dataset& test);

/// Per-fold train/evaluate; metrics micro-averaged over pooled confusion
/// counts, fold accuracies kept for the min/mean/max presentation.
EvalReport cross_validate(ModelKind kind, const Dataset& data, const Hyperparams& hp,
                          std::size_t k, std::uint64_t seed);

struct PcaResult {
    std::vector<std::vector<double>> components;        // k rows, orthonormal
    std::vector<double> explained_variance_ratio;       // descending
    std::vector<double> means;                          // centering offsets
};

/// Top-k eigenpairs of the sample covariance via power iteration with
/// deflation. Throws DegenerateData when total variance is zero.
PcaResult pca(const Dataset& data, std::size_t k);

struct RfeStep {
    std::vector<std::string> features;
    double cv_accuracy = 0.0;
};

struct RfeResult {
    std::vector<RfeStep> steps;  // strictly nested, largest subset first
    std::size_t best_index = 0;  // highest accuracy, ties to the smaller subset
};

/// Recursive elimination driven by forest impurity-gain importance.
RfeResult rfe(const Dataset& data, const Hyperparams& hp, std::size_t k_folds,
              std::uint64_t seed);

struct AblationCell {
    std::string regime;  // no_graph | attacks_only | full
    ModelKind kind;
    double accuracy = 0.0;
};

/// Cross-validated accuracy for the three nested feature regimes, for
/// cond_tree, random_forest and linear_svm.
std::vector<AblationCell> ablation_study(const Dataset& data, const Hyperparams& hp,
                                         std::uint64_t seed, std::size_t k_folds = 5);

/// Members of an ablation regime; regimes are nested subsets of the full set.
std::vector<std::string> ablation_regime_features(const std::string& regime);

}  // namespace convoarg
