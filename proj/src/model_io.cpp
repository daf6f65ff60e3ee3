#include "convoarg/errors.hpp"
#include "convoarg/learners.hpp"
#include "json.hpp"

namespace convoarg {

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json hyperparams_to_json(const Hyperparams& hp) {
    return {
        {"nb_var_floor", hp.nb_var_floor}, {"tree_alpha", hp.tree_alpha},
        {"tree_min_leaf", hp.tree_min_leaf}, {"forest_trees", hp.forest_trees},
        {"forest_mtry", hp.forest_mtry}, {"svm_lambda", hp.svm_lambda},
        {"svm_epochs", hp.svm_epochs}, {"seed", hp.seed},
    };
}

Hyperparams hyperparams_from_json(const nlohmann::json& j) {
    Hyperparams hp;
    hp.nb_var_floor = j.value("nb_var_floor", hp.nb_var_floor);
    hp.tree_alpha = j.value("tree_alpha", hp.tree_alpha);
    hp.tree_min_leaf = j.value("tree_min_leaf", hp.tree_min_leaf);
    hp.forest_trees = j.value("forest_trees", hp.forest_trees);
    hp.forest_mtry = j.value("forest_mtry", hp.forest_mtry);
    hp.svm_lambda = j.value("svm_lambda", hp.svm_lambda);
    hp.svm_epochs = j.value("svm_epochs", hp.svm_epochs);
    hp.seed = j.value("seed", hp.seed);
    return hp;
}

nlohmann::json tree_to_json(const TreeParams& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"prob_top", n.prob_top},
                         {"count", n.count}});
    }
    return {{"nodes", nodes}};
}

TreeParams tree_from_json(const nlohmann::json& j) {
    TreeParams tree;
    for (const auto& jn : j.at("nodes")) {
        TreeNode n;
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
        n.prob_top = jn.at("prob_top").get<double>();
        n.count = jn.at("count").get<int>();
        tree.nodes.push_back(n);
    }
    return tree;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
    nlohmann::json params;
    if (const auto* nb = std::get_if<NbParams>(&model.parameters)) {
        params = {{"log_prior_neg", nb->log_prior_neg}, {"log_prior_pos", nb->log_prior_pos},
                  {"mean_neg", nb->mean_neg},           {"var_neg", nb->var_neg},
                  {"mean_pos", nb->mean_pos},           {"var_pos", nb->var_pos}};
    } else if (const auto* tree = std::get_if<TreeParams>(&model.parameters)) {
        params = tree_to_json(*tree);
    } else if (const auto* forest = std::get_if<ForestParams>(&model.parameters)) {
        nlohmann::json trees = nlohmann::json::array();
        for (const TreeParams& t : forest->trees) trees.push_back(tree_to_json(t));
        params = {{"trees", trees},
                  {"feature_importances", forest->feature_importances},
                  {"oob_accuracy", forest->oob_accuracy ? nlohmann::json(*forest->oob_accuracy)
                                                        : nlohmann::json(nullptr)}};
    } else if (const auto* svm = std::get_if<SvmParams>(&model.parameters)) {
        params = {{"weights", svm->weights}, {"bias", svm->bias}};
    }

    nlohmann::json j{
        {"format_version", kFormatVersion},
        {"kind", to_string(model.kind)},
        {"selector", {{"name", model.selector.name}, {"members", model.selector.members}}},
        {"standardization",
         {{"mean", model.standardization.mean}, {"stddev", model.standardization.stddev}}},
        {"parameters", params},
        {"train_meta",
         {{"seed", model.train_meta.seed},
          {"hyperparams", hyperparams_to_json(model.train_meta.hyperparams)},
          {"trained_at", model.train_meta.trained_at}}},
    };
    return j.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version > kFormatVersion) {
        throw InvalidConfig("model format_version " + std::to_string(version) +
                            " is newer than supported " + std::to_string(kFormatVersion));
    }
    TrainedModel model;
    model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    model.selector.name = j.at("selector").at("name").get<std::string>();
    model.selector.members = j.at("selector").at("members").get<std::vector<std::string>>();
    model.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    model.standardization.stddev = j.at("standardization").at("stddev").get<std::vector<double>>();

    const auto& params = j.at("parameters");
    switch (model.kind) {
        case ModelKind::gaussian_nb: {
            NbParams nb;
            nb.log_prior_neg = params.at("log_prior_neg").get<double>();
            nb.log_prior_pos = params.at("log_prior_pos").get<double>();
            nb.mean_neg = params.at("mean_neg").get<std::vector<double>>();
            nb.var_neg = params.at("var_neg").get<std::vector<double>>();
            nb.mean_pos = params.at("mean_pos").get<std::vector<double>>();
            nb.var_pos = params.at("var_pos").get<std::vector<double>>();
            model.parameters = std::move(nb);
            break;
        }
        case ModelKind::cond_tree:
            model.parameters = tree_from_json(params);
            break;
        case ModelKind::random_forest: {
            ForestParams forest;
            for (const auto& t : params.at("trees")) forest.trees.push_back(tree_from_json(t));
            forest.feature_importances =
                params.at("feature_importances").get<std::vector<double>>();
            if (!params.at("oob_accuracy").is_null()) {
                forest.oob_accuracy = params.at("oob_accuracy").get<double>();
            }
            model.parameters = std::move(forest);
            break;
        }
        case ModelKind::linear_svm: {
            SvmParams svm;
            svm.weights = params.at("weights").get<std::vector<double>>();
            svm.bias = params.at("bias").get<double>();
            model.parameters = std::move(svm);
            break;
        }
    }
    const auto& meta = j.at("train_meta");
    model.train_meta.seed = meta.at("seed").get<std::uint64_t>();
    model.train_meta.hyperparams = hyperparams_from_json(meta.at("hyperparams"));
    model.train_meta.trained_at = meta.at("trained_at").get<std::int64_t>();
    return model;
}

}  // namespace convoarg
