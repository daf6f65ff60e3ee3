#include "convoarg/learners.hpp"

#include <algorithm>
#include <cmath>

#include "convoarg/errors.hpp"
#include "convoarg/rng.hpp"

namespace convoarg {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::gaussian_nb: return "gaussian_nb";
        case ModelKind::cond_tree: return "cond_tree";
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::linear_svm: return "linear_svm";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "gaussian_nb" || s == "nb") return ModelKind::gaussian_nb;
    if (s == "cond_tree" || s == "cit") return ModelKind::cond_tree;
    if (s == "random_forest" || s == "rf") return ModelKind::random_forest;
    if (s == "linear_svm" || s == "svm") return ModelKind::linear_svm;
    throw InvalidConfig("unknown model kind '" + s + "'");
}

std::vector<double> Standardization::apply(const std::vector<double>& v) const {
    std::vector<double> z(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) z[j] = (v[j] - mean[j]) / stddev[j];
    return z;
}

namespace detail {

TrainMatrix prepare(const Dataset& data, Standardization& std_out) {
    TrainMatrix m;
    m.n = data.examples.size();
    m.d = data.selector.members.size();
    m.x.resize(m.n * m.d);
    m.y.resize(m.n);

    std::size_t positives = 0;
    for (std::size_t i = 0; i < m.n; ++i) {
        const auto row = select_features(data.examples[i].features, data.selector);
        std::copy(row.begin(), row.end(), m.x.begin() + static_cast<std::ptrdiff_t>(i * m.d));
        m.y[i] = data.examples[i].is_top ? 1 : 0;
        positives += m.y[i];
    }
    if (m.n == 0 || positives == 0 || positives == m.n) {
        throw SingleClass("training data needs at least one example per class");
    }

    std_out.mean.assign(m.d, 0.0);
    std_out.stddev.assign(m.d, 1.0);
    for (std::size_t j = 0; j < m.d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m.n; ++i) sum += m.at(i, j);
        const double mean = sum / static_cast<double>(m.n);
        double sq = 0.0;
        for (std::size_t i = 0; i < m.n; ++i) {
            const double dv = m.at(i, j) - mean;
            sq += dv * dv;
        }
        const double sd = std::sqrt(sq / static_cast<double>(m.n));
        std_out.mean[j] = mean;
        std_out.stddev[j] = sd > 1e-12 ? sd : 1.0;
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.d; ++j) {
            m.x[i * m.d + j] = (m.at(i, j) - std_out.mean[j]) / std_out.stddev[j];
        }
    }
    return m;
}

double tree_prob(const TreeParams& tree, const std::vector<double>& z) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
        const TreeNode& nd = tree.nodes[node];
        node = z[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[node].prob_top;
}

}  // namespace detail

TrainedModel train_gaussian_nb(const Dataset& data, const Hyperparams& hp) {
    TrainedModel model;
    model.kind = ModelKind::gaussian_nb;
    model.selector = data.selector;
    model.train_meta = {hp.seed, hp, 0};

    const auto m = detail::prepare(data, model.standardization);
    NbParams p;
    std::size_t n_pos = 0;
    for (int yi : m.y) n_pos += yi;
    const std::size_t n_neg = m.n - n_pos;
    p.log_prior_pos = std::log(static_cast<double>(n_pos) / static_cast<double>(m.n));
    p.log_prior_neg = std::log(static_cast<double>(n_neg) / static_cast<double>(m.n));
    p.mean_neg.assign(m.d, 0.0);
    p.mean_pos.assign(m.d, 0.0);
    p.var_neg.assign(m.d, 0.0);
    p.var_pos.assign(m.d, 0.0);

    for (std::size_t i = 0; i < m.n; ++i) {
        auto& mean = m.y[i] ? p.mean_pos : p.mean_neg;
        for (std::size_t j = 0; j < m.d; ++j) mean[j] += m.at(i, j);
    }
    for (std::size_t j = 0; j < m.d; ++j) {
        p.mean_pos[j] /= static_cast<double>(n_pos);
        p.mean_neg[j] /= static_cast<double>(n_neg);
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        const auto& mean = m.y[i] ? p.mean_pos : p.mean_neg;
        auto& var = m.y[i] ? p.var_pos : p.var_neg;
        for (std::size_t j = 0; j < m.d; ++j) {
            const double dv = m.at(i, j) - mean[j];
            var[j] += dv * dv;
        }
    }
    for (std::size_t j = 0; j < m.d; ++j) {
        p.var_pos[j] = std::max(p.var_pos[j] / static_cast<double>(n_pos), hp.nb_var_floor);
        p.var_neg[j] = std::max(p.var_neg[j] / static_cast<double>(n_neg), hp.nb_var_floor);
    }
    model.parameters = std::move(p);
    return model;
}

TrainedModel train_linear_svm(const Dataset& data, const Hyperparams& hp) {
    TrainedModel model;
    model.kind = ModelKind::linear_svm;
    model.selector = data.selector;
    model.train_meta = {hp.seed, hp, 0};

    const auto m = detail::prepare(data, model.standardization);
    SvmParams p;
    p.weights.assign(m.d, 0.0);
    p.bias = 0.0;

    std::vector<std::size_t> order(m.n);
    for (std::size_t i = 0; i < m.n; ++i) order[i] = i;
    Rng rng = make_rng(hp.seed, /*stream=*/0x5f3);

    // Pegasos: hinge-loss subgradient steps, eta_t = 1/(lambda*t),
    // unregularized bias.
    std::size_t t = 0;
    for (int epoch = 0; epoch < hp.svm_epochs; ++epoch) {
        shuffle(order, rng);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (hp.svm_lambda * static_cast<double>(t));
            const double yi = m.y[i] ? 1.0 : -1.0;
            const double* xi = m.row(i);
            double margin = p.bias;
            for (std::size_t j = 0; j < m.d; ++j) margin += p.weights[j] * xi[j];
            const double scale = 1.0 - eta * hp.svm_lambda;
            if (yi * margin < 1.0) {
                for (std::size_t j = 0; j < m.d; ++j) {
                    p.weights[j] = scale * p.weights[j] + eta * yi * xi[j];
                }
                p.bias += eta * yi;
            } else {
                for (std::size_t j = 0; j < m.d; ++j) p.weights[j] *= scale;
            }
        }
    }
    model.parameters = std::move(p);
    return model;
}

TrainedModel train_cond_tree(const Dataset& data, const Hyperparams& hp) {
    TrainedModel model;
    model.kind = ModelKind::cond_tree;
    model.selector = data.selector;
    model.train_meta = {hp.seed, hp, 0};

    if (data.examples.size() < 2 * static_cast<std::size_t>(hp.tree_min_leaf)) {
        throw TooFewExamples("conditional tree needs at least " +
                             std::to_string(2 * hp.tree_min_leaf) + " examples");
    }
    const auto m = detail::prepare(data, model.standardization);
    model.parameters = detail::grow_cond_tree(m, hp);
    return model;
}

TrainedModel train_random_forest(const Dataset& data, const Hyperparams& hp) {
    TrainedModel model;
    model.kind = ModelKind::random_forest;
    model.selector = data.selector;
    model.train_meta = {hp.seed, hp, 0};

    if (data.examples.size() < 2 * static_cast<std::size_t>(hp.tree_min_leaf)) {
        throw TooFewExamples("random forest needs at least " +
                             std::to_string(2 * hp.tree_min_leaf) + " examples");
    }
    const auto m = detail::prepare(data, model.standardization);
    model.parameters = detail::grow_forest(m, hp);
    return model;
}

TrainedModel train_model(ModelKind kind, const Dataset& data, const Hyperparams& hp) {
    switch (kind) {
        case ModelKind::gaussian_nb: return train_gaussian_nb(data, hp);
        case ModelKind::cond_tree: return train_cond_tree(data, hp);
        case ModelKind::random_forest: return train_random_forest(data, hp);
        case ModelKind::linear_svm: return train_linear_svm(data, hp);
    }
    throw InvalidConfig("unknown model kind");
}

Prediction predict(const TrainedModel& model, const std::vector<double>& v) {
    if (v.size() != model.selector.members.size()) {
        throw ArityMismatch("expected " + std::to_string(model.selector.members.size()) +
                            " features, got " + std::to_string(v.size()));
    }
    const auto z = model.standardization.apply(v);
    double score = 0.0;
    if (const auto* nb = std::get_if<NbParams>(&model.parameters)) {
        double lp_pos = nb->log_prior_pos;
        double lp_neg = nb->log_prior_neg;
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double dp = z[j] - nb->mean_pos[j];
            const double dn = z[j] - nb->mean_neg[j];
            lp_pos += -0.5 * std::log(2.0 * 3.14159265358979323846 * nb->var_pos[j]) -
                      dp * dp / (2.0 * nb->var_pos[j]);
            lp_neg += -0.5 * std::log(2.0 * 3.14159265358979323846 * nb->var_neg[j]) -
                      dn * dn / (2.0 * nb->var_neg[j]);
        }
        const double hi = std::max(lp_pos, lp_neg);
        score = std::exp(lp_pos - hi) / (std::exp(lp_pos - hi) + std::exp(lp_neg - hi));
    } else if (const auto* tree = std::get_if<TreeParams>(&model.parameters)) {
        score = detail::tree_prob(*tree, z);
    } else if (const auto* forest = std::get_if<ForestParams>(&model.parameters)) {
        std::size_t votes = 0;
        for (const TreeParams& t : forest->trees) {
            if (detail::tree_prob(t, z) >= 0.5) ++votes;
        }
        score = static_cast<double>(votes) / static_cast<double>(forest->trees.size());
    } else if (const auto* svm = std::get_if<SvmParams>(&model.parameters)) {
        double margin = svm->bias;
        for (std::size_t j = 0; j < z.size(); ++j) margin += svm->weights[j] * z[j];
        score = 1.0 / (1.0 + std::exp(-margin));
    }
    return {score >= 0.5, score};
}

}  // namespace convoarg
