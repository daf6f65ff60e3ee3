#include <algorithm>
#include <cmath>

#include "convoarg/learners.hpp"
#include "convoarg/rng.hpp"

namespace convoarg::detail {

namespace {

double gini(std::size_t n0, std::size_t n1) {
    const double n = static_cast<double>(n0 + n1);
    if (n == 0.0) return 0.0;
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct GiniTreeBuilder {
    const TrainMatrix& m;
    std::size_t mtry;
    Rng& rng;
    std::vector<double>& importance;  // accumulated impurity gain per feature
    TreeParams tree;
    std::vector<std::pair<double, int>> scratch;  // (value, label)

    int make_leaf(const std::vector<std::size_t>& idx) {
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        TreeNode node;
        node.prob_top = static_cast<double>(n1) / static_cast<double>(idx.size());
        node.count = static_cast<int>(idx.size());
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    }

    int grow(const std::vector<std::size_t>& idx) {
        const std::size_t n = idx.size();
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        if (n < 2 || n1 == 0 || n1 == n) return make_leaf(idx);

        const double impurity = gini(n - n1, n1);
        const auto candidates = sample_indices(rng, m.d, mtry);

        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t j : candidates) {
            scratch.clear();
            for (std::size_t i : idx) scratch.emplace_back(m.at(i, j), m.y[i]);
            std::sort(scratch.begin(), scratch.end());

            std::size_t l0 = 0, l1 = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                if (scratch[k].second) ++l1;
                else ++l0;
                if (scratch[k].first == scratch[k + 1].first) continue;
                const std::size_t n_left = k + 1;
                const std::size_t n_right = n - n_left;
                const double gain =
                    impurity -
                    (static_cast<double>(n_left) / static_cast<double>(n)) * gini(l0, l1) -
                    (static_cast<double>(n_right) / static_cast<double>(n)) *
                        gini(n - n1 - l0, n1 - l1);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(j);
                    best_threshold = 0.5 * (scratch[k].first + scratch[k + 1].first);
                }
            }
        }
        if (best_feature < 0) return make_leaf(idx);

        importance[static_cast<std::size_t>(best_feature)] +=
            best_gain * static_cast<double>(n) / static_cast<double>(m.n);

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            if (m.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold) {
                left.push_back(i);
            } else {
                right.push_back(i);
            }
        }

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.count = static_cast<int>(n);
        node.prob_top = static_cast<double>(n1) / static_cast<double>(n);
        tree.nodes.push_back(node);
        const int self = static_cast<int>(tree.nodes.size() - 1);
        tree.nodes[self].left = grow(left);
        tree.nodes[self].right = grow(right);
        return self;
    }
};

double leaf_prob(const TreeParams& tree, const double* row, std::size_t d) {
    std::vector<double> z(row, row + d);
    return tree_prob(tree, z);
}

}  // namespace

ForestParams grow_forest(const TrainMatrix& m, const Hyperparams& hp) {
    ForestParams forest;
    forest.feature_importances.assign(m.d, 0.0);
    const std::size_t mtry =
        hp.forest_mtry > 0
            ? std::min<std::size_t>(static_cast<std::size_t>(hp.forest_mtry), m.d)
            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m.d))));

    std::vector<std::size_t> oob_pos(m.n, 0), oob_tot(m.n, 0);
    std::vector<char> in_bag(m.n);

    for (int t = 0; t < hp.forest_trees; ++t) {
        Rng rng = make_rng(hp.seed + static_cast<std::uint64_t>(t), /*stream=*/0xf09e);
        std::fill(in_bag.begin(), in_bag.end(), 0);
        std::vector<std::size_t> sample(m.n);
        for (std::size_t i = 0; i < m.n; ++i) {
            sample[i] = uniform_index(rng, m.n);
            in_bag[sample[i]] = 1;
        }

        GiniTreeBuilder builder{m, mtry, rng, forest.feature_importances, {}, {}};
        builder.grow(sample);
        for (std::size_t i = 0; i < m.n; ++i) {
            if (in_bag[i]) continue;
            ++oob_tot[i];
            if (leaf_prob(builder.tree, m.row(i), m.d) >= 0.5) ++oob_pos[i];
        }
        forest.trees.push_back(std::move(builder.tree));
    }

    for (double& v : forest.feature_importances) v /= static_cast<double>(hp.forest_trees);

    std::size_t correct = 0, counted = 0;
    for (std::size_t i = 0; i < m.n; ++i) {
        if (oob_tot[i] == 0) continue;
        ++counted;
        const bool pred = 2 * oob_pos[i] >= oob_tot[i];
        if (pred == (m.y[i] == 1)) ++correct;
    }
    if (counted > 0) {
        forest.oob_accuracy = static_cast<double>(correct) / static_cast<double>(counted);
    }
    return forest;
}

}  // namespace convoarg::detail
