#include <algorithm>
#include <cmath>

#include "convoarg/learners.hpp"
#include "convoarg/rng.hpp"

namespace convoarg::detail {

namespace {

constexpr std::size_t kPermutations = 999;

struct CitBuilder {
    const TrainMatrix& m;
    const Hyperparams& hp;
    Rng rng;
    TreeParams tree;

    CitBuilder(const TrainMatrix& mat, const Hyperparams& params)
        : m(mat), hp(params), rng(make_rng(params.seed, /*stream=*/0xc17)) {}

    int make_leaf(const std::vector<std::size_t>& idx) {
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        TreeNode node;
        node.prob_top = static_cast<double>(n1) / static_cast<double>(idx.size());
        node.count = static_cast<int>(idx.size());
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    }

    // Bonferroni-adjusted Monte-Carlo p-value of the standardized
    // between-class mean difference, per feature. The node-level scale
    // cancels out of the permutation comparison, so raw mean differences
    // are compared directly.
    int select_feature(const std::vector<std::size_t>& idx, double& best_p_adj) {
        const std::size_t n = idx.size();
        const std::size_t d = m.d;
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        const std::size_t n0 = n - n1;

        std::vector<double> tot(d, 0.0), sum1(d, 0.0);
        for (std::size_t i : idx) {
            const double* row = m.row(i);
            for (std::size_t j = 0; j < d; ++j) {
                tot[j] += row[j];
                if (m.y[i]) sum1[j] += row[j];
            }
        }
        std::vector<double> obs(d);
        for (std::size_t j = 0; j < d; ++j) {
            obs[j] = std::abs(sum1[j] / static_cast<double>(n1) -
                              (tot[j] - sum1[j]) / static_cast<double>(n0));
        }

        std::vector<std::size_t> buf(idx);
        std::vector<double> sums(d);
        std::vector<std::size_t> exceed(d, 0);
        for (std::size_t b = 0; b < kPermutations; ++b) {
            for (std::size_t k = 0; k < n1; ++k) {
                std::swap(buf[k], buf[k + uniform_index(rng, n - k)]);
            }
            std::fill(sums.begin(), sums.end(), 0.0);
            for (std::size_t k = 0; k < n1; ++k) {
                const double* row = m.row(buf[k]);
                for (std::size_t j = 0; j < d; ++j) sums[j] += row[j];
            }
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = std::abs(sums[j] / static_cast<double>(n1) -
                                             (tot[j] - sums[j]) / static_cast<double>(n0));
                if (diff >= obs[j] - 1e-12) ++exceed[j];
            }
        }

        int best = -1;
        best_p_adj = 2.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double p = static_cast<double>(1 + exceed[j]) /
                             static_cast<double>(1 + kPermutations);
            const double p_adj = std::min(1.0, p * static_cast<double>(d));
            if (p_adj < best_p_adj) {
                best_p_adj = p_adj;
                best = static_cast<int>(j);
            }
        }
        return best;
    }

    // Candidate thresholds are the node's empirical deciles; the chosen one
    // maximizes the standardized mean difference of the dichotomized
    // feature between classes.
    bool choose_threshold(const std::vector<std::size_t>& idx, int feature, double& out_t) {
        const std::size_t n = idx.size();
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        const std::size_t n0 = n - n1;

        std::vector<double> values;
        values.reserve(n);
        for (std::size_t i : idx) values.push_back(m.at(i, static_cast<std::size_t>(feature)));
        std::sort(values.begin(), values.end());
        std::vector<double> grid;
        for (int q = 1; q <= 9; ++q) {
            const auto pos = static_cast<std::size_t>(
                std::floor(0.1 * q * static_cast<double>(n - 1)));
            grid.push_back(values[pos]);
        }
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

        const auto min_leaf = static_cast<std::size_t>(hp.tree_min_leaf);
        double best_stat = -1.0;
        bool found = false;
        for (double t : grid) {
            std::size_t l1 = 0, l0 = 0;
            for (std::size_t i : idx) {
                if (m.at(i, static_cast<std::size_t>(feature)) <= t) {
                    if (m.y[i]) ++l1;
                    else ++l0;
                }
            }
            const std::size_t n_left = l0 + l1;
            const std::size_t n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;
            const double pb = static_cast<double>(n_left) / static_cast<double>(n);
            const double sd = std::sqrt(pb * (1.0 - pb));
            const double diff = std::abs(static_cast<double>(l1) / static_cast<double>(n1) -
                                         static_cast<double>(l0) / static_cast<double>(n0));
            const double stat = diff / std::max(sd, 1e-12);
            if (stat > best_stat) {
                best_stat = stat;
                out_t = t;
                found = true;
            }
        }
        return found;
    }

    int grow(const std::vector<std::size_t>& idx) {
        std::size_t n1 = 0;
        for (std::size_t i : idx) n1 += m.y[i];
        const bool pure = n1 == 0 || n1 == idx.size();
        if (pure || idx.size() < 2 * static_cast<std::size_t>(hp.tree_min_leaf)) {
            return make_leaf(idx);
        }

        double p_adj = 1.0;
        const int feature = select_feature(idx, p_adj);
        if (feature < 0 || p_adj > hp.tree_alpha) return make_leaf(idx);

        double threshold = 0.0;
        if (!choose_threshold(idx, feature, threshold)) return make_leaf(idx);

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            if (m.at(i, static_cast<std::size_t>(feature)) <= threshold) left.push_back(i);
            else right.push_back(i);
        }

        TreeNode node;
        node.feature = feature;
        node.threshold = threshold;
        node.count = static_cast<int>(idx.size());
        node.prob_top = static_cast<double>(n1) / static_cast<double>(idx.size());
        tree.nodes.push_back(node);
        const int self = static_cast<int>(tree.nodes.size() - 1);
        tree.nodes[self].left = grow(left);
        tree.nodes[self].right = grow(right);
        return self;
    }
};

}  // namespace

TreeParams grow_cond_tree(const TrainMatrix& m, const Hyperparams& hp) {
    CitBuilder builder(m, hp);
    std::vector<std::size_t> idx(m.n);
    for (std::size_t i = 0; i < m.n; ++i) idx[i] = i;
    builder.grow(idx);
    return std::move(builder.tree);
}

}  // namespace convoarg::detail
