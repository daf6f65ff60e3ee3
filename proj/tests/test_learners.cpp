#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "convoarg/errors.hpp"
#include "convoarg/learners.hpp"
#include "convoarg/rng.hpp"

using namespace convoarg;

namespace {

// Synthetic data is routed through real-valued feature slots.
Dataset make_dataset(const std::vector<std::vector<double>>& xs, const std::vector<bool>& ys,
                     const std::vector<std::string>& members) {
    Dataset d;
    d.selector = {"synthetic", members};
    d.provenance = "synthetic";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        LabeledExample ex;
        ex.conversation_id = "c";
        ex.user_id = "u" + std::to_string(i);
        std::array<double, 19> values{};
        for (std::size_t j = 0; j < members.size(); ++j) {
            values[feature_index(members[j])] = xs[i][j];
        }
        ex.features = UserFeatureVector::from_array(ex.user_id, values);
        ex.is_top = ys[i];
        d.examples.push_back(std::move(ex));
    }
    return d;
}

// Two clouds separated by a unit margin along the first coordinate.
void separable_2d(Rng& rng, std::size_t n, std::vector<std::vector<double>>& xs,
                  std::vector<bool>& ys) {
    for (std::size_t i = 0; i < n; ++i) {
        const bool top = i % 2 == 0;
        const double x0 = (0.5 + 2.5 * uniform_real(rng)) * (top ? 1.0 : -1.0);
        const double x1 = 6.0 * uniform_real(rng) - 3.0;
        xs.push_back({x0, x1});
        ys.push_back(top);
    }
}

double accuracy(const TrainedModel& model, const std::vector<std::vector<double>>& xs,
                const std::vector<bool>& ys) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (predict(model, xs[i]).label == ys[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(xs.size());
}

const std::vector<std::string> kXY = {"CBC", "CEC"};

}  // namespace

TEST_CASE("gaussian nb separates symmetric classes around the midpoint") {
    // empirical means 0 and 10, empirical variance exactly 1
    const auto d = make_dataset({{-1.0}, {1.0}, {-1.0}, {1.0}, {9.0}, {11.0}, {9.0}, {11.0}},
                                {false, false, false, false, true, true, true, true}, {"CBC"});
    const auto model = train_gaussian_nb(d, {});
    CHECK(predict(model, {5.0}).score == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(predict(model, {4.5}).label == false);
    CHECK(predict(model, {5.5}).label == true);
    CHECK(predict(model, {0.0}).score < 0.01);
    CHECK(predict(model, {10.0}).score > 0.99);
}

TEST_CASE("gaussian nb falls back to the prior for identical class distributions") {
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    for (int i = 0; i < 9; ++i) {
        xs.push_back({static_cast<double>(i % 3)});
        ys.push_back(false);
    }
    for (int i = 0; i < 3; ++i) {
        xs.push_back({static_cast<double>(i % 3)});
        ys.push_back(true);
    }
    const auto model = train_gaussian_nb(make_dataset(xs, ys, {"CBC"}), {});
    for (double x : {0.0, 1.0, 2.0}) {
        const auto p = predict(model, {x});
        CHECK(p.label == false);
        CHECK(p.score == doctest::Approx(0.25).epsilon(1e-9));  // the positive prior
    }
}

TEST_CASE("gaussian nb floors the variance of constant features") {
    const auto d = make_dataset({{3.0}, {3.0}, {3.0}, {3.0}}, {false, false, true, true}, {"CBC"});
    const auto model = train_gaussian_nb(d, {});
    const auto p = predict(model, {3.0});
    CHECK(std::isfinite(p.score));
    CHECK(p.score == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("training rejects single-class data") {
    const auto d = make_dataset({{1.0}, {2.0}, {3.0}, {4.0}}, {true, true, true, true}, {"CBC"});
    CHECK_THROWS_AS(train_gaussian_nb(d, {}), SingleClass);
    CHECK_THROWS_AS(train_linear_svm(d, {}), SingleClass);
    Hyperparams hp;
    hp.tree_min_leaf = 2;
    CHECK_THROWS_AS(train_cond_tree(d, hp), SingleClass);
    CHECK_THROWS_AS(train_random_forest(d, hp), SingleClass);
}

TEST_CASE("linear svm reaches 0.99 on margin-separated data") {
    Rng rng = make_rng(101);
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<bool> train_y, test_y;
    separable_2d(rng, 1000, train_x, train_y);
    separable_2d(rng, 1000, test_x, test_y);

    Hyperparams hp;
    hp.seed = 7;
    const auto model = train_linear_svm(make_dataset(train_x, train_y, kXY), hp);
    CHECK(accuracy(model, test_x, test_y) >= 0.99);
}

TEST_CASE("linear svm separates two repeated points") {
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    for (int i = 0; i < 5; ++i) {
        xs.push_back({1.0, 0.0});
        ys.push_back(true);
        xs.push_back({-1.0, 0.0});
        ys.push_back(false);
    }
    const auto model = train_linear_svm(make_dataset(xs, ys, kXY), {});
    CHECK(predict(model, {1.0, 0.0}).label == true);
    CHECK(predict(model, {-1.0, 0.0}).label == false);
}

TEST_CASE("standardization absorbs feature rescaling") {
    Rng rng = make_rng(103);
    std::vector<std::vector<double>> xs, test_x;
    std::vector<bool> ys, test_y;
    separable_2d(rng, 400, xs, ys);
    separable_2d(rng, 400, test_x, test_y);

    auto scaled = [](const std::vector<std::vector<double>>& rows) {
        auto out = rows;
        for (auto& r : out) r[0] *= 1000.0;
        return out;
    };
    Hyperparams hp;
    hp.seed = 3;
    const auto base = train_linear_svm(make_dataset(xs, ys, kXY), hp);
    const auto rescaled = train_linear_svm(make_dataset(scaled(xs), ys, kXY), hp);
    const auto scaled_test = scaled(test_x);
    for (std::size_t i = 0; i < test_x.size(); ++i) {
        const auto a = predict(base, test_x[i]);
        const auto b = predict(rescaled, scaled_test[i]);
        if (std::abs(a.score - 0.5) > 1e-6) CHECK(a.label == b.label);
    }
}

TEST_CASE("conditional tree finds the planted boundary") {
    Rng rng = make_rng(104);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    for (int i = 0; i < 200; ++i) {
        const double x = 2.0 * uniform_real(rng) - 1.0;
        xs.push_back({x});
        ys.push_back(x > 0.0);
    }
    Hyperparams hp;
    hp.seed = 11;
    const auto d = make_dataset(xs, ys, {"CBC"});
    const auto model = train_cond_tree(d, hp);
    CHECK(accuracy(model, xs, ys) >= 0.99);

    const auto& tree = std::get<TreeParams>(model.parameters);
    REQUIRE(!tree.nodes.empty());
    REQUIRE(tree.nodes[0].feature == 0);
    const double raw_threshold = tree.nodes[0].threshold * model.standardization.stddev[0] +
                                 model.standardization.mean[0];
    CHECK(std::abs(raw_threshold) < 0.2);
}

TEST_CASE("conditional tree stays a single leaf on label-independent features") {
    int single_leaf = 0;
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng = make_rng(static_cast<std::uint64_t>(seed) + 500);
        std::vector<std::vector<double>> xs;
        std::vector<bool> ys;
        for (int i = 0; i < 200; ++i) {
            xs.push_back({uniform_real(rng), uniform_real(rng), uniform_real(rng)});
            ys.push_back(uniform_real(rng) < 0.5);
        }
        Hyperparams hp;
        hp.seed = static_cast<std::uint64_t>(seed);
        const auto model = train_cond_tree(make_dataset(xs, ys, {"CBC", "CEC", "CClC"}), hp);
        if (std::get<TreeParams>(model.parameters).nodes.size() == 1) ++single_leaf;
    }
    CHECK(single_leaf >= 40);  // >= 80% of 50 seeded reruns
}

TEST_CASE("conditional tree requires enough examples") {
    const auto d = make_dataset({{0.0}, {1.0}, {2.0}, {3.0}}, {false, false, true, true}, {"CBC"});
    Hyperparams hp;  // default min leaf of 7 needs 14 examples
    CHECK_THROWS_AS(train_cond_tree(d, hp), TooFewExamples);
}

TEST_CASE("random forest out-of-bag accuracy on separable data") {
    Rng rng = make_rng(105);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    separable_2d(rng, 600, xs, ys);
    Hyperparams hp;
    hp.seed = 13;
    const auto model = train_random_forest(make_dataset(xs, ys, kXY), hp);
    const auto& forest = std::get<ForestParams>(model.parameters);
    REQUIRE(forest.oob_accuracy.has_value());
    CHECK(*forest.oob_accuracy >= 0.98);
    CHECK(forest.trees.size() == 100);
}

TEST_CASE("random forest probabilities are exact vote fractions") {
    Rng rng = make_rng(106);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    separable_2d(rng, 300, xs, ys);
    Hyperparams hp;
    hp.seed = 29;
    const auto model = train_random_forest(make_dataset(xs, ys, kXY), hp);

    const auto deep_positive = predict(model, {3.0, 0.0});
    CHECK(deep_positive.score == 1.0);  // unanimous vote
    const auto deep_negative = predict(model, {-3.0, 0.0});
    CHECK(deep_negative.score == 0.0);

    for (const auto& x : xs) {
        const double s = predict(model, x).score;
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        const double votes = s * 100.0;
        CHECK(std::abs(votes - std::round(votes)) < 1e-9);
    }
}

TEST_CASE("a one-tree forest is a single bootstrap tree") {
    Rng rng = make_rng(107);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    separable_2d(rng, 100, xs, ys);
    Hyperparams hp;
    hp.forest_trees = 1;
    const auto model = train_random_forest(make_dataset(xs, ys, kXY), hp);
    CHECK(std::get<ForestParams>(model.parameters).trees.size() == 1);
}

TEST_CASE("training is bit-deterministic under a fixed seed") {
    Rng rng = make_rng(108);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    separable_2d(rng, 150, xs, ys);
    const auto d = make_dataset(xs, ys, kXY);
    Hyperparams hp;
    hp.seed = 99;
    hp.forest_trees = 20;
    for (ModelKind kind : {ModelKind::gaussian_nb, ModelKind::cond_tree,
                           ModelKind::random_forest, ModelKind::linear_svm}) {
        const auto a = model_to_json(train_model(kind, d, hp));
        const auto b = model_to_json(train_model(kind, d, hp));
        CHECK(a == b);
    }
}

TEST_CASE("models survive a JSON round trip") {
    Rng rng = make_rng(109);
    std::vector<std::vector<double>> xs;
    std::vector<bool> ys;
    separable_2d(rng, 120, xs, ys);
    const auto d = make_dataset(xs, ys, kXY);
    Hyperparams hp;
    hp.seed = 17;
    hp.forest_trees = 10;
    for (ModelKind kind : {ModelKind::gaussian_nb, ModelKind::cond_tree,
                           ModelKind::random_forest, ModelKind::linear_svm}) {
        const auto model = train_model(kind, d, hp);
        const auto restored = model_from_json(model_to_json(model));
        CHECK(model_to_json(restored) == model_to_json(model));
        for (const auto& x : {std::vector<double>{1.2, -0.3}, {-2.0, 2.0}, {0.1, 0.1}}) {
            CHECK(predict(restored, x).score == predict(model, x).score);
        }
    }
}

TEST_CASE("predict rejects wrong arity") {
    const auto d = make_dataset({{0.0, 1.0}, {1.0, 0.0}, {0.1, 0.9}, {0.9, 0.2}},
                                {false, true, false, true}, kXY);
    const auto model = train_gaussian_nb(d, {});
    CHECK_THROWS_AS(predict(model, {1.0}), ArityMismatch);
    CHECK_THROWS_AS(predict(model, {1.0, 2.0, 3.0}), ArityMismatch);
}
