#include "convoarg/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "convoarg/errors.hpp"
#include "convoarg/rng.hpp"
#include "json.hpp"

namespace convoarg {

std::string report_to_json(const EvalReport& r) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j{
        {"accuracy", r.accuracy},
        {"precision", opt(r.precision)},
        {"recall", opt(r.recall)},
        {"f1", opt(r.f1)},
        {"confusion", {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}}},
        {"flagged_fraction", r.flagged_fraction},
    };
    if (!r.fold_accuracies.empty()) {
        double lo = r.fold_accuracies.front(), hi = lo, sum = 0.0;
        for (double a : r.fold_accuracies) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            sum += a;
        }
        j["folds"] = {{"accuracies", r.fold_accuracies},
                      {"min", lo},
                      {"mean", sum / static_cast<double>(r.fold_accuracies.size())},
                      {"max", hi}};
    }
    return j.dump(2);
}

std::vector<FoldSplit> stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
        (data.examples[i].is_top ? pos : neg).push_back(i);
    }
    if (k < 2) throw InvalidConfig("k-fold needs k >= 2");
    if (pos.size() < k || neg.size() < k) {
        throw TooFewExamples("each class needs at least k=" + std::to_string(k) + " examples");
    }
    Rng rng = make_rng(seed, /*stream=*/0xf01d);
    shuffle(pos, rng);
    shuffle(neg, rng);

    std::vector<FoldSplit> folds(k);
    std::vector<std::size_t> fold_of(data.examples.size());
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = i % k;
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = i % k;
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f) {
            (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
        }
    }
    return folds;
}

namespace {

void fill_derived_metrics(EvalReport& r) {
    const std::size_t total = r.total();
    r.accuracy = total ? static_cast<double>(r.tp + r.tn) / static_cast<double>(total) : 0.0;
    r.flagged_fraction = total ? static_cast<double>(r.tp + r.fp) / static_cast<double>(total) : 0.0;
    if (r.tp + r.fp > 0) {
        r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    }
    if (r.tp + r.fn > 0) {
        r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    }
    if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
        r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
    }
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.selector = data.selector;
    out.provenance = data.provenance;
    out.examples.reserve(idx.size());
    for (std::size_t i : idx) out.examples.push_back(data.examples[i]);
    return out;
}

}  // namespace

EvalReport evaluate(const TrainedModel& model, const Dataset& test) {
    EvalReport r;
    for (const LabeledExample& ex : test.examples) {
        const auto v = select_features(ex.features, model.selector);
        const bool pred = predict(model, v).label;
        if (pred && ex.is_top) ++r.tp;
        else if (pred && !ex.is_top) ++r.fp;
        else if (!pred && ex.is_top) ++r.fn;
        else ++r.tn;
    }
    fill_derived_metrics(r);
    return r;
}

EvalReport cross_validate(ModelKind kind, const Dataset& data, const Hyperparams& hp,
                          std::size_t k, std::uint64_t seed) {
    const auto folds = stratified_kfold(data, k, seed);
    EvalReport pooled;
    for (const FoldSplit& fold : folds) {
        Hyperparams fold_hp = hp;
        fold_hp.seed = seed;
        const TrainedModel model = train_model(kind, subset(data, fold.train), fold_hp);
        const EvalReport fold_report = evaluate(model, subset(data, fold.test));
        pooled.tp += fold_report.tp;
        pooled.fp += fold_report.fp;
        pooled.fn += fold_report.fn;
        pooled.tn += fold_report.tn;
        pooled.fold_accuracies.push_back(fold_report.accuracy);
    }
    fill_derived_metrics(pooled);
    return pooled;
}

PcaResult pca(const Dataset& data, std::size_t k) {
    const std::size_t n = data.examples.size();
    const std::size_t d = data.selector.members.size();
    if (n < 2) throw TooFewExamples("pca needs at least 2 examples");
    if (k > d) throw InvalidConfig("pca k exceeds feature count");

    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (const auto& ex : data.examples) rows.push_back(select_features(ex.features, data.selector));

    PcaResult res;
    res.means.assign(d, 0.0);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < d; ++j) res.means[j] += row[j];
    }
    for (double& v : res.means) v /= static_cast<double>(n);

    // sample covariance of the centered rows
    std::vector<double> cov(d * d, 0.0);
    for (const auto& row : rows) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = row[a] - res.means[a];
            for (std::size_t b = a; b < d; ++b) {
                cov[a * d + b] += da * (row[b] - res.means[b]);
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov[a * d + b] /= static_cast<double>(n - 1);
            cov[b * d + a] = cov[a * d + b];
        }
    }
    double total_var = 0.0;
    for (std::size_t a = 0; a < d; ++a) total_var += cov[a * d + a];
    if (!(total_var > 0.0)) throw DegenerateData("zero total variance");

    auto orthogonalize = [&](std::vector<double>& v) {
        for (const auto& comp : res.components) {
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) dot += v[j] * comp[j];
            for (std::size_t j = 0; j < d; ++j) v[j] -= dot * comp[j];
        }
    };
    auto norm2 = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };

    Rng rng = make_rng(0x9ca0u);
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> v(d);
        double nv = 0.0;
        do {
            for (double& x : v) x = normal(rng);
            orthogonalize(v);
            nv = norm2(v);
        } while (nv < 1e-9);
        for (double& x : v) x /= nv;

        std::vector<double> w(d);
        for (int iter = 0; iter < 10000; ++iter) {
            for (std::size_t a = 0; a < d; ++a) {
                double s = 0.0;
                for (std::size_t b = 0; b < d; ++b) s += cov[a * d + b] * v[b];
                w[a] = s;
            }
            orthogonalize(w);
            const double nw = norm2(w);
            if (nw < 1e-30) break;  // eigenvalue ~ 0: keep current basis vector
            double change = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                w[j] /= nw;
                change += std::abs(w[j] - v[j]);
            }
            v = w;
            if (change < 1e-10) break;
        }

        double eigenvalue = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < d; ++b) s += cov[a * d + b] * v[b];
            eigenvalue += v[a] * s;
        }
        eigenvalue = std::max(eigenvalue, 0.0);

        // deterministic sign: largest-magnitude coordinate positive
        std::size_t pivot = 0;
        for (std::size_t j = 1; j < d; ++j) {
            if (std::abs(v[j]) > std::abs(v[pivot])) pivot = j;
        }
        if (v[pivot] < 0.0) {
            for (double& x : v) x = -x;
        }

        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                cov[a * d + b] -= eigenvalue * v[a] * v[b];
            }
        }
        res.components.push_back(std::move(v));
        res.explained_variance_ratio.push_back(eigenvalue / total_var);
    }
    return res;
}

RfeResult rfe(const Dataset& data, const Hyperparams& hp, std::size_t k_folds,
              std::uint64_t seed) {
    RfeResult res;
    std::vector<std::string> current = data.selector.members;
    while (!current.empty()) {
        Dataset sub = data;
        sub.selector = {"rfe_subset", current};
        const EvalReport cv = cross_validate(ModelKind::random_forest, sub, hp, k_folds, seed);
        res.steps.push_back({current, cv.accuracy});
        if (current.size() == 1) break;

        Hyperparams fit_hp = hp;
        fit_hp.seed = seed;
        const TrainedModel model = train_random_forest(sub, fit_hp);
        const auto& importances = std::get<ForestParams>(model.parameters).feature_importances;
        const std::size_t drop = static_cast<std::size_t>(
            std::min_element(importances.begin(), importances.end()) - importances.begin());
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    res.best_index = 0;
    for (std::size_t i = 1; i < res.steps.size(); ++i) {
        if (res.steps[i].cv_accuracy >= res.steps[res.best_index].cv_accuracy) {
            res.best_index = i;  // ties favor the smaller (later) subset
        }
    }
    return res;
}

std::vector<std::string> ablation_regime_features(const std::string& regime) {
    if (regime == "no_graph") return {"PC", "CC"};
    if (regime == "attacks_only") {
        return {"PC", "CC", "Att_IN", "Att_OUT", "AvgAtt_OUT", "AvgAtt_IN"};
    }
    if (regime == "full") return feature_names();
    throw InvalidConfig("unknown ablation regime '" + regime + "'");
}

std::vector<AblationCell> ablation_study(const Dataset& data, const Hyperparams& hp,
                                         std::uint64_t seed, std::size_t k_folds) {
    std::vector<AblationCell> table;
    for (const char* regime : {"no_graph", "attacks_only", "full"}) {
        Dataset sub = data;
        sub.selector = {regime, ablation_regime_features(regime)};
        for (ModelKind kind :
             {ModelKind::cond_tree, ModelKind::random_forest, ModelKind::linear_svm}) {
            const EvalReport cv = cross_validate(kind, sub, hp, k_folds, seed);
            table.push_back({regime, kind, cv.accuracy});
        }
    }
    return table;
}

}  // namespace convoarg
