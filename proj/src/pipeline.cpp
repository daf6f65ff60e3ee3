#include "convoarg/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "convoarg/argraph.hpp"
#include "convoarg/csv.hpp"
#include "convoarg/errors.hpp"
#include "convoarg/features.hpp"
#include "convoarg/metrics.hpp"
#include "convoarg/rng.hpp"
#include "json.hpp"

namespace convoarg {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_file(const std::filesystem::path& path) {
    return fnv1a64_hex(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

RunConfig run_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InvalidConfig("run config is not a JSON object");
    RunConfig c;
    if (!j.contains("input") || !j.contains("out_dir")) {
        throw InvalidConfig("run config needs 'input' and 'out_dir'");
    }
    c.input_path = j.at("input").get<std::string>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.fraction = j.value("fraction", c.fraction);
    c.selector = j.value("selector", c.selector);
    c.kind = j.value("kind", c.kind);
    c.seed = j.value("seed", c.seed);
    c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
    c.balance_size = j.value("balance_size", c.balance_size);
    if (j.contains("hyperparams")) {
        const auto& h = j.at("hyperparams");
        Hyperparams& hp = c.hyperparams;
        hp.nb_var_floor = h.value("nb_var_floor", hp.nb_var_floor);
        hp.tree_alpha = h.value("tree_alpha", hp.tree_alpha);
        hp.tree_min_leaf = h.value("tree_min_leaf", hp.tree_min_leaf);
        hp.forest_trees = h.value("forest_trees", hp.forest_trees);
        hp.forest_mtry = h.value("forest_mtry", hp.forest_mtry);
        hp.svm_lambda = h.value("svm_lambda", hp.svm_lambda);
        hp.svm_epochs = h.value("svm_epochs", hp.svm_epochs);
    }
    c.hyperparams.seed = c.seed;
    return c;
}

namespace {

constexpr int kStageVersion = 1;

struct ManifestEntry {
    std::string stage;
    std::string file;
    std::string hash;
};

void validate_run_config(const RunConfig& c) {
    if (!(c.fraction > 0.0 && c.fraction < 1.0)) throw InvalidConfig("fraction must be in (0,1)");
    if (!(c.holdout_fraction > 0.0 && c.holdout_fraction < 1.0)) {
        throw InvalidConfig("holdout_fraction must be in (0,1)");
    }
    selector_by_name(c.selector);      // throws for unknown names
    model_kind_from_string(c.kind);    // throws for unknown kinds
    if (!std::filesystem::exists(c.input_path)) {
        throw InvalidConfig("input path '" + c.input_path + "' does not exist");
    }
    if (c.out_dir.empty()) throw InvalidConfig("out_dir is empty");
}

std::string centrality_csv(const std::vector<ArgGraph>& graphs,
                           const std::vector<CentralityScores>& scores) {
    std::string out = "conversation_id,node_id,betweenness,eigenvector,closeness\n";
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        for (std::size_t i = 0; i < scores[g].nodes.size(); ++i) {
            out += csv::join_row({graphs[g].conversation_id, scores[g].nodes[i],
                                  csv::format_double(scores[g].betweenness[i]),
                                  csv::format_double(scores[g].eigenvector[i]),
                                  csv::format_double(scores[g].closeness[i])});
            out += '\n';
        }
    }
    return out;
}

std::string examples_csv(const std::vector<LabeledExample>& rows, bool with_label) {
    std::ostringstream ss;
    write_feature_csv(ss, rows, with_label);
    return ss.str();
}

}  // namespace

RunResult run_detect(const RunConfig& config, const StageLog& log) {
    validate_run_config(config);
    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);

    std::vector<ManifestEntry> manifest;
    auto emit = [&](const std::string& stage, const std::string& file, const std::string& content) {
        write_text_file(out_dir / file, content);
        manifest.push_back({stage, file, fnv1a64_hex(content)});
        if (log) log(stage, "wrote " + file);
    };
    auto run_stage = [&](const std::string& stage, auto&& fn) {
        try {
            fn();
        } catch (const StageFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw StageFailure(stage, e.what());
        }
    };

    // ingest
    std::vector<Conversation> conversations;
    run_stage("ingest", [&] {
        conversations = parse_corpus(read_lines(config.input_path));
        if (conversations.size() < 2) {
            throw Error("need at least 2 conversations to split off a holdout");
        }
        std::string normalized;
        for (const auto& c : conversations) normalized += to_canonical_jsonl(c);
        emit("ingest", "normalized.jsonl", normalized);
    });

    // graph
    std::vector<ArgGraph> graphs;
    run_stage("graph", [&] {
        std::string out;
        graphs.reserve(conversations.size());
        for (const auto& c : conversations) {
            graphs.push_back(build_graph(c));
            out += graph_to_json(graphs.back());
            out += '\n';
        }
        emit("graph", "graphs.jsonl", out);
    });

    // centrality
    std::vector<CentralityScores> scores;
    run_stage("centrality", [&] {
        scores.reserve(graphs.size());
        for (const auto& g : graphs) scores.push_back(compute_centralities(g));
        emit("centrality", "centrality.csv", centrality_csv(graphs, scores));
    });

    // features
    std::vector<LabeledExample> examples;
    run_stage("features", [&] {
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            for (auto& fv : aggregate_features(graphs[i], scores[i], conversations[i])) {
                LabeledExample ex;
                ex.conversation_id = graphs[i].conversation_id;
                ex.user_id = fv.user_id;
                ex.features = std::move(fv);
                examples.push_back(std::move(ex));
            }
        }
        emit("features", "features.csv", examples_csv(examples, false));
    });

    // label
    run_stage("label", [&] {
        std::vector<Post> all_posts;
        for (const auto& c : conversations) {
            all_posts.insert(all_posts.end(), c.posts.begin(), c.posts.end());
        }
        const auto flagged = flag_top_users(cumulative_approval(all_posts), config.fraction);
        for (auto& ex : examples) ex.is_top = flagged.count(ex.user_id) > 0;
        emit("label", "labeled.csv", examples_csv(examples, true));
    });

    // split: hold out whole conversations to keep the holdout realistic
    Dataset train_set, holdout;
    run_stage("split", [&] {
        std::vector<std::string> cids;
        for (const auto& c : conversations) cids.push_back(c.conversation_id);
        Rng rng = make_rng(config.seed, /*stream=*/0x59117);
        shuffle(cids, rng);
        const auto n_hold = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(config.holdout_fraction *
                                                   static_cast<double>(cids.size()))));
        std::unordered_set<std::string> hold_ids(cids.begin(),
                                                 cids.begin() + static_cast<std::ptrdiff_t>(n_hold));

        std::vector<LabeledExample> pool;
        holdout.selector = selector_by_name(config.selector);
        holdout.provenance = "validation";
        for (const auto& ex : examples) {
            if (hold_ids.count(ex.conversation_id)) holdout.examples.push_back(ex);
            else pool.push_back(ex);
        }

        std::size_t pos = 0, neg = 0;
        for (const auto& ex : pool) (ex.is_top ? pos : neg) += 1;
        std::size_t target = config.balance_size;
        if (target == 0) target = 2 * std::min(pos, neg);
        if (target < 2) throw Error("training pool has no usable class balance");
        train_set = balance_dataset(pool, target, config.seed);
        train_set.selector = selector_by_name(config.selector);

        emit("split", "train.csv", examples_csv(train_set.examples, true));
        emit("split", "holdout.csv", examples_csv(holdout.examples, true));
    });

    // train
    TrainedModel model;
    run_stage("train", [&] {
        Hyperparams hp = config.hyperparams;
        hp.seed = config.seed;
        model = train_model(model_kind_from_string(config.kind), train_set, hp);
        emit("train", "model.json", model_to_json(model));
    });

    // eval
    RunResult result;
    run_stage("eval", [&] {
        result.report = evaluate(model, holdout);
        emit("eval", "report.json", report_to_json(result.report));

        std::string flagged = "conversation_id,user_id,score\n";
        for (const auto& ex : holdout.examples) {
            const auto pred = predict(model, select_features(ex.features, model.selector));
            if (pred.label) {
                flagged += csv::join_row(
                    {ex.conversation_id, ex.user_id, csv::format_double(pred.score)});
                flagged += '\n';
                ++result.flagged_users;
            }
        }
        emit("eval", "flagged.csv", flagged);
    });

    // manifest last: a failed run leaves no manifest behind
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& entry : manifest) {
        stages.push_back({{"stage", entry.stage},
                          {"version", kStageVersion},
                          {"file", entry.file},
                          {"fnv1a64", entry.hash}});
    }
    nlohmann::json mj{
        {"seed", config.seed},
        {"fraction", config.fraction},
        {"selector", config.selector},
        {"kind", config.kind},
        {"holdout_fraction", config.holdout_fraction},
        {"balance_size", config.balance_size},
        {"outputs", stages},
    };
    const std::string manifest_text = mj.dump(2);
    result.manifest_path = out_dir / "manifest.json";
    write_text_file(result.manifest_path, manifest_text);
    result.manifest_hash = fnv1a64_hex(manifest_text);
    if (log) log("manifest", "hash " + result.manifest_hash);
    return result;
}

}  // namespace convoarg
