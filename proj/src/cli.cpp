#include "convoarg/cli.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "convoarg/analysis.hpp"
#include "convoarg/argraph.hpp"
#include "convoarg/csv.hpp"
#include "convoarg/errors.hpp"
#include "convoarg/features.hpp"
#include "convoarg/metrics.hpp"
#include "convoarg/pipeline.hpp"
#include "convoarg/synth.hpp"
#include "json.hpp"

namespace convoarg::cli {

namespace {

std::vector<std::string> read_input_lines(const std::string& path) {
    if (path == "-") {
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(std::cin, line)) {
            if (!line.empty()) lines.push_back(line);
        }
        return lines;
    }
    return read_lines(path);
}

Dataset load_dataset(const std::string& path, const std::string& selector) {
    std::istringstream in(read_text_file(path));
    Dataset d;
    d.examples = read_feature_csv(in, /*expect_label=*/true);
    d.selector = selector_by_name(selector);
    d.provenance = "evaluation";
    return d;
}

int cmd_ingest(const std::string& in_path, const std::string& out_path) {
    const auto conversations = parse_corpus(read_input_lines(in_path));
    std::string out;
    for (const auto& c : conversations) out += to_canonical_jsonl(c);
    write_text_file(out_path, out);
    std::cerr << "ingested " << conversations.size() << " conversation(s)\n";
    return 0;
}

int cmd_graph(const std::string& in_path, const std::string& out_path) {
    std::string out;
    for (const auto& c : parse_corpus(read_input_lines(in_path))) {
        out += graph_to_json(build_graph(c));
        out += '\n';
    }
    write_text_file(out_path, out);
    return 0;
}

int cmd_centrality(const std::string& in_path, const std::string& out_path) {
    std::string out = "conversation_id,node_id,betweenness,eigenvector,closeness\n";
    for (const auto& line : read_input_lines(in_path)) {
        const ArgGraph g = graph_from_json(line);
        const CentralityScores s = compute_centralities(g);
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            out += csv::join_row({g.conversation_id, s.nodes[i],
                                  csv::format_double(s.betweenness[i]),
                                  csv::format_double(s.eigenvector[i]),
                                  csv::format_double(s.closeness[i])});
            out += '\n';
        }
    }
    write_text_file(out_path, out);
    return 0;
}

int cmd_features(const std::string& graphs_path, const std::string& centrality_path,
                 const std::string& out_path) {
    // centrality rows, grouped by conversation
    std::unordered_map<std::string, CentralityScores> scores;
    {
        std::istringstream in(read_text_file(centrality_path));
        std::string line;
        if (!std::getline(in, line)) throw Error("centrality csv: empty file");
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto fields = csv::split_row(line);
            if (fields.size() != 5) {
                throw Error("centrality csv line " + std::to_string(line_no) +
                            ": expected 5 columns");
            }
            CentralityScores& s = scores[fields[0]];
            s.nodes.push_back(fields[1]);
            s.betweenness.push_back(csv::parse_double(fields[2]));
            s.eigenvector.push_back(csv::parse_double(fields[3]));
            s.closeness.push_back(csv::parse_double(fields[4]));
        }
    }

    std::vector<LabeledExample> rows;
    for (const auto& line : read_input_lines(graphs_path)) {
        const ArgGraph g = graph_from_json(line);
        auto it = scores.find(g.conversation_id);
        if (it == scores.end()) {
            throw GraphMismatch("no centrality rows for conversation '" + g.conversation_id + "'");
        }
        for (auto& fv : aggregate_features(g, it->second)) {
            LabeledExample ex;
            ex.conversation_id = g.conversation_id;
            ex.user_id = fv.user_id;
            ex.features = std::move(fv);
            rows.push_back(std::move(ex));
        }
    }
    std::ostringstream out;
    write_feature_csv(out, rows, /*with_label=*/false);
    write_text_file(out_path, out.str());
    return 0;
}

int cmd_label(const std::string& posts_path, const std::string& features_path, double fraction,
              const std::string& out_path) {
    std::vector<Post> posts;
    for (const auto& c : parse_corpus(read_input_lines(posts_path))) {
        posts.insert(posts.end(), c.posts.begin(), c.posts.end());
    }
    const auto flagged = flag_top_users(cumulative_approval(posts), fraction);

    std::istringstream in(read_text_file(features_path));
    auto rows = read_feature_csv(in, /*expect_label=*/false);
    for (auto& row : rows) row.is_top = flagged.count(row.user_id) > 0;

    std::ostringstream out;
    write_feature_csv(out, rows, /*with_label=*/true);
    write_text_file(out_path, out.str());
    std::cerr << "flagged " << flagged.size() << " top user(s)\n";
    return 0;
}

int cmd_balance(const std::string& in_path, std::size_t size, std::uint64_t seed,
                const std::string& out_path) {
    std::istringstream in(read_text_file(in_path));
    const auto rows = read_feature_csv(in, /*expect_label=*/true);
    const Dataset d = balance_dataset(rows, size, seed);
    std::ostringstream out;
    write_feature_csv(out, d.examples, /*with_label=*/true);
    write_text_file(out_path, out.str());
    return 0;
}

int cmd_train(const std::string& kind, const std::string& selector, const std::string& in_path,
              const Hyperparams& hp, const std::string& out_path) {
    const Dataset d = load_dataset(in_path, selector);
    const TrainedModel model = train_model(model_kind_from_string(kind), d, hp);
    write_text_file(out_path, model_to_json(model));
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& in_path,
             const std::string& report_path) {
    const TrainedModel model = model_from_json(read_text_file(model_path));
    Dataset d = load_dataset(in_path, "full");
    d.selector = model.selector;
    const EvalReport report = evaluate(model, d);
    const std::string text = report_to_json(report);
    if (report_path.empty()) std::cout << text << '\n';
    else write_text_file(report_path, text);
    return 0;
}

int cmd_cv(const std::string& kind, const std::string& selector, const std::string& in_path,
           std::size_t k, const Hyperparams& hp, const std::string& report_path) {
    const Dataset d = load_dataset(in_path, selector);
    const EvalReport report = cross_validate(model_kind_from_string(kind), d, hp, k, hp.seed);
    const std::string text = report_to_json(report);
    if (report_path.empty()) std::cout << text << '\n';
    else write_text_file(report_path, text);
    return 0;
}

int cmd_pca(const std::string& in_path, std::size_t k, const std::string& selector,
            const std::string& report_path) {
    const Dataset d = load_dataset(in_path, selector);
    const PcaResult res = pca(d, k);
    nlohmann::json j{{"components", res.components},
                     {"explained_variance_ratio", res.explained_variance_ratio},
                     {"means", res.means}};
    const std::string text = j.dump(2);
    if (report_path.empty()) std::cout << text << '\n';
    else write_text_file(report_path, text);
    return 0;
}

int cmd_rfe(const std::string& in_path, std::size_t folds, const Hyperparams& hp,
            const std::string& report_path) {
    const Dataset d = load_dataset(in_path, "full");
    const RfeResult res = rfe(d, hp, folds, hp.seed);
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : res.steps) {
        steps.push_back({{"features", s.features}, {"cv_accuracy", s.cv_accuracy}});
    }
    nlohmann::json j{{"steps", steps},
                     {"best_index", res.best_index},
                     {"best_features", res.steps[res.best_index].features},
                     {"best_cv_accuracy", res.steps[res.best_index].cv_accuracy}};
    const std::string text = j.dump(2);
    if (report_path.empty()) std::cout << text << '\n';
    else write_text_file(report_path, text);
    return 0;
}

int cmd_ablation(const std::string& in_path, std::size_t folds, const Hyperparams& hp,
                 const std::string& report_path, const std::string& csv_path) {
    const Dataset d = load_dataset(in_path, "full");
    const auto table = ablation_study(d, hp, hp.seed, folds);
    nlohmann::json rows = nlohmann::json::array();
    std::string csv_text = "regime,classifier,accuracy\n";
    for (const auto& cell : table) {
        rows.push_back({{"regime", cell.regime},
                        {"classifier", to_string(cell.kind)},
                        {"accuracy", cell.accuracy}});
        csv_text += csv::join_row({cell.regime, to_string(cell.kind),
                                   csv::format_double(cell.accuracy)});
        csv_text += '\n';
    }
    const std::string text = nlohmann::json{{"cells", rows}}.dump(2);
    if (report_path.empty()) std::cout << text << '\n';
    else write_text_file(report_path, text);
    if (!csv_path.empty()) write_text_file(csv_path, csv_text);
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_path,
              const std::string& truth_path) {
    const SynthConfig config = synth_config_from_json(read_text_file(config_path));
    const SynthCorpus corpus = generate(config);
    std::string out;
    for (const auto& c : corpus.conversations) out += to_canonical_jsonl(c);
    write_text_file(out_path, out);
    if (!truth_path.empty()) {
        std::vector<std::string> top(corpus.ground_truth_top.begin(),
                                     corpus.ground_truth_top.end());
        std::sort(top.begin(), top.end());
        write_text_file(truth_path, nlohmann::json{{"ground_truth_top", top}}.dump(2));
    }
    std::cerr << "generated " << corpus.conversations.size() << " conversation(s)\n";
    return 0;
}

int cmd_run(const std::string& config_path, bool quiet, bool json_logs) {
    RunConfig config;
    try {
        config = run_config_from_json(read_text_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    StageLog log;
    if (!quiet) {
        log = [json_logs](const std::string& stage, const std::string& msg) {
            if (json_logs) {
                std::cerr << nlohmann::json{{"stage", stage}, {"msg", msg}}.dump() << '\n';
            } else {
                std::cerr << "[" << stage << "] " << msg << '\n';
            }
        };
    }
    try {
        const RunResult result = run_detect(config, log);
        if (!quiet) {
            std::cerr << "holdout accuracy " << result.report.accuracy << ", recall "
                      << (result.report.recall ? std::to_string(*result.report.recall) : "n/a")
                      << ", flagged " << result.flagged_users << " user-rows\n";
        }
        return 0;
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const StageFailure& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
}

void add_hyperparam_flags(CLI::App* cmd, Hyperparams& hp) {
    cmd->add_option("--trees", hp.forest_trees, "forest size");
    cmd->add_option("--mtry", hp.forest_mtry, "features per split (0 = sqrt)");
    cmd->add_option("--min-leaf", hp.tree_min_leaf, "minimum leaf size");
    cmd->add_option("--alpha", hp.tree_alpha, "tree split significance level");
    cmd->add_option("--lambda", hp.svm_lambda, "svm regularization");
    cmd->add_option("--epochs", hp.svm_epochs, "svm training passes");
    cmd->add_option("--var-floor", hp.nb_var_floor, "naive bayes variance floor");
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"conversation argumentation-graph pipeline"};
    app.require_subcommand(1);

    std::string in_path, out_path, graphs_path, centrality_path, posts_path, features_path;
    std::string model_path, report_path, csv_path, config_path, truth_path;
    std::string kind = "rf", selector = "full";
    double fraction = 0.05;
    std::size_t size = 7000, k = 10, folds = 5, pca_k = 2;
    Hyperparams hp;
    bool quiet = false, json_logs = false;

    auto* ingest = app.add_subcommand("ingest", "normalize a JSONL conversation dump");
    ingest->add_option("--in", in_path, "input JSONL ('-' for stdin)")->required();
    ingest->add_option("--out", out_path, "normalized JSONL")->required();

    auto* graph = app.add_subcommand("graph", "build argumentation graphs");
    graph->add_option("--in", in_path, "canonical JSONL")->required();
    graph->add_option("--out", out_path, "graph JSONL")->required();

    auto* centrality = app.add_subcommand("centrality", "compute node centralities");
    centrality->add_option("--in", in_path, "graph JSONL")->required();
    centrality->add_option("--out", out_path, "centrality CSV")->required();

    auto* features = app.add_subcommand("features", "aggregate per-user features");
    features->add_option("--graphs", graphs_path, "graph JSONL")->required();
    features->add_option("--centrality", centrality_path, "centrality CSV")->required();
    features->add_option("--out", out_path, "feature CSV")->required();

    auto* label = app.add_subcommand("label", "flag top users by cumulative approval");
    label->add_option("--posts", posts_path, "posts JSONL")->required();
    label->add_option("--features", features_path, "feature CSV")->required();
    label->add_option("--fraction", fraction, "top-user fraction");
    label->add_option("--out", out_path, "labeled CSV")->required();

    auto* balance = app.add_subcommand("balance", "draw a balanced sample");
    balance->add_option("--in", in_path, "labeled CSV")->required();
    balance->add_option("--size", size, "target size")->required();
    balance->add_option("--seed", hp.seed, "sampling seed");
    balance->add_option("--out", out_path, "balanced CSV")->required();

    auto* train = app.add_subcommand("train", "train a classifier");
    train->add_option("--kind", kind, "nb|cit|rf|svm")->required();
    train->add_option("--features", selector, "minimal|reduced|full");
    train->add_option("--in", in_path, "labeled CSV")->required();
    train->add_option("--seed", hp.seed, "training seed");
    train->add_option("--out", out_path, "model JSON")->required();
    add_hyperparam_flags(train, hp);

    auto* eval = app.add_subcommand("eval", "evaluate a model on labeled data");
    eval->add_option("--model", model_path, "model JSON")->required();
    eval->add_option("--in", in_path, "labeled CSV")->required();
    eval->add_option("--report", report_path, "report JSON (stdout when omitted)");

    auto* cv = app.add_subcommand("cv", "stratified cross-validation");
    cv->add_option("--kind", kind, "nb|cit|rf|svm")->required();
    cv->add_option("--features", selector, "minimal|reduced|full");
    cv->add_option("--in", in_path, "labeled CSV")->required();
    cv->add_option("--k", k, "fold count");
    cv->add_option("--seed", hp.seed, "fold/training seed");
    cv->add_option("--report", report_path, "report JSON (stdout when omitted)");
    add_hyperparam_flags(cv, hp);

    auto* analyze = app.add_subcommand("analyze", "exploratory analyses");
    analyze->require_subcommand(1);
    auto* pca_cmd = analyze->add_subcommand("pca", "principal components");
    pca_cmd->add_option("--in", in_path, "labeled CSV")->required();
    pca_cmd->add_option("--k", pca_k, "component count");
    pca_cmd->add_option("--features", selector, "minimal|reduced|full");
    pca_cmd->add_option("--report", report_path, "report JSON (stdout when omitted)");
    auto* rfe_cmd = analyze->add_subcommand("rfe", "recursive feature elimination");
    rfe_cmd->add_option("--in", in_path, "labeled CSV")->required();
    rfe_cmd->add_option("--folds", folds, "cv folds per subset");
    rfe_cmd->add_option("--seed", hp.seed, "seed");
    rfe_cmd->add_option("--report", report_path, "report JSON (stdout when omitted)");
    add_hyperparam_flags(rfe_cmd, hp);
    auto* abl_cmd = analyze->add_subcommand("ablation", "feature-regime ablation");
    abl_cmd->add_option("--in", in_path, "labeled CSV")->required();
    abl_cmd->add_option("--folds", folds, "cv folds");
    abl_cmd->add_option("--seed", hp.seed, "seed");
    abl_cmd->add_option("--report", report_path, "report JSON (stdout when omitted)");
    abl_cmd->add_option("--csv", csv_path, "also write the table as CSV");
    add_hyperparam_flags(abl_cmd, hp);

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--config", config_path, "generator config JSON")->required();
    synth->add_option("--out", out_path, "corpus JSONL")->required();
    synth->add_option("--truth", truth_path, "ground-truth JSON");

    auto* run = app.add_subcommand("run", "end-to-end detection run");
    run->add_option("--config", config_path, "run config JSON")->required();
    run->add_flag("--quiet", quiet, "suppress progress output");
    run->add_flag("--json-logs", json_logs, "emit progress as JSON lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ingest) return cmd_ingest(in_path, out_path);
        if (*graph) return cmd_graph(in_path, out_path);
        if (*centrality) return cmd_centrality(in_path, out_path);
        if (*features) return cmd_features(graphs_path, centrality_path, out_path);
        if (*label) return cmd_label(posts_path, features_path, fraction, out_path);
        if (*balance) return cmd_balance(in_path, size, hp.seed, out_path);
        if (*train) return cmd_train(kind, selector, in_path, hp, out_path);
        if (*eval) return cmd_eval(model_path, in_path, report_path);
        if (*cv) return cmd_cv(kind, selector, in_path, k, hp, report_path);
        if (*pca_cmd) return cmd_pca(in_path, pca_k, selector, report_path);
        if (*rfe_cmd) return cmd_rfe(in_path, folds, hp, report_path);
        if (*abl_cmd) return cmd_ablation(in_path, folds, hp, report_path, csv_path);
        if (*synth) return cmd_synth(config_path, out_path, truth_path);
        if (*run) return cmd_run(config_path, quiet, json_logs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace convoarg::cli
