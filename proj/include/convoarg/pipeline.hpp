#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "convoarg/analysis.hpp"
#include "convoarg/learners.hpp"

namespace convoarg {

struct RunConfig {
    std::string input_path;
    double fraction = 0.05;
    std::string selector = "minimal";
    std::string kind = "rf";
    Hyperparams hyperparams;
    std::uint64_t seed = 0;
    std::string out_dir;
    double holdout_fraction = 0.3;
    std::size_t balance_size = 0;  // 0 sizes the balanced set from the data
};

RunConfig run_config_from_json(const std::string& text);

/// Optional per-stage progress sink: (stage, message).
using StageLog = std::function<void(const std::string&, const std::string&)>;

struct RunResult {
    EvalReport report;
    std::filesystem::path manifest_path;
    std::string manifest_hash;
    std::size_t flagged_users = 0;
};

/// Executes ingest -> graph -> centrality -> features -> label -> split ->
/// train -> eval, materializing every intermediate artifact under out_dir
/// and writing a content-addressed manifest last. Stage errors surface as
/// StageFailure; validation problems as InvalidConfig.
RunResult run_detect(const RunConfig& config, const StageLog& log = {});

/// FNV-1a 64 over a byte string / file, as a fixed-width hex string.
std::string fnv1a64_hex(const std::string& bytes);
std::string fnv1a64_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace convoarg
