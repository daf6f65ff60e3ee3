#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "convoarg/ingest.hpp"

namespace convoarg {

/// Generator knobs. Appreciated users draw replies (and therefore defences)
/// and positive scores; provocateurs reply compulsively; lurkers rarely show
/// up. Per-conversation post counts stay flat across archetypes so that the
/// planted signal lives in the graph structure, not in post counts.
struct SynthConfig {
    int n_conversations = 50;
    int posts_min = 150;
    int posts_max = 250;
    int n_users = 2000;
    double top_fraction = 0.05;

    double lurker_fraction = 0.40;
    double provocateur_fraction = 0.10;

    double appreciated_participation = 2.5;
    double provocateur_participation = 2.0;
    double normal_participation = 1.0;
    double lurker_participation = 0.2;

    double appreciated_attraction = 6.0;

    double reply_vs_toplevel = 0.75;
    double provocateur_reply_prob = 0.95;
    double mention_prob = 0.10;

    double appreciated_score_mean = 8.0;
    double other_score_mean = 1.0;
    double score_noise_stddev = 3.0;
    std::int64_t score_floor = -25;

    std::uint64_t seed = 0;
};

struct SynthCorpus {
    std::vector<Conversation> conversations;
    std::unordered_set<std::string> ground_truth_top;
};

/// Throws InvalidConfig on out-of-range parameters.
SynthCorpus generate(const SynthConfig& config);

SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& config);

}  // namespace convoarg
