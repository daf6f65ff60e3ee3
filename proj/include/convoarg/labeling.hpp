#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "convoarg/features.hpp"

namespace convoarg {

struct LabeledExample {
    std::string conversation_id;
    std::string user_id;
    UserFeatureVector features;
    bool is_top = false;
};

struct Dataset {
    std::vector<LabeledExample> examples;
    FeatureSetSelector selector;
    std::string provenance;  // evaluation | validation | synthetic
};

/// Exact integer sum of each author's post scores across the supplied posts.
std::unordered_map<std::string, std::int64_t> cumulative_approval(const std::vector<Post>& posts);

/// The floor(fraction*N) highest-approval users; ties broken by user id.
/// Throws EmptyCorpus when no users, InvalidConfig unless 0 < fraction < 1.
std::unordered_set<std::string> flag_top_users(
    const std::unordered_map<std::string, std::int64_t>& approvals, double fraction);

/// Seeded uniform sample without replacement: target_size/2 per class,
/// shuffled. Throws InsufficientClass when a class is too small.
Dataset balance_dataset(const std::vector<LabeledExample>& examples, std::size_t target_size,
                        std::uint64_t seed);

// --- feature/label CSV surface (conversation_id, user_id, 19 features[, is_top]) ---

void write_feature_csv(std::ostream& out, const std::vector<LabeledExample>& rows,
                       bool with_label);
std::vector<LabeledExample> read_feature_csv(std::istream& in, bool expect_label);

}  // namespace convoarg
