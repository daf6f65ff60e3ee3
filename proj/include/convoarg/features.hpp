#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "convoarg/argraph.hpp"
#include "convoarg/metrics.hpp"

namespace convoarg {

/// Per-user structural features for one conversation.
struct UserFeatureVector {
    std::string user_id;
    std::int64_t pc = 0;        // posts authored
    double cc = 0.0;            // pc / posts in conversation
    std::int64_t att_in = 0;    // attack edges entering the user's posts
    std::int64_t att_out = 0;   // attack edges leaving the user's posts
    std::int64_t def_in = 0;
    std::int64_t def_out = 0;
    double avg_att_out = 0.0;
    double avg_att_in = 0.0;
    double avg_def_out = 0.0;
    double avg_def_in = 0.0;
    double agr = 0.0;  // (att_out+1)/(def_out+1), Laplace-smoothed
    double dis = 0.0;  // (att_in+1)/(def_in+1), Laplace-smoothed
    std::int64_t en = 0;
    double nen = 0.0;  // en / total en of all users, 0 when total is 0
    double as = 0.0;   // en * cc
    double nas = 0.0;  // as / max as in conversation, 0 when max is 0
    double cbc = 0.0;  // summed node centralities over the user's posts
    double cec = 0.0;
    double cclc = 0.0;

    /// Values in canonical feature order.
    std::array<double, 19> to_array() const;

    static UserFeatureVector from_array(std::string user_id, const std::array<double, 19>& a);
};

constexpr std::size_t kFeatureCount = 19;

/// Canonical feature names, in the order feature CSVs use.
const std::vector<std::string>& feature_names();

/// Index of a canonical feature name; throws std::out_of_range otherwise.
std::size_t feature_index(const std::string& name);

struct FeatureSetSelector {
    std::string name;
    std::vector<std::string> members;
};

/// The named selectors: minimal (4), reduced (7), full (19).
FeatureSetSelector selector_by_name(const std::string& name);

/// Feature vectors per user, in order of each user's first post. The
/// overload taking the conversation additionally checks that every graph
/// node is one of its posts (GraphMismatch otherwise).
std::vector<UserFeatureVector> aggregate_features(const ArgGraph& g, const CentralityScores& cent);
std::vector<UserFeatureVector> aggregate_features(const ArgGraph& g, const CentralityScores& cent,
                                                  const Conversation& c);

/// Project the vector onto the selector's members, in declared order.
std::vector<double> select_features(const UserFeatureVector& v, const FeatureSetSelector& s);

}  // namespace convoarg
