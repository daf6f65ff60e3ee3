#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convoarg/ingest.hpp"

namespace convoarg {

/// A defence a->target certified by the witness post that a attacked.
struct DefenceEdge {
    std::string source;
    std::string target;
    std::string witness;
};

/// Argumentation graph of one conversation. Nodes are post ids in thread
/// order; every edge endpoint is a node. Attack edges never connect posts
/// by the same author, and every node has out-degree <= 1 per edge type.
struct ArgGraph {
    std::string conversation_id;
    std::vector<std::string> nodes;
    std::unordered_map<std::string, std::string> author_of;
    std::vector<std::pair<std::string, std::string>> attack_edges;
    std::vector<DefenceEdge> defence_edges;
};

/// The post p attacks, if any. Priority: reply target when the parent has a
/// different author; otherwise (for top-level posts) the latest prior post
/// by the first mentioned user; otherwise the latest prior post by a
/// different author. A self-reply is a continuation and yields no target.
std::optional<std::string> resolve_target(const Post& p, const Conversation& c);

/// All (a, c, b) triples with (a,b) and (b,c) in `attacks`.
std::vector<DefenceEdge> defence_closure(
    const std::vector<std::pair<std::string, std::string>>& attacks);

/// Throws InvalidConversation unless validate_thread(c) is empty.
ArgGraph build_graph(const Conversation& c);

std::string graph_to_json(const ArgGraph& g);
ArgGraph graph_from_json(const std::string& text);

}  // namespace convoarg
