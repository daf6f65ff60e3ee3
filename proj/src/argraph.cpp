#include "convoarg/argraph.hpp"

#include "convoarg/errors.hpp"
#include "json.hpp"

namespace convoarg {

std::optional<std::string> resolve_target(const Post& p, const Conversation& c) {
    if (p.parent_id) {
        const Post* parent = nullptr;
        for (const Post& q : c.posts) {
            if (q.post_id == *p.parent_id) {
                parent = &q;
                break;
            }
        }
        if (!parent) return std::nullopt;
        // self-replies are continuations, not attacks, and do not fall through
        if (parent->author_id == p.author_id) return std::nullopt;
        return parent->post_id;
    }

    const auto mentions = extract_mentions(p.body);
    if (!mentions.empty()) {
        const std::string& user = mentions.front().username;
        if (user != p.author_id) {
            for (int i = p.ordinal - 1; i >= 0; --i) {
                if (c.posts[i].author_id == user) return c.posts[i].post_id;
            }
        }
        // unresolvable or self mention: fall through to the previous-post rule
    }
    for (int i = p.ordinal - 1; i >= 0; --i) {
        if (c.posts[i].author_id != p.author_id) return c.posts[i].post_id;
    }
    return std::nullopt;
}

std::vector<DefenceEdge> defence_closure(
    const std::vector<std::pair<std::string, std::string>>& attacks) {
    std::unordered_map<std::string, std::vector<std::string>> targets_of;
    for (const auto& [src, tgt] : attacks) targets_of[src].push_back(tgt);
    std::vector<DefenceEdge> out;
    for (const auto& [a, b] : attacks) {
        auto it = targets_of.find(b);
        if (it == targets_of.end()) continue;
        for (const std::string& cpost : it->second) out.push_back({a, cpost, b});
    }
    return out;
}

ArgGraph build_graph(const Conversation& c) {
    const auto violations = validate_thread(c);
    if (!violations.empty()) {
        throw InvalidConversation("'" + c.conversation_id + "': " + violations.front().rule +
                                  " (post '" + violations.front().post_id + "')");
    }
    ArgGraph g;
    g.conversation_id = c.conversation_id;
    g.nodes.reserve(c.posts.size());
    for (const Post& p : c.posts) {
        g.nodes.push_back(p.post_id);
        g.author_of.emplace(p.post_id, p.author_id);
    }
    for (const Post& p : c.posts) {
        if (auto target = resolve_target(p, c)) {
            g.attack_edges.emplace_back(p.post_id, *target);
        }
    }
    g.defence_edges = defence_closure(g.attack_edges);
    return g;
}

std::string graph_to_json(const ArgGraph& g) {
    nlohmann::json authors = nlohmann::json::object();
    for (const auto& id : g.nodes) authors[id] = g.author_of.at(id);
    nlohmann::json attacks = nlohmann::json::array();
    for (const auto& [s, t] : g.attack_edges) attacks.push_back({s, t});
    nlohmann::json defences = nlohmann::json::array();
    for (const auto& d : g.defence_edges) defences.push_back({d.source, d.target, d.witness});
    nlohmann::json j{
        {"conversation_id", g.conversation_id},
        {"nodes", g.nodes},
        {"authors", authors},
        {"attacks", attacks},
        {"defences", defences},
    };
    return j.dump();
}

ArgGraph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ArgGraph g;
    g.conversation_id = j.at("conversation_id").get<std::string>();
    g.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& [id, author] : j.at("authors").items()) {
        g.author_of.emplace(id, author.get<std::string>());
    }
    for (const auto& e : j.at("attacks")) {
        g.attack_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    for (const auto& e : j.at("defences")) {
        g.defence_edges.push_back(
            {e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<std::string>()});
    }
    return g;
}

}  // namespace convoarg
