#include "convoarg/ingest.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "convoarg/errors.hpp"
#include "json.hpp"

namespace convoarg {

namespace {

bool is_name_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
}

Post post_from_json(const nlohmann::json& j, std::size_t line_no) {
    const auto where = "line " + std::to_string(line_no + 1);
    for (const char* key : {"id", "conversation_id", "author", "parent_id", "body", "timestamp", "score"}) {
        if (!j.contains(key)) throw MalformedLine(where + ": missing key '" + key + "'");
    }
    Post p;
    try {
        p.post_id = j.at("id").get<std::string>();
        p.conversation_id = j.at("conversation_id").get<std::string>();
        p.author_id = j.at("author").get<std::string>();
        if (!j.at("parent_id").is_null()) p.parent_id = j.at("parent_id").get<std::string>();
        p.body = j.at("body").get<std::string>();
        p.timestamp = j.at("timestamp").get<std::int64_t>();
        p.score = j.at("score").get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedLine(where + ": " + e.what());
    }
    if (p.post_id.empty()) throw MalformedLine(where + ": empty post id");
    return p;
}

}  // namespace

Conversation parse_conversation(const std::vector<std::string>& raw_lines) {
    if (raw_lines.empty()) throw MalformedLine("no input lines");

    Conversation c;
    c.posts.reserve(raw_lines.size());
    for (std::size_t i = 0; i < raw_lines.size(); ++i) {
        nlohmann::json j = nlohmann::json::parse(raw_lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw MalformedLine("line " + std::to_string(i + 1) + ": not a JSON object");
        }
        c.posts.push_back(post_from_json(j, i));
    }

    c.conversation_id = c.posts.front().conversation_id;
    for (const Post& p : c.posts) {
        if (p.conversation_id != c.conversation_id) {
            throw MixedConversation("post '" + p.post_id + "' belongs to '" + p.conversation_id +
                                    "', expected '" + c.conversation_id + "'");
        }
    }

    // (timestamp asc, input order asc); stable sort keeps the tie-break
    std::stable_sort(c.posts.begin(), c.posts.end(),
                     [](const Post& a, const Post& b) { return a.timestamp < b.timestamp; });

    std::unordered_map<std::string, int> ordinal_of;
    ordinal_of.reserve(c.posts.size());
    for (std::size_t i = 0; i < c.posts.size(); ++i) {
        c.posts[i].ordinal = static_cast<int>(i);
        if (!ordinal_of.emplace(c.posts[i].post_id, static_cast<int>(i)).second) {
            throw MalformedLine("duplicate post id '" + c.posts[i].post_id + "'");
        }
    }
    for (const Post& p : c.posts) {
        if (!p.parent_id) continue;
        auto it = ordinal_of.find(*p.parent_id);
        if (it == ordinal_of.end()) {
            throw DanglingParent("post '" + p.post_id + "' references unknown parent '" +
                                 *p.parent_id + "'");
        }
        if (it->second >= p.ordinal) {
            throw DanglingParent("post '" + p.post_id + "' references parent '" + *p.parent_id +
                                 "' that is not earlier in the thread");
        }
    }
    return c;
}

std::vector<Mention> extract_mentions(const std::string& body) {
    std::vector<Mention> mentions;
    const std::size_t n = body.size();
    std::size_t i = 0;
    while (i < n) {
        if (i > 0 && is_name_char(body[i - 1])) {
            ++i;
            continue;
        }
        std::size_t name_start = 0;
        if (body.compare(i, 3, "/u/") == 0) {
            name_start = i + 3;
        } else if (body.compare(i, 2, "u/") == 0) {
            name_start = i + 2;
        } else if (body[i] == '@') {
            name_start = i + 1;
        } else {
            ++i;
            continue;
        }
        std::size_t end = name_start;
        while (end < n && is_name_char(body[end])) ++end;
        if (end == name_start) {  // no NAME after the marker
            ++i;
            continue;
        }
        mentions.push_back({body.substr(name_start, end - name_start), i});
        i = end;
    }
    return mentions;
}

std::vector<Violation> validate_thread(const Conversation& c) {
    std::vector<Violation> out;
    if (c.posts.empty()) {
        out.push_back({"", "empty"});
        return out;
    }
    std::unordered_map<std::string, int> ordinal_of;
    for (const Post& p : c.posts) {
        if (!ordinal_of.emplace(p.post_id, p.ordinal).second) {
            out.push_back({p.post_id, "duplicate_post_id"});
        }
        if (p.conversation_id != c.conversation_id) {
            out.push_back({p.post_id, "conversation_id_mismatch"});
        }
    }
    for (std::size_t i = 0; i < c.posts.size(); ++i) {
        const Post& p = c.posts[i];
        if (p.ordinal != static_cast<int>(i)) out.push_back({p.post_id, "bad_ordinal"});
        if (i > 0 && p.timestamp < c.posts[i - 1].timestamp) {
            out.push_back({p.post_id, "timestamp_order"});
        }
        if (!p.parent_id) continue;
        auto it = ordinal_of.find(*p.parent_id);
        if (it == ordinal_of.end()) {
            out.push_back({p.post_id, "missing_parent"});
        } else if (it->second >= p.ordinal) {
            out.push_back({p.post_id, "parent_not_earlier"});
        }
    }
    if (c.posts.front().parent_id) out.push_back({c.posts.front().post_id, "first_post_has_parent"});
    return out;
}

std::vector<Conversation> parse_corpus(const std::vector<std::string>& raw_lines) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < raw_lines.size(); ++i) {
        if (raw_lines[i].empty()) continue;
        nlohmann::json j = nlohmann::json::parse(raw_lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("conversation_id") ||
            !j.at("conversation_id").is_string()) {
            throw MalformedLine("line " + std::to_string(i + 1) + ": not a JSON object with a conversation_id");
        }
        const auto cid = j.at("conversation_id").get<std::string>();
        auto it = groups.find(cid);
        if (it == groups.end()) {
            order.push_back(cid);
            it = groups.emplace(cid, std::vector<std::string>{}).first;
        }
        it->second.push_back(raw_lines[i]);
    }
    std::vector<Conversation> out;
    out.reserve(order.size());
    for (const auto& cid : order) out.push_back(parse_conversation(groups.at(cid)));
    return out;
}

std::vector<std::string> conversation_to_lines(const Conversation& c) {
    std::vector<std::string> lines;
    lines.reserve(c.posts.size());
    for (const Post& p : c.posts) {
        nlohmann::json j{
            {"id", p.post_id},
            {"conversation_id", p.conversation_id},
            {"author", p.author_id},
            {"parent_id", p.parent_id ? nlohmann::json(*p.parent_id) : nlohmann::json(nullptr)},
            {"body", p.body},
            {"timestamp", p.timestamp},
            {"score", p.score},
            {"ordinal", p.ordinal},
        };
        lines.push_back(j.dump());
    }
    return lines;
}

std::string to_canonical_jsonl(const Conversation& c) {
    std::string out;
    for (const auto& line : conversation_to_lines(c)) {
        out += line;
        out += '\n';
    }
    return out;
}

}  // namespace convoarg
