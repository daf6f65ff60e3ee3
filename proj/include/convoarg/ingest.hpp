#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace convoarg {

struct Post {
    std::string post_id;
    std::string conversation_id;
    std::string author_id;
    std::optional<std::string> parent_id;  // absent for top-level posts
    std::string body;
    std::int64_t timestamp = 0;  // epoch seconds
    std::int64_t score = 0;      // upvotes minus downvotes
    int ordinal = -1;            // position after canonical sorting
};

/// A normalized thread: posts sorted by (timestamp asc, input order asc),
/// ordinals 0..N-1, parents resolved. Immutable once built; safe to share.
struct Conversation {
    std::string conversation_id;
    std::vector<Post> posts;
};

struct Mention {
    std::string username;
    std::size_t char_offset = 0;  // position of the pattern start in the body
};

struct Violation {
    std::string post_id;  // empty for conversation-level rules
    std::string rule;
};

/// Parse one conversation from JSONL lines (keys: id, conversation_id,
/// author, parent_id, body, timestamp, score). Throws MalformedLine,
/// DanglingParent, MixedConversation.
Conversation parse_conversation(const std::vector<std::string>& raw_lines);

/// Matches of `u/NAME`, `/u/NAME`, `@NAME` (NAME = maximal [A-Za-z0-9_-]+),
/// in order of occurrence. A match must start the string or follow a
/// character outside the NAME alphabet.
std::vector<Mention> extract_mentions(const std::string& body);

/// Empty report iff all Conversation and Post invariants hold.
std::vector<Violation> validate_thread(const Conversation& c);

/// Group a multi-conversation JSONL stream by conversation_id (first-seen
/// order) and parse each group.
std::vector<Conversation> parse_corpus(const std::vector<std::string>& raw_lines);

std::string to_canonical_jsonl(const Conversation& c);
std::vector<std::string> conversation_to_lines(const Conversation& c);

}  // namespace convoarg
