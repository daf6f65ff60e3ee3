#pragma once

#include <stdexcept>
#include <string>

namespace convoarg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ingest
struct MalformedLine final : Error {
    explicit MalformedLine(const std::string& msg) : Error("malformed line: " + msg) {}
};
struct DanglingParent final : Error {
    explicit DanglingParent(const std::string& msg) : Error("dangling parent: " + msg) {}
};
struct MixedConversation final : Error {
    explicit MixedConversation(const std::string& msg) : Error("mixed conversation: " + msg) {}
};

// argraph
struct InvalidConversation final : Error {
    explicit InvalidConversation(const std::string& msg) : Error("invalid conversation: " + msg) {}
};

// features
struct GraphMismatch final : Error {
    explicit GraphMismatch(const std::string& msg) : Error("graph mismatch: " + msg) {}
};

// labeling
struct EmptyCorpus final : Error {
    explicit EmptyCorpus(const std::string& msg) : Error("empty corpus: " + msg) {}
};
struct InsufficientClass final : Error {
    explicit InsufficientClass(const std::string& msg) : Error("insufficient class: " + msg) {}
};

// learners
struct SingleClass final : Error {
    explicit SingleClass(const std::string& msg) : Error("single class: " + msg) {}
};
struct ArityMismatch final : Error {
    explicit ArityMismatch(const std::string& msg) : Error("arity mismatch: " + msg) {}
};

// analysis
struct TooFewExamples final : Error {
    explicit TooFewExamples(const std::string& msg) : Error("too few examples: " + msg) {}
};
struct DegenerateData final : Error {
    explicit DegenerateData(const std::string& msg) : Error("degenerate data: " + msg) {}
};

// synth / pipeline
struct InvalidConfig final : Error {
    explicit InvalidConfig(const std::string& msg) : Error("invalid config: " + msg) {}
};
struct StageFailure final : Error {
    StageFailure(const std::string& stage, const std::string& msg)
        : Error("stage '" + stage + "' failed: " + msg), stage_name(stage) {}
    std::string stage_name;
};

}  // namespace convoarg
