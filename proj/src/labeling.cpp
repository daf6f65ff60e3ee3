#include "convoarg/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "convoarg/csv.hpp"
#include "convoarg/errors.hpp"
#include "convoarg/rng.hpp"

namespace convoarg {

std::unordered_map<std::string, std::int64_t> cumulative_approval(const std::vector<Post>& posts) {
    std::unordered_map<std::string, std::int64_t> approvals;
    for (const Post& p : posts) approvals[p.author_id] += p.score;
    return approvals;
}

std::unordered_set<std::string> flag_top_users(
    const std::unordered_map<std::string, std::int64_t>& approvals, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw InvalidConfig("top-user fraction must be in (0,1)");
    }
    if (approvals.empty()) throw EmptyCorpus("no users to rank");

    std::vector<std::pair<std::string, std::int64_t>> ranked(approvals.begin(), approvals.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    const auto cut = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(ranked.size())));
    std::unordered_set<std::string> flagged;
    for (std::size_t i = 0; i < cut; ++i) flagged.insert(ranked[i].first);
    return flagged;
}

Dataset balance_dataset(const std::vector<LabeledExample>& examples, std::size_t target_size,
                        std::uint64_t seed) {
    const std::size_t half = target_size / 2;
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        (examples[i].is_top ? pos : neg).push_back(i);
    }
    if (pos.size() < half) {
        throw InsufficientClass("need " + std::to_string(half) + " top examples, have " +
                                std::to_string(pos.size()));
    }
    if (neg.size() < half) {
        throw InsufficientClass("need " + std::to_string(half) + " non-top examples, have " +
                                std::to_string(neg.size()));
    }
    Rng rng = make_rng(seed, /*stream=*/0xba1a);
    shuffle(pos, rng);
    shuffle(neg, rng);
    std::vector<std::size_t> chosen(pos.begin(), pos.begin() + half);
    chosen.insert(chosen.end(), neg.begin(), neg.begin() + half);
    shuffle(chosen, rng);

    Dataset d;
    d.selector = selector_by_name("full");
    d.provenance = "evaluation";
    d.examples.reserve(chosen.size());
    for (std::size_t i : chosen) d.examples.push_back(examples[i]);
    return d;
}

void write_feature_csv(std::ostream& out, const std::vector<LabeledExample>& rows,
                       bool with_label) {
    std::vector<std::string> header = {"conversation_id", "user_id"};
    for (const auto& name : feature_names()) header.push_back(name);
    if (with_label) header.push_back("is_top");
    out << csv::join_row(header) << '\n';

    std::vector<std::string> fields;
    for (const LabeledExample& row : rows) {
        fields.clear();
        fields.push_back(row.conversation_id);
        fields.push_back(row.user_id);
        for (double v : row.features.to_array()) fields.push_back(csv::format_double(v));
        if (with_label) fields.push_back(row.is_top ? "1" : "0");
        out << csv::join_row(fields) << '\n';
    }
}

std::vector<LabeledExample> read_feature_csv(std::istream& in, bool expect_label) {
    std::string line;
    if (!std::getline(in, line)) throw Error("feature csv: empty file");
    const auto header = csv::split_row(line);
    const std::size_t expected_cols = 2 + kFeatureCount + (expect_label ? 1 : 0);
    if (header.size() != expected_cols) {
        throw Error("feature csv: expected " + std::to_string(expected_cols) + " columns, got " +
                    std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (header[2 + i] != feature_names()[i]) {
            throw Error("feature csv: column " + std::to_string(2 + i) + " is '" + header[2 + i] +
                        "', expected '" + feature_names()[i] + "'");
        }
    }

    std::vector<LabeledExample> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_row(line);
        if (fields.size() != expected_cols) {
            throw Error("feature csv line " + std::to_string(line_no) + ": wrong column count");
        }
        LabeledExample row;
        row.conversation_id = fields[0];
        row.user_id = fields[1];
        std::array<double, 19> values{};
        for (std::size_t i = 0; i < kFeatureCount; ++i) values[i] = csv::parse_double(fields[2 + i]);
        row.features = UserFeatureVector::from_array(row.user_id, values);
        if (expect_label) row.is_top = fields.back() == "1";
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace convoarg
