#include "convoarg/features.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "convoarg/errors.hpp"

namespace convoarg {

std::array<double, 19> UserFeatureVector::to_array() const {
    return {static_cast<double>(pc),
            cc,
            static_cast<double>(att_in),
            static_cast<double>(att_out),
            static_cast<double>(def_in),
            static_cast<double>(def_out),
            avg_att_out,
            avg_att_in,
            avg_def_out,
            avg_def_in,
            agr,
            dis,
            static_cast<double>(en),
            nen,
            as,
            nas,
            cbc,
            cec,
            cclc};
}

UserFeatureVector UserFeatureVector::from_array(std::string user_id,
                                                const std::array<double, 19>& a) {
    UserFeatureVector v;
    v.user_id = std::move(user_id);
    v.pc = static_cast<std::int64_t>(a[0]);
    v.cc = a[1];
    v.att_in = static_cast<std::int64_t>(a[2]);
    v.att_out = static_cast<std::int64_t>(a[3]);
    v.def_in = static_cast<std::int64_t>(a[4]);
    v.def_out = static_cast<std::int64_t>(a[5]);
    v.avg_att_out = a[6];
    v.avg_att_in = a[7];
    v.avg_def_out = a[8];
    v.avg_def_in = a[9];
    v.agr = a[10];
    v.dis = a[11];
    v.en = static_cast<std::int64_t>(a[12]);
    v.nen = a[13];
    v.as = a[14];
    v.nas = a[15];
    v.cbc = a[16];
    v.cec = a[17];
    v.cclc = a[18];
    return v;
}

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "PC",         "CC",         "Att_IN",     "Att_OUT",    "Def_IN",
        "Def_OUT",    "AvgAtt_OUT", "AvgAtt_IN",  "AvgDef_OUT", "AvgDef_IN",
        "Agr",        "Dis",        "En",         "NEn",        "As",
        "NAs",        "CBC",        "CEC",        "CClC"};
    return names;
}

std::size_t feature_index(const std::string& name) {
    static const std::unordered_map<std::string, std::size_t> index = [] {
        std::unordered_map<std::string, std::size_t> m;
        const auto& names = feature_names();
        for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i);
        return m;
    }();
    auto it = index.find(name);
    if (it == index.end()) throw std::out_of_range("unknown feature '" + name + "'");
    return it->second;
}

FeatureSetSelector selector_by_name(const std::string& name) {
    if (name == "minimal") return {"minimal", {"AvgAtt_IN", "AvgDef_IN", "En", "CBC"}};
    if (name == "reduced") {
        return {"reduced", {"Def_IN", "CC", "AvgAtt_OUT", "AvgAtt_IN", "AvgDef_IN", "Dis", "En"}};
    }
    if (name == "full") return {"full", feature_names()};
    throw std::out_of_range("unknown feature set '" + name + "'");
}

std::vector<UserFeatureVector> aggregate_features(const ArgGraph& g,
                                                  const CentralityScores& cent) {
    std::vector<UserFeatureVector> users;
    std::unordered_map<std::string, std::size_t> user_index;

    auto user_of_post = [&](const std::string& post_id) -> UserFeatureVector& {
        const std::string& author = g.author_of.at(post_id);
        auto it = user_index.find(author);
        if (it == user_index.end()) {
            it = user_index.emplace(author, users.size()).first;
            users.push_back({});
            users.back().user_id = author;
        }
        return users[it->second];
    };

    for (const std::string& node : g.nodes) {
        UserFeatureVector& u = user_of_post(node);
        u.pc += 1;
        u.cbc += cent.betweenness_of(node);
        u.cec += cent.eigenvector_of(node);
        u.cclc += cent.closeness_of(node);
    }
    for (const auto& [src, tgt] : g.attack_edges) {
        user_of_post(src).att_out += 1;
        user_of_post(tgt).att_in += 1;
    }
    for (const auto& d : g.defence_edges) {
        user_of_post(d.source).def_out += 1;
        user_of_post(d.target).def_in += 1;
    }

    const double n_posts = static_cast<double>(g.nodes.size());
    std::int64_t total_en = 0;
    for (UserFeatureVector& u : users) {
        u.en = u.att_in + u.att_out + u.def_in + u.def_out;
        total_en += u.en;
    }
    double max_as = 0.0;
    for (UserFeatureVector& u : users) {
        const double pc = static_cast<double>(u.pc);
        u.cc = pc / n_posts;
        u.avg_att_out = static_cast<double>(u.att_out) / pc;
        u.avg_att_in = static_cast<double>(u.att_in) / pc;
        u.avg_def_out = static_cast<double>(u.def_out) / pc;
        u.avg_def_in = static_cast<double>(u.def_in) / pc;
        u.agr = static_cast<double>(u.att_out + 1) / static_cast<double>(u.def_out + 1);
        u.dis = static_cast<double>(u.att_in + 1) / static_cast<double>(u.def_in + 1);
        u.nen = total_en > 0 ? static_cast<double>(u.en) / static_cast<double>(total_en) : 0.0;
        u.as = static_cast<double>(u.en) * u.cc;
        if (u.as > max_as) max_as = u.as;
    }
    for (UserFeatureVector& u : users) {
        u.nas = max_as > 0.0 ? u.as / max_as : 0.0;
    }
    return users;
}

std::vector<UserFeatureVector> aggregate_features(const ArgGraph& g, const CentralityScores& cent,
                                                  const Conversation& c) {
    std::unordered_set<std::string> post_ids;
    post_ids.reserve(c.posts.size());
    for (const Post& p : c.posts) post_ids.insert(p.post_id);
    for (const std::string& node : g.nodes) {
        if (!post_ids.count(node)) {
            throw GraphMismatch("node '" + node + "' is not a post of conversation '" +
                                c.conversation_id + "'");
        }
    }
    return aggregate_features(g, cent);
}

std::vector<double> select_features(const UserFeatureVector& v, const FeatureSetSelector& s) {
    const auto values = v.to_array();
    std::vector<double> out;
    out.reserve(s.members.size());
    for (const std::string& name : s.members) out.push_back(values[feature_index(name)]);
    return out;
}

}  // namespace convoarg
