#include "convoarg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "convoarg/errors.hpp"
#include "convoarg/rng.hpp"
#include "json.hpp"

namespace convoarg {

namespace {

enum class Archetype { appreciated, provocateur, lurker, normal };

void validate(const SynthConfig& c) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (c.n_conversations < 1) throw InvalidConfig("n_conversations must be >= 1");
    if (c.posts_min < 1 || c.posts_min > c.posts_max) {
        throw InvalidConfig("posts_per_conversation range is invalid");
    }
    if (c.n_users < 2) throw InvalidConfig("n_users must be >= 2");
    if (!(c.top_fraction > 0.0 && c.top_fraction < 1.0)) {
        throw InvalidConfig("top_fraction must be in (0,1)");
    }
    if (!prob(c.lurker_fraction) || !prob(c.provocateur_fraction) ||
        c.top_fraction + c.lurker_fraction + c.provocateur_fraction > 1.0) {
        throw InvalidConfig("archetype fractions must be probabilities summing to <= 1");
    }
    if (!prob(c.reply_vs_toplevel) || !prob(c.provocateur_reply_prob) || !prob(c.mention_prob)) {
        throw InvalidConfig("behaviour probabilities must be in [0,1]");
    }
    for (double w : {c.appreciated_participation, c.provocateur_participation,
                     c.normal_participation, c.lurker_participation, c.appreciated_attraction}) {
        if (!(w > 0.0)) throw InvalidConfig("weights must be positive");
    }
    if (!(c.score_noise_stddev >= 0.0)) throw InvalidConfig("score_noise_stddev must be >= 0");
}

std::string user_name(int i, int width) {
    std::string digits = std::to_string(i);
    return "u" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
    validate(config);
    const int n_users = config.n_users;
    const int width = static_cast<int>(std::to_string(n_users - 1).size());

    // archetype assignment: a seeded permutation carved into slices
    std::vector<int> perm(n_users);
    for (int i = 0; i < n_users; ++i) perm[i] = i;
    Rng assign_rng = make_rng(config.seed, /*stream=*/0xa5c);
    shuffle(perm, assign_rng);

    const auto n_top = static_cast<std::size_t>(
        std::floor(config.top_fraction * static_cast<double>(n_users)));
    const auto n_lurk = static_cast<std::size_t>(
        std::floor(config.lurker_fraction * static_cast<double>(n_users)));
    const auto n_prov = static_cast<std::size_t>(
        std::floor(config.provocateur_fraction * static_cast<double>(n_users)));

    std::vector<Archetype> archetype(n_users, Archetype::normal);
    SynthCorpus corpus;
    std::size_t at = 0;
    for (std::size_t i = 0; i < n_top; ++i, ++at) {
        archetype[perm[at]] = Archetype::appreciated;
        corpus.ground_truth_top.insert(user_name(perm[at], width));
    }
    for (std::size_t i = 0; i < n_lurk; ++i, ++at) archetype[perm[at]] = Archetype::lurker;
    for (std::size_t i = 0; i < n_prov; ++i, ++at) archetype[perm[at]] = Archetype::provocateur;

    auto participation = [&](int u) {
        switch (archetype[u]) {
            case Archetype::appreciated: return config.appreciated_participation;
            case Archetype::provocateur: return config.provocateur_participation;
            case Archetype::lurker: return config.lurker_participation;
            case Archetype::normal: break;
        }
        return config.normal_participation;
    };
    std::vector<double> cumulative(n_users);
    double total_weight = 0.0;
    for (int u = 0; u < n_users; ++u) {
        total_weight += participation(u);
        cumulative[u] = total_weight;
    }

    for (int k = 0; k < config.n_conversations; ++k) {
        Rng rng = make_rng(config.seed, /*stream=*/0xc000 + static_cast<std::uint64_t>(k));
        const auto n_posts = static_cast<int>(uniform_int(
            rng, static_cast<std::uint64_t>(config.posts_min),
            static_cast<std::uint64_t>(config.posts_max)));

        const int pool_target = std::max(2, n_posts / 5);
        std::vector<int> pool;
        std::unordered_set<int> seen;
        while (static_cast<int>(pool.size()) < pool_target) {
            const double r = uniform_real(rng) * total_weight;
            const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
            const int u = static_cast<int>(it - cumulative.begin());
            if (seen.insert(u).second) pool.push_back(u);
        }

        Conversation conv;
        conv.conversation_id = "c" + std::to_string(k);
        conv.posts.reserve(static_cast<std::size_t>(n_posts));

        auto attraction = [&](int u) {
            return archetype[u] == Archetype::appreciated ? config.appreciated_attraction : 1.0;
        };

        for (int i = 0; i < n_posts; ++i) {
            const int author = pool[uniform_index(rng, pool.size())];
            Post p;
            p.post_id = conv.conversation_id + "_p" + std::to_string(i);
            p.conversation_id = conv.conversation_id;
            p.author_id = user_name(author, width);
            p.timestamp = static_cast<std::int64_t>(k) * 1000000 + static_cast<std::int64_t>(i) * 60;
            p.ordinal = i;
            p.body = "text " + std::to_string(i);

            const double reply_prob = archetype[author] == Archetype::provocateur
                                          ? config.provocateur_reply_prob
                                          : config.reply_vs_toplevel;
            if (i > 0 && uniform_real(rng) < reply_prob) {
                double total = 0.0;
                std::vector<double> weights(static_cast<std::size_t>(i));
                for (int j = 0; j < i; ++j) {
                    double w = attraction(std::stoi(conv.posts[j].author_id.substr(1)));
                    if (conv.posts[j].author_id == p.author_id) w *= 0.15;
                    total += w;
                    weights[static_cast<std::size_t>(j)] = total;
                }
                const double r = uniform_real(rng) * total;
                const auto it = std::lower_bound(weights.begin(), weights.end(), r);
                p.parent_id = conv.posts[static_cast<std::size_t>(it - weights.begin())].post_id;
            } else if (i > 0 && uniform_real(rng) < config.mention_prob) {
                double total = 0.0;
                std::vector<double> weights(static_cast<std::size_t>(i));
                for (int j = 0; j < i; ++j) {
                    total += attraction(std::stoi(conv.posts[j].author_id.substr(1)));
                    weights[static_cast<std::size_t>(j)] = total;
                }
                const double r = uniform_real(rng) * total;
                const auto it = std::lower_bound(weights.begin(), weights.end(), r);
                const auto& target = conv.posts[static_cast<std::size_t>(it - weights.begin())];
                p.body = "u/" + target.author_id + " " + p.body;
            }

            const double mean = archetype[author] == Archetype::appreciated
                                    ? config.appreciated_score_mean
                                    : config.other_score_mean;
            const double raw = normal(rng, mean, config.score_noise_stddev);
            p.score = std::max<std::int64_t>(config.score_floor,
                                             static_cast<std::int64_t>(std::llround(raw)));
            conv.posts.push_back(std::move(p));
        }
        corpus.conversations.push_back(std::move(conv));
    }
    return corpus;
}

SynthConfig synth_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SynthConfig c;
    c.n_conversations = j.value("n_conversations", c.n_conversations);
    c.posts_min = j.value("posts_min", c.posts_min);
    c.posts_max = j.value("posts_max", c.posts_max);
    c.n_users = j.value("n_users", c.n_users);
    c.top_fraction = j.value("top_fraction", c.top_fraction);
    c.lurker_fraction = j.value("lurker_fraction", c.lurker_fraction);
    c.provocateur_fraction = j.value("provocateur_fraction", c.provocateur_fraction);
    c.appreciated_participation = j.value("appreciated_participation", c.appreciated_participation);
    c.provocateur_participation = j.value("provocateur_participation", c.provocateur_participation);
    c.normal_participation = j.value("normal_participation", c.normal_participation);
    c.lurker_participation = j.value("lurker_participation", c.lurker_participation);
    c.appreciated_attraction = j.value("appreciated_attraction", c.appreciated_attraction);
    c.reply_vs_toplevel = j.value("reply_vs_toplevel", c.reply_vs_toplevel);
    c.provocateur_reply_prob = j.value("provocateur_reply_prob", c.provocateur_reply_prob);
    c.mention_prob = j.value("mention_prob", c.mention_prob);
    c.appreciated_score_mean = j.value("appreciated_score_mean", c.appreciated_score_mean);
    c.other_score_mean = j.value("other_score_mean", c.other_score_mean);
    c.score_noise_stddev = j.value("score_noise_stddev", c.score_noise_stddev);
    c.score_floor = j.value("score_floor", c.score_floor);
    c.seed = j.value("seed", c.seed);
    return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
    nlohmann::json j{
        {"n_conversations", c.n_conversations},
        {"posts_min", c.posts_min},
        {"posts_max", c.posts_max},
        {"n_users", c.n_users},
        {"top_fraction", c.top_fraction},
        {"lurker_fraction", c.lurker_fraction},
        {"provocateur_fraction", c.provocateur_fraction},
        {"appreciated_participation", c.appreciated_participation},
        {"provocateur_participation", c.provocateur_participation},
        {"normal_participation", c.normal_participation},
        {"lurker_participation", c.lurker_participation},
        {"appreciated_attraction", c.appreciated_attraction},
        {"reply_vs_toplevel", c.reply_vs_toplevel},
        {"provocateur_reply_prob", c.provocateur_reply_prob},
        {"mention_prob", c.mention_prob},
        {"appreciated_score_mean", c.appreciated_score_mean},
        {"other_score_mean", c.other_score_mean},
        {"score_noise_stddev", c.score_noise_stddev},
        {"score_floor", c.score_floor},
        {"seed", c.seed},
    };
    return j.dump(2);
}

}  // namespace convoarg
