#include "peerkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace peerkit {

namespace {

constexpr const char* kLangA = "LangA";
constexpr const char* kLangB = "LangB";

SynthData from_order(const std::vector<Language>& order, const std::string& query) {
    SynthData data;
    data.query = query;
    std::map<Language, int> counts;
    std::vector<RunEntry> entries;
    entries.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Language& lang = order[i];
        int seq = ++counts[lang];
        // "LangA" -> suffix "A"
        DocId doc = "d" + lang.substr(4) + std::to_string(seq);
        double score = 1.0 / static_cast<double>(i + 1);
        entries.push_back({doc, score, static_cast<int>(i + 1)});
        data.qrels.add(query, doc, 1);
        data.langmap.add(doc, lang);
    }
    data.run.set_list(query, std::move(entries));
    return data;
}

// 64-bit state mixers and distributions spelled out explicitly so the
// generated data is identical across standard library implementations.
double unit_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
}

double normal_draw(std::mt19937_64& rng, double mean, double sigma) {
    double u1 = unit_uniform(rng);
    double u2 = unit_uniform(rng);
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sigma * z;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t part) {
    // splitmix64 over (seed, trial, part)
    std::uint64_t x = seed;
    for (std::uint64_t salt : {trial + 1, part + 1}) {
        x += 0x9E3779B97F4A7C15ULL * salt;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        x ^= x >> 31;
    }
    return std::mt19937_64(x);
}

// Draws labels (one per document) and orders them by their normal draw.
std::vector<Language> draw_labels(std::mt19937_64& rng, const Language& first,
                                  const Language& second, int n_first, int n_second,
                                  const std::map<Language, double>& means, double sigma) {
    std::vector<std::pair<double, Language>> labelled;
    labelled.reserve(static_cast<std::size_t>(n_first + n_second));
    for (int i = 0; i < n_first; ++i) {
        labelled.emplace_back(normal_draw(rng, means.at(first), sigma), first);
    }
    for (int i = 0; i < n_second; ++i) {
        labelled.emplace_back(normal_draw(rng, means.at(second), sigma), second);
    }
    std::stable_sort(labelled.begin(), labelled.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Language> out;
    out.reserve(labelled.size());
    for (auto& [_, lang] : labelled) out.push_back(std::move(lang));
    return out;
}

}  // namespace

SynthData gen_shifting(int n_per_lang, int step) {
    if (n_per_lang < 1) throw ConfigError("gen_shifting: n_per_lang must be >= 1");
    if (step < 0 || step > n_per_lang) {
        throw ConfigError("gen_shifting: step must lie in [0, n_per_lang]");
    }
    std::vector<Language> order;
    order.reserve(static_cast<std::size_t>(2 * n_per_lang));
    for (int i = 0; i < step; ++i) {
        order.push_back(kLangA);
        order.push_back(kLangB);
    }
    for (int i = step; i < n_per_lang; ++i) order.push_back(kLangA);
    for (int i = step; i < n_per_lang; ++i) order.push_back(kLangB);
    return from_order(order, "synth-qshifting-" + std::to_string(n_per_lang) + "_" +
                                 std::to_string(step));
}

SynthData gen_moving_single(int n_major, int pos) {
    if (n_major < 1) throw ConfigError("gen_moving_single: n_major must be >= 1");
    int max_pos = (n_major + 2) / 2;  // ceil((n_major+1)/2)
    if (pos < 1 || pos > max_pos) {
        throw ConfigError("gen_moving_single: pos must lie in [1, " +
                          std::to_string(max_pos) + "]");
    }
    std::vector<Language> order(static_cast<std::size_t>(n_major + 1), kLangA);
    order[static_cast<std::size_t>(pos - 1)] = kLangB;
    return from_order(order, "synth-qmoving_single-" + std::to_string(n_major) + "_" +
                                 std::to_string(pos));
}

SynthData gen_interleaving(int length) {
    if (length < 2) throw ConfigError("gen_interleaving: length must be >= 2");
    std::vector<Language> order;
    order.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) order.push_back(i % 2 == 0 ? kLangA : kLangB);
    return from_order(order, "synth-qinterleaving-" + std::to_string(length));
}

SynthData gen_increasing_length(int total, int prefix) {
    if (total < 1) throw ConfigError("gen_increasing_length: total must be >= 1");
    if (prefix < 1 || prefix > total) {
        throw ConfigError("gen_increasing_length: prefix must lie in [1, total]");
    }
    std::vector<Language> order;
    order.reserve(static_cast<std::size_t>(total));
    // The minority language leads the alternating section.
    for (int i = 0; i < prefix; ++i) order.push_back(i % 2 == 0 ? kLangA : kLangB);
    for (int i = prefix; i < total; ++i) order.push_back(kLangB);
    return from_order(order, "synth-qincreasing_length-" + std::to_string(total) + "_" +
                                 std::to_string(prefix));
}

std::vector<LanguageMap> assign_languages(const RunStore& run, const QrelsStore& qrels,
                                          const AssignmentSpec& spec) {
    if (spec.relevant_means.size() != 2) {
        throw ConfigError("assign_languages: exactly two languages required");
    }
    if (!(spec.sigma > 0.0)) throw ConfigError("assign_languages: sigma must be > 0");
    if (spec.min_nonrel_share < 0.0 || spec.min_nonrel_share > 0.5) {
        throw ConfigError("assign_languages: min_nonrel_share must lie in [0, 0.5]");
    }
    if (spec.trials < 1) throw ConfigError("assign_languages: trials must be >= 1");

    auto nonrel_means = spec.nonrelevant_means.empty() ? spec.relevant_means
                                                       : spec.nonrelevant_means;
    if (nonrel_means.size() != 2 ||
        nonrel_means.begin()->first != spec.relevant_means.begin()->first ||
        nonrel_means.rbegin()->first != spec.relevant_means.rbegin()->first) {
        throw ConfigError("assign_languages: nonrelevant means must cover the same "
                          "two languages");
    }
    const Language lang1 = spec.relevant_means.begin()->first;
    const Language lang2 = spec.relevant_means.rbegin()->first;

    // Per query: retrieved docs in rank order followed by judged-only docs
    // in id order, split into relevant and nonrelevant.
    struct QueryDocs {
        std::vector<DocId> relevant;
        std::vector<DocId> nonrelevant;
    };
    std::map<QueryId, QueryDocs> universe;
    for (const auto& q : qrels.queries()) {
        QueryDocs docs;
        std::set<DocId> seen;
        if (const auto* list = run.list(q)) {
            for (const auto& e : *list) {
                auto g = qrels.grade(q, e.doc);
                (g && *g > 0 ? docs.relevant : docs.nonrelevant).push_back(e.doc);
                seen.insert(e.doc);
            }
        }
        for (const auto& [d, g] : *qrels.judgments(q)) {
            if (seen.count(d)) continue;
            (g > 0 ? docs.relevant : docs.nonrelevant).push_back(d);
        }
        universe[q] = std::move(docs);
    }

    std::vector<LanguageMap> trials;
    trials.reserve(static_cast<std::size_t>(spec.trials));
    for (int t = 0; t < spec.trials; ++t) {
        LanguageMap lm;
        // Separate streams so varying the nonrelevant configuration leaves
        // the relevant assignment bit-identical.
        auto rng_rel = substream(spec.seed, static_cast<std::uint64_t>(t), 0);
        auto rng_non = substream(spec.seed, static_cast<std::uint64_t>(t), 1);
        for (const auto& [q, docs] : universe) {
            if (!docs.relevant.empty()) {
                int n = static_cast<int>(docs.relevant.size());
                int n1 = uniform_int(rng_rel, 0, n);
                auto labels = draw_labels(rng_rel, lang1, lang2, n1, n - n1,
                                          spec.relevant_means, spec.sigma);
                for (std::size_t i = 0; i < docs.relevant.size(); ++i) {
                    lm.set(docs.relevant[i], labels[i]);
                }
            }
            if (!docs.nonrelevant.empty()) {
                int n = static_cast<int>(docs.nonrelevant.size());
                int floor1 = static_cast<int>(
                    std::ceil(spec.min_nonrel_share * static_cast<double>(n)));
                if (2 * floor1 > n) {
                    throw ConfigError("assign_languages: min_nonrel_share infeasible for " +
                                      std::to_string(n) + " nonrelevant documents");
                }
                int n1 = uniform_int(rng_non, floor1, n - floor1);
                auto labels = draw_labels(rng_non, lang1, lang2, n1, n - n1,
                                          nonrel_means, spec.sigma);
                for (std::size_t i = 0; i < docs.nonrelevant.size(); ++i) {
                    lm.set(docs.nonrelevant[i], labels[i]);
                }
            }
        }
        trials.push_back(std::move(lm));
    }
    return trials;
}

}  // namespace peerkit
