#include "peerkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace peerkit {

namespace {

double log2_discount(int position) {
    return 1.0 / std::log2(static_cast<double>(position) + 1.0);
}

double gain_of(int grade, bool linear) {
    if (linear) return static_cast<double>(grade);
    return std::pow(2.0, static_cast<double>(grade)) - 1.0;
}

}  // namespace

std::optional<double> ndcg_at(const RunStore& run, const QrelsStore& qrels,
                              const QueryId& q, int cutoff, const NdcgOptions& opts) {
    if (cutoff < 1) throw ConfigError("rank cutoff must be >= 1");
    const auto* judged = qrels.judgments(q);
    if (!judged) return std::nullopt;

    std::vector<int> grades;
    for (const auto& [_, g] : *judged) {
        if (g > 0) grades.push_back(g);
    }
    if (grades.empty()) return std::nullopt;

    std::sort(grades.rbegin(), grades.rend());
    double ideal = 0.0;
    for (std::size_t i = 0; i < grades.size() && static_cast<int>(i) < cutoff; ++i) {
        ideal += gain_of(grades[i], opts.linear_gain) * log2_discount(static_cast<int>(i) + 1);
    }

    double dcg = 0.0;
    if (const auto* list = run.list(q)) {
        for (const auto& e : *list) {
            if (e.rank > cutoff) break;
            auto g = qrels.grade(q, e.doc);
            if (g && *g > 0) dcg += gain_of(*g, opts.linear_gain) * log2_discount(e.rank);
        }
    }
    return dcg / ideal;
}

std::optional<double> recall_at(const RunStore& run, const QrelsStore& qrels,
                                const QueryId& q, int cutoff) {
    if (cutoff < 1) throw ConfigError("rank cutoff must be >= 1");
    const auto* judged = qrels.judgments(q);
    if (!judged) return std::nullopt;

    int relevant = 0;
    int found = 0;
    for (const auto& [d, g] : *judged) {
        if (g < 1) continue;
        ++relevant;
        auto pos = run.position(q, d);
        if (pos && *pos <= cutoff) ++found;
    }
    if (relevant == 0) return std::nullopt;
    return static_cast<double>(found) / static_cast<double>(relevant);
}

std::optional<double> alpha_ndcg_at(const RunStore& run, const QrelsStore& qrels,
                                    const LanguageMap& langmap, const QueryId& q,
                                    int cutoff, double alpha) {
    if (cutoff < 1) throw ConfigError("rank cutoff must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0,1]");
    const auto* judged = qrels.judgments(q);
    if (!judged) return std::nullopt;

    // Relevant-document count per language over all judgments.
    std::map<Language, int> per_language;
    int total_relevant = 0;
    for (const auto& [d, g] : *judged) {
        if (g < 1) continue;
        ++per_language[langmap.require(d)];
        ++total_relevant;
    }
    if (total_relevant == 0) return std::nullopt;

    // Greedy ideal: each pick takes a language with the fewest previous
    // picks that still has documents left.
    double ideal = 0.0;
    {
        std::vector<std::pair<int, int>> pool;  // (picked so far, remaining)
        pool.reserve(per_language.size());
        for (const auto& [_, count] : per_language) pool.emplace_back(0, count);
        for (int i = 1; i <= total_relevant && i <= cutoff; ++i) {
            auto best = pool.end();
            for (auto it = pool.begin(); it != pool.end(); ++it) {
                if (it->second == 0) continue;
                if (best == pool.end() || it->first < best->first) best = it;
            }
            double g = std::pow(1.0 - alpha, static_cast<double>(best->first));
            ideal += g * log2_discount(i);
            ++best->first;
            --best->second;
        }
    }
    if (ideal <= 0.0) return 0.0;  // alpha == 1 with several same-language docs

    double dcg = 0.0;
    if (const auto* list = run.list(q)) {
        std::map<Language, int> seen;
        for (const auto& e : *list) {
            if (e.rank > cutoff) break;
            auto g = qrels.grade(q, e.doc);
            if (!g || *g < 1) continue;
            int& c = seen[langmap.require(e.doc)];
            dcg += std::pow(1.0 - alpha, static_cast<double>(c)) * log2_discount(e.rank);
            ++c;
        }
    }
    return dcg / ideal;
}

std::optional<AwrfResult> awrf_at(const RunStore& run, const QrelsStore& qrels,
                                  const LanguageMap& langmap, const QueryId& q,
                                  int cutoff, const AwrfOptions& opts) {
    if (cutoff < 1) throw ConfigError("rank cutoff must be >= 1");
    const auto* judged = qrels.judgments(q);
    if (!judged) return std::nullopt;

    std::map<Language, int> relevant_per_language;
    int total_relevant = 0;
    for (const auto& [d, g] : *judged) {
        if (g < 1) continue;
        ++relevant_per_language[langmap.require(d)];
        ++total_relevant;
    }
    if (total_relevant == 0) return std::nullopt;

    TargetDistribution target;
    if (opts.target) {
        target = *opts.target;
        if (target.empty()) throw ConfigError("AWRF target distribution is empty");
        double sum = 0.0;
        for (const auto& [_, p] : target) {
            if (p < 0.0) throw ConfigError("AWRF target probabilities must be >= 0");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw ConfigError("AWRF target distribution must sum to 1");
        }
    } else {
        for (const auto& [lang, count] : relevant_per_language) {
            target[lang] = static_cast<double>(count) / static_cast<double>(total_relevant);
        }
    }

    // Attention over the (optionally nonrelevant-free) ranking.
    std::map<Language, double> exposure;
    double mass = 0.0;
    if (const auto* list = run.list(q)) {
        int position = 0;
        for (const auto& e : *list) {
            auto g = qrels.grade(q, e.doc);
            bool relevant = g && *g > 0;
            if (opts.remove_nonrelevant && !relevant) continue;
            ++position;
            if (position > cutoff) break;
            double attention =
                opts.attention == AwrfOptions::Attention::Log2
                    ? log2_discount(position)
                    : std::pow(opts.rbp_persistence, static_cast<double>(position - 1));
            exposure[langmap.require(e.doc)] += attention;
            mass += attention;
        }
    }
    if (mass <= 0.0) return AwrfResult{0.0, true};
    for (auto& [_, a] : exposure) a /= mass;

    std::set<Language> support;
    for (const auto& [l, _] : exposure) support.insert(l);
    for (const auto& [l, _] : target) support.insert(l);

    double value;
    if (opts.distance == AwrfOptions::Distance::TotalVariation) {
        double tv = 0.0;
        for (const auto& l : support) {
            double e = exposure.count(l) ? exposure.at(l) : 0.0;
            double t = target.count(l) ? target.at(l) : 0.0;
            tv += std::fabs(e - t);
        }
        value = 1.0 - tv / 2.0;
    } else {
        // Jensen-Shannon divergence, base 2 so the range is [0,1].
        auto kl_term = [](double p, double m) {
            return p > 0.0 ? p * std::log2(p / m) : 0.0;
        };
        double jsd = 0.0;
        for (const auto& l : support) {
            double e = exposure.count(l) ? exposure.at(l) : 0.0;
            double t = target.count(l) ? target.at(l) : 0.0;
            double m = (e + t) / 2.0;
            if (m > 0.0) jsd += 0.5 * (kl_term(e, m) + kl_term(t, m));
        }
        value = 1.0 - std::clamp(jsd, 0.0, 1.0);
    }
    return AwrfResult{std::clamp(value, 0.0, 1.0), false};
}

}  // namespace peerkit
