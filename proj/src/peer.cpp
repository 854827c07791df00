#include "peerkit/peer.hpp"

#include <algorithm>
#include <cmath>

namespace peerkit {

namespace {

double weight_for(const LevelWeights& weights, int grade) {
    if (weights.empty()) return grade >= 1 ? 1.0 : 0.0;
    auto it = weights.find(grade);
    return it == weights.end() ? 0.0 : it->second;
}

// Grade levels the query is scored on: judged levels with positive weight,
// plus (under absent=one) every corpus-wide level with positive weight.
std::set<int> weighted_levels(const QrelsStore& qrels, const QueryId& q,
                              const PeerOptions& opts) {
    std::set<int> levels;
    for (int k : qrels.grade_levels(q)) {
        if (weight_for(opts.weights, k) > 0.0) levels.insert(k);
    }
    if (opts.absent_one) {
        std::set<int> corpus;
        if (!opts.weights.empty()) {
            for (const auto& [k, w] : opts.weights) {
                if (w > 0.0) corpus.insert(k);
            }
        } else if (auto top = qrels.max_grade()) {
            for (int k = 1; k <= *top; ++k) corpus.insert(k);
        }
        levels.insert(corpus.begin(), corpus.end());
    }
    return levels;
}

}  // namespace

std::optional<double> peer_level(const RunStore& run, const QrelsStore& qrels,
                                 const LanguageMap& langmap, const QueryId& q,
                                 int grade, const PeerOptions& opts) {
    LevelSample sample = build_level_sample(run, qrels, langmap, q, grade, opts.cutoff);
    if (sample.total_size() == 0) {
        // No document at this level exists for the query.
        return opts.absent_one ? std::optional<double>(1.0) : std::nullopt;
    }
    bool any_retrieved = false;
    for (const auto& [_, values] : sample.groups) {
        for (double v : values) {
            if (v <= static_cast<double>(opts.cutoff)) {
                any_retrieved = true;
                break;
            }
        }
        if (any_retrieved) break;
    }
    // Nothing at this level is presented to the user: fair by definition.
    if (!any_retrieved) return 1.0;

    GroupedRanks g;
    g.groups.reserve(sample.groups.size());
    for (const auto& [_, values] : sample.groups) g.groups.push_back(values);

    KWOptions kw;
    kw.midranks = opts.midranks;
    if (opts.df_collection) {
        kw.collection_groups = static_cast<int>(langmap.languages().size());
    }
    return kw_pvalue(g, kw).p;
}

std::optional<double> peer_query(const RunStore& run, const QrelsStore& qrels,
                                 const LanguageMap& langmap, const QueryId& q,
                                 const PeerOptions& opts) {
    if (!opts.weights.empty()) {
        bool any_positive = false;
        for (const auto& [_, w] : opts.weights) {
            if (w < 0.0) throw ConfigError("level weights must be >= 0");
            if (w > 0.0) any_positive = true;
        }
        if (!any_positive) throw ConfigError("all level weights are zero");
    }

    double weighted_sum = 0.0;
    double weight_total = 0.0;
    for (int k : weighted_levels(qrels, q, opts)) {
        auto p = peer_level(run, qrels, langmap, q, k, opts);
        if (!p) continue;  // absent level carries no evidence
        double w = weight_for(opts.weights, k);
        weighted_sum += w * *p;
        weight_total += w;
    }
    if (weight_total <= 0.0) return std::nullopt;
    return weighted_sum / weight_total;
}

PeerScore peer_aggregate(const RunStore& run, const QrelsStore& qrels,
                         const LanguageMap& langmap, const PeerOptions& opts) {
    PeerScore score;
    score.cutoff = opts.cutoff;
    double sum = 0.0;
    for (const auto& q : qrels.queries()) {
        auto value = peer_query(run, qrels, langmap, q, opts);
        if (!value) {
            score.skipped.push_back(q);
            continue;
        }
        for (int k : qrels.grade_levels(q)) {
            if (auto p = peer_level(run, qrels, langmap, q, k, opts)) {
                score.per_level[{q, k}] = *p;
            }
        }
        score.per_query[q] = *value;
        sum += *value;
    }
    if (score.per_query.empty()) {
        throw DataError("no query could be scored: every query lacks judged documents "
                        "at a positively-weighted relevance level");
    }
    score.aggregate = sum / static_cast<double>(score.per_query.size());
    return score;
}

}  // namespace peerkit
