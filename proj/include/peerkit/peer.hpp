#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "peerkit/core.hpp"
#include "peerkit/stats.hpp"

namespace peerkit {

// Grade level -> importance weight. An empty map means the default
// configuration: weight 0 on grade 0, uniform over the judged grades >= 1.
using LevelWeights = std::map<int, double>;

struct PeerOptions {
    int cutoff = 20;
    LevelWeights weights;
    bool midranks = false;        // rerank=midranks
    bool df_collection = false;   // df from collection language count
    bool absent_one = false;      // score levels absent from the collection as 1.0
};

struct PeerScore {
    std::map<std::pair<QueryId, int>, double> per_level;
    std::map<QueryId, double> per_query;
    double aggregate = 0.0;
    int cutoff = 0;
    std::vector<QueryId> skipped;  // queries with no judged docs at any weighted level
};

// p-value for one (query, grade) level; nullopt marks a level absent from
// the collection (excluded from weighting). Levels whose documents exist
// but none retrieved above the cutoff score exactly 1.0.
std::optional<double> peer_level(const RunStore& run, const QrelsStore& qrels,
                                 const LanguageMap& langmap, const QueryId& q,
                                 int grade, const PeerOptions& opts);

// Weighted combination over levels, weights renormalized over the
// non-absent levels with positive weight. nullopt excludes the query.
std::optional<double> peer_query(const RunStore& run, const QrelsStore& qrels,
                                 const LanguageMap& langmap, const QueryId& q,
                                 const PeerOptions& opts);

// Mean weighted PEER over the evaluation query set (queries in the qrels).
PeerScore peer_aggregate(const RunStore& run, const QrelsStore& qrels,
                         const LanguageMap& langmap, const PeerOptions& opts);

}  // namespace peerkit
