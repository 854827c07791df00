#pragma once

#include <map>
#include <optional>

#include "peerkit/core.hpp"

namespace peerkit {

// Language -> probability; entries >= 0 and summing to 1 (within 1e-9).
using TargetDistribution = std::map<Language, double>;

struct NdcgOptions {
    bool linear_gain = false;  // gain = grade instead of 2^grade - 1
};

// nDCG@X with exponential gains and log2 discount. nullopt when the query
// has no judged relevant document.
std::optional<double> ndcg_at(const RunStore& run, const QrelsStore& qrels,
                              const QueryId& q, int cutoff,
                              const NdcgOptions& opts = {});

std::optional<double> recall_at(const RunStore& run, const QrelsStore& qrels,
                                const QueryId& q, int cutoff);

// alpha-nDCG with the document language as the aspect: the c-th retrieved
// relevant document of a language gains (1-alpha)^c. Ideal gain sequence by
// greedy construction over all judged relevant documents.
std::optional<double> alpha_ndcg_at(const RunStore& run, const QrelsStore& qrels,
                                    const LanguageMap& langmap, const QueryId& q,
                                    int cutoff, double alpha);

struct AwrfOptions {
    enum class Attention { Log2, Rbp };
    enum class Distance { TotalVariation, JensenShannon };

    Attention attention = Attention::Log2;
    double rbp_persistence = 0.8;
    Distance distance = Distance::TotalVariation;
    bool remove_nonrelevant = true;
    // Explicit target; unset derives the per-language share of relevant
    // documents for the query.
    std::optional<TargetDistribution> target;
};

struct AwrfResult {
    double value = 0.0;
    // Set when relevant documents exist but none were retrieved above the
    // cutoff, which scores 0 by convention.
    bool empty_exposure = false;
};

// nullopt when the query has no judged relevant document.
std::optional<AwrfResult> awrf_at(const RunStore& run, const QrelsStore& qrels,
                                  const LanguageMap& langmap, const QueryId& q,
                                  int cutoff, const AwrfOptions& opts = {});

}  // namespace peerkit
