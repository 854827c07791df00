#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "peerkit/core.hpp"

namespace peerkit {

// A self-contained synthetic dataset: one query, binary relevance (every
// generated document is grade 1), two languages.
struct SynthData {
    RunStore run;
    QrelsStore qrels;
    LanguageMap langmap;
    QueryId query;
};

// All documents of language A ranked before language B, with the first
// `step` documents of each language interleaved A,B,A,B,...
SynthData gen_shifting(int n_per_lang, int step);

// n_major majority-language documents plus one minority document placed at
// rank `pos` (1 <= pos <= ceil((n_major+1)/2)).
SynthData gen_moving_single(int n_major, int pos);

// Languages alternate A,B,A,B,... up to `length` (>= 2).
SynthData gen_interleaving(int length);

// Ranks 1..prefix alternate starting with the minority language; the rest
// of the list is all majority language.
SynthData gen_increasing_length(int total, int prefix);

struct AssignmentSpec {
    std::map<Language, double> relevant_means;
    // Defaults to relevant_means when empty.
    std::map<Language, double> nonrelevant_means;
    double sigma = 1.0;
    double min_nonrel_share = 0.45;  // in [0, 0.5]
    std::uint64_t seed = 0;
    int trials = 1;
};

// Reassigns languages to the documents of an existing run/qrels pair, one
// LanguageMap per trial. Per query: the relevant-document count split
// between the two languages is drawn uniformly, each label gets a normal
// draw N(mean_language, sigma), labels are sorted by draw and assigned to
// the documents in rank order. Nonrelevant documents get the same
// treatment under the minimum-share constraint. Positions and grades are
// never touched. Deterministic given the seed.
std::vector<LanguageMap> assign_languages(const RunStore& run, const QrelsStore& qrels,
                                          const AssignmentSpec& spec);

}  // namespace peerkit
