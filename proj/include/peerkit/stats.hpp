#pragma once

#include <optional>
#include <vector>

#include "peerkit/errors.hpp"

namespace peerkit {

// Rank-values grouped by language (or any grouping). Values may repeat
// (ties); empty groups are permitted and ignored by the test.
struct GroupedRanks {
    std::vector<std::vector<double>> groups;

    std::size_t total_count() const;
    std::size_t nonempty_groups() const;
};

struct KWResult {
    std::optional<double> h;  // unset when the statistic is undefined
    int df = 0;
    double p = 1.0;
};

// Kruskal-Wallis H in the variance-ratio form
//   H = (n-1) * sum_j n_j (mean_j - mean)^2 / sum_ij (r_ij - mean)^2
// computed directly on the given rank-values. Empty groups are dropped.
// Requires >= 2 non-empty groups and >= 2 values; returns nullopt when the
// total variance is zero (all values identical).
std::optional<double> kw_statistic(const GroupedRanks& g);

// Replaces the values by pooled mid-ranks 1..n (ties averaged), the
// textbook K-W preprocessing step.
GroupedRanks to_midranks(const GroupedRanks& g);

// Chi-squared survival function Q(df/2, x/2), the regularized upper
// incomplete gamma function. Series expansion below df+1, continued
// fraction above.
double chi2_sf(double x, int df);

struct KWOptions {
    bool midranks = false;  // pool to mid-ranks before computing H
    // When set, degrees of freedom come from the collection-wide group
    // count instead of the number of non-empty groups in the sample.
    std::optional<int> collection_groups;
};

// Total over GroupedRanks: fewer than two non-empty groups, or zero total
// variance, yield p = 1.0 with no H.
KWResult kw_pvalue(const GroupedRanks& g, const KWOptions& opts = {});

}  // namespace peerkit
