#include "peerkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace peerkit {

std::size_t GroupedRanks::total_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

std::size_t GroupedRanks::nonempty_groups() const {
    std::size_t m = 0;
    for (const auto& g : groups) {
        if (!g.empty()) ++m;
    }
    return m;
}

std::optional<double> kw_statistic(const GroupedRanks& g) {
    std::size_t n = g.total_count();
    std::size_t m = g.nonempty_groups();
    if (m < 2) throw NumericError("kw_statistic needs at least two non-empty groups");
    if (n < 2) throw NumericError("kw_statistic needs at least two values");

    double grand_sum = 0.0;
    for (const auto& grp : g.groups) {
        grand_sum = std::accumulate(grp.begin(), grp.end(), grand_sum);
    }
    double grand_mean = grand_sum / static_cast<double>(n);

    double between = 0.0;
    double total = 0.0;
    for (const auto& grp : g.groups) {
        if (grp.empty()) continue;
        double group_sum = std::accumulate(grp.begin(), grp.end(), 0.0);
        double group_mean = group_sum / static_cast<double>(grp.size());
        double d = group_mean - grand_mean;
        between += static_cast<double>(grp.size()) * d * d;
        for (double v : grp) total += (v - grand_mean) * (v - grand_mean);
    }
    if (total <= 0.0) return std::nullopt;  // degenerate variance
    return (static_cast<double>(n) - 1.0) * between / total;
}

GroupedRanks to_midranks(const GroupedRanks& g) {
    struct Tagged {
        double value;
        std::size_t group;
        std::size_t slot;
    };
    std::vector<Tagged> pooled;
    for (std::size_t j = 0; j < g.groups.size(); ++j) {
        for (std::size_t i = 0; i < g.groups[j].size(); ++i) {
            pooled.push_back({g.groups[j][i], j, i});
        }
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

    GroupedRanks out;
    out.groups.resize(g.groups.size());
    for (std::size_t j = 0; j < g.groups.size(); ++j) {
        out.groups[j].resize(g.groups[j].size());
    }
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        // positions i+1 .. j averaged over the tie block
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            out.groups[pooled[k].group][pooled[k].slot] = midrank;
        }
        i = j;
    }
    return out;
}

namespace {

// Regularized lower incomplete gamma P(a,x) by series, valid for x < a+1.
double gamma_p_series(double a, double x) {
    const int kMaxIter = 10000;
    const double kEps = std::numeric_limits<double>::epsilon() / 2.0;
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(a,x) by modified Lentz continued
// fraction, valid for x >= a+1.
double gamma_q_contfrac(double a, double x) {
    const int kMaxIter = 10000;
    const double kEps = std::numeric_limits<double>::epsilon() / 2.0;
    const double kTiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

}  // namespace

double chi2_sf(double x, int df) {
    if (df < 1) throw ConfigError("chi-squared degrees of freedom must be >= 1");
    if (!(x >= 0.0)) throw ConfigError("chi-squared statistic must be >= 0");
    double a = static_cast<double>(df) / 2.0;
    double t = x / 2.0;
    if (t == 0.0) return 1.0;
    double q = (t < a + 1.0) ? 1.0 - gamma_p_series(a, t) : gamma_q_contfrac(a, t);
    return std::clamp(q, 0.0, 1.0);
}

KWResult kw_pvalue(const GroupedRanks& g, const KWOptions& opts) {
    KWResult result;
    std::size_t m = g.nonempty_groups();
    result.df = opts.collection_groups ? *opts.collection_groups - 1
                                       : static_cast<int>(m) - 1;
    if (m < 2) {
        result.df = std::max(result.df, 0);
        result.p = 1.0;
        return result;
    }
    auto h = opts.midranks ? kw_statistic(to_midranks(g)) : kw_statistic(g);
    if (!h) {
        result.p = 1.0;  // zero total variance
        return result;
    }
    result.h = *h;
    result.p = chi2_sf(*h, result.df);
    return result;
}

}  // namespace peerkit
