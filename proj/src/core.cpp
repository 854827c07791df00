#include "peerkit/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace peerkit {

std::vector<RunEntry> canonicalize_run(std::vector<RunEntry> entries) {
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        if (!seen.insert(e.doc).second) {
            throw DataError("duplicate document in ranked list: " + e.doc);
        }
    }
    std::sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc < b.doc;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<int>(i) + 1;
    }
    return entries;
}

void RunStore::set_list(const QueryId& q, std::vector<RunEntry> entries, bool canonicalize) {
    if (canonicalize) {
        entries = canonicalize_run(std::move(entries));
    } else {
        std::unordered_set<std::string> seen;
        for (const auto& e : entries) {
            if (!seen.insert(e.doc).second) {
                throw DataError("duplicate document in ranked list: " + e.doc);
            }
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            entries[i].rank = static_cast<int>(i) + 1;
        }
    }
    auto& index = positions_[q];
    index.clear();
    for (const auto& e : entries) index.emplace(e.doc, e.rank);
    lists_[q] = std::move(entries);
}

const std::vector<RunEntry>* RunStore::list(const QueryId& q) const {
    auto it = lists_.find(q);
    return it == lists_.end() ? nullptr : &it->second;
}

std::optional<int> RunStore::position(const QueryId& q, const DocId& d) const {
    auto it = positions_.find(q);
    if (it == positions_.end()) return std::nullopt;
    auto jt = it->second.find(d);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::vector<QueryId> RunStore::queries() const {
    std::vector<QueryId> out;
    out.reserve(lists_.size());
    for (const auto& [q, _] : lists_) out.push_back(q);
    return out;
}

void QrelsStore::add(const QueryId& q, const DocId& d, int grade) {
    if (grade < 0) {
        throw DataError("negative relevance grade for (" + q + ", " + d + ")");
    }
    auto [it, inserted] = judgments_[q].emplace(d, grade);
    if (!inserted) {
        throw DataError("duplicate judgment for (" + q + ", " + d + ")");
    }
}

std::optional<int> QrelsStore::grade(const QueryId& q, const DocId& d) const {
    auto it = judgments_.find(q);
    if (it == judgments_.end()) return std::nullopt;
    auto jt = it->second.find(d);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

const std::map<DocId, int>* QrelsStore::judgments(const QueryId& q) const {
    auto it = judgments_.find(q);
    return it == judgments_.end() ? nullptr : &it->second;
}

std::set<int> QrelsStore::grade_levels(const QueryId& q) const {
    std::set<int> out;
    if (const auto* j = judgments(q)) {
        for (const auto& [_, g] : *j) out.insert(g);
    }
    return out;
}

std::vector<DocId> QrelsStore::docs_at_level(const QueryId& q, int k) const {
    std::vector<DocId> out;
    if (const auto* j = judgments(q)) {
        for (const auto& [d, g] : *j) {
            if (g == k) out.push_back(d);
        }
    }
    return out;
}

std::vector<QueryId> QrelsStore::queries() const {
    std::vector<QueryId> out;
    out.reserve(judgments_.size());
    for (const auto& [q, _] : judgments_) out.push_back(q);
    return out;
}

std::optional<int> QrelsStore::max_grade() const {
    std::optional<int> best;
    for (const auto& [_, j] : judgments_) {
        for (const auto& [__, g] : j) {
            if (!best || g > *best) best = g;
        }
    }
    return best;
}

void LanguageMap::add(const DocId& d, const Language& lang) {
    auto [it, inserted] = map_.emplace(d, lang);
    if (!inserted && it->second != lang) {
        throw DataError("conflicting language for document " + d + ": " + it->second +
                        " vs " + lang);
    }
}

void LanguageMap::set(const DocId& d, const Language& lang) { map_[d] = lang; }

std::optional<Language> LanguageMap::lookup(const DocId& d) const {
    auto it = map_.find(d);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

const Language& LanguageMap::require(const DocId& d) const {
    auto it = map_.find(d);
    if (it == map_.end()) {
        throw DataError("document " + d + " has no language assignment");
    }
    return it->second;
}

std::set<Language> LanguageMap::languages() const {
    std::set<Language> out;
    for (const auto& [_, l] : map_) out.insert(l);
    return out;
}

std::size_t LevelSample::total_size() const {
    std::size_t n = 0;
    for (const auto& [_, g] : groups) n += g.size();
    return n;
}

LevelSample build_level_sample(const RunStore& run, const QrelsStore& qrels,
                               const LanguageMap& langmap, const QueryId& q,
                               int grade, int cutoff) {
    if (cutoff < 1) throw ConfigError("rank cutoff must be >= 1");
    LevelSample sample;
    sample.query = q;
    sample.grade = grade;
    sample.cutoff = cutoff;
    for (const auto& d : qrels.docs_at_level(q, grade)) {
        const Language& lang = langmap.require(d);
        auto pos = run.position(q, d);
        double value = (pos && *pos <= cutoff) ? static_cast<double>(*pos)
                                               : static_cast<double>(cutoff) + 1.0;
        sample.groups[lang].push_back(value);
    }
    return sample;
}

}  // namespace peerkit
