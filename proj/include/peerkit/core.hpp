#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "peerkit/errors.hpp"

namespace peerkit {

// Identifiers are opaque, case-sensitive, non-empty, whitespace-free strings.
using DocId = std::string;
using QueryId = std::string;
using Language = std::string;

struct RunEntry {
    DocId doc;
    double score = 0.0;
    int rank = 0;
};

// Sorts by (score desc, doc id asc) and reassigns ranks 1..n.
// Idempotent and invariant under input permutation.
std::vector<RunEntry> canonicalize_run(std::vector<RunEntry> entries);

// Per-query ranked lists. Immutable once loaded.
class RunStore {
public:
    // `canonicalize` re-sorts by score; when false the declared order is
    // kept but ranks are still renumbered 1..n (strict mode).
    void set_list(const QueryId& q, std::vector<RunEntry> entries, bool canonicalize = true);

    const std::vector<RunEntry>* list(const QueryId& q) const;
    std::optional<int> position(const QueryId& q, const DocId& d) const;
    std::vector<QueryId> queries() const;
    bool has_query(const QueryId& q) const { return lists_.count(q) > 0; }

private:
    std::map<QueryId, std::vector<RunEntry>> lists_;
    std::map<QueryId, std::unordered_map<DocId, int>> positions_;
};

// Graded relevance judgments, grade 0 = nonrelevant.
class QrelsStore {
public:
    void add(const QueryId& q, const DocId& d, int grade);

    std::optional<int> grade(const QueryId& q, const DocId& d) const;
    const std::map<DocId, int>* judgments(const QueryId& q) const;
    std::set<int> grade_levels(const QueryId& q) const;
    std::vector<DocId> docs_at_level(const QueryId& q, int k) const;
    std::vector<QueryId> queries() const;
    bool empty() const { return judgments_.empty(); }

    // Highest grade judged anywhere in the store; nullopt when empty.
    std::optional<int> max_grade() const;

private:
    std::map<QueryId, std::map<DocId, int>> judgments_;
};

class LanguageMap {
public:
    // Duplicate consistent assignments are accepted; conflicts are an error.
    void add(const DocId& d, const Language& lang);
    // Overwrites silently; used by synthetic re-assignment.
    void set(const DocId& d, const Language& lang);

    std::optional<Language> lookup(const DocId& d) const;
    // Throws DataError naming the document when unmapped.
    const Language& require(const DocId& d) const;
    std::set<Language> languages() const;
    std::size_t size() const { return map_.size(); }
    const std::unordered_map<DocId, Language>& items() const { return map_; }

private:
    std::unordered_map<DocId, Language> map_;
};

// Rank-values of one (query, grade level) sample, grouped by language.
// Documents retrieved above the cutoff carry their true rank; everything
// else (unretrieved or below the cutoff) carries the tied value cutoff+1.
struct LevelSample {
    std::map<Language, std::vector<double>> groups;
    QueryId query;
    int grade = 0;
    int cutoff = 0;

    std::size_t total_size() const;
};

LevelSample build_level_sample(const RunStore& run, const QrelsStore& qrels,
                               const LanguageMap& langmap, const QueryId& q,
                               int grade, int cutoff);

}  // namespace peerkit
