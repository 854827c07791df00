#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peerkit/baselines.hpp"
#include "peerkit/core.hpp"
#include "peerkit/peer.hpp"

namespace peerkit {

// TREC run format: `qid Q0 docid rank score tag`, whitespace delimited.
// The declared rank column is ignored unless strict_ranks is set, in which
// case the file order is honored as-is.
RunStore parse_run(std::istream& in, const std::string& name = "<run>",
                   bool strict_ranks = false);
RunStore parse_run_file(const std::string& path, bool strict_ranks = false);

// TREC qrels format: `qid 0 docid grade`.
QrelsStore parse_qrels(std::istream& in, const std::string& name = "<qrels>");
QrelsStore parse_qrels_file(const std::string& path);

// Tab-separated `docid<TAB>language`.
LanguageMap parse_langmap(std::istream& in, const std::string& name = "<langmap>");
LanguageMap parse_langmap_file(const std::string& path);

void write_run(const RunStore& run, std::ostream& out, const std::string& tag = "peerkit");
void write_qrels(const QrelsStore& qrels, std::ostream& out);
void write_langmap(const LanguageMap& langmap, std::ostream& out);

// Parsed measure string `NAME[(opt=val,...)]@CUTOFF`.
struct MeasureSpec {
    enum class Name { Peer, Awrf, AlphaNdcg, Ndcg, Recall };

    Name name = Name::Peer;
    int cutoff = 20;
    std::string label;  // the original measure string

    // PEER
    LevelWeights weights;
    bool midranks = false;
    bool df_collection = false;
    bool absent_one = false;
    // aDCG
    double alpha = 0.5;
    // nDCG
    bool linear_gain = false;
    // AWRF
    AwrfOptions awrf;
};

MeasureSpec parse_measure_spec(const std::string& s);

struct MeasureResult {
    std::string measure;
    std::map<QueryId, double> per_query;
    double aggregate = 0.0;
    std::vector<QueryId> skipped;
};

struct EvalReport {
    std::vector<MeasureResult> results;
    std::vector<std::string> warnings;
};

EvalReport evaluate(const RunStore& run, const QrelsStore& qrels,
                    const LanguageMap& langmap, const std::vector<MeasureSpec>& specs);

// trec_eval-style rows `measure<TAB>qid<TAB>value` (4 decimals), with an
// `all` row per measure. Per-query rows are lexicographic by query id.
void emit_tsv(const EvalReport& report, std::ostream& out, bool per_query);

// Full-precision values plus diagnostics.
void emit_json(const EvalReport& report, std::ostream& out);
EvalReport parse_report_json(std::istream& in);

}  // namespace peerkit
