#include "peerkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace peerkit {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
    return fields;
}

[[noreturn]] void line_error(const std::string& name, int lineno, const std::string& msg) {
    throw DataError(name + ":" + std::to_string(lineno) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

}  // namespace

RunStore parse_run(std::istream& in, const std::string& name, bool strict_ranks) {
    std::map<QueryId, std::vector<RunEntry>> raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 6) {
            line_error(name, lineno, "expected 6 fields `qid Q0 docid rank score tag`, got " +
                                         std::to_string(fields.size()));
        }
        double score;
        try {
            std::size_t used = 0;
            score = std::stod(fields[4], &used);
            if (used != fields[4].size()) throw std::invalid_argument(fields[4]);
        } catch (const std::exception&) {
            line_error(name, lineno, "non-numeric score `" + fields[4] + "`");
        }
        raw[fields[0]].push_back({fields[2], score, 0});
    }
    RunStore run;
    for (auto& [q, entries] : raw) {
        try {
            run.set_list(q, std::move(entries), !strict_ranks);
        } catch (const DataError& e) {
            throw DataError(name + ": query " + q + ": " + e.what());
        }
    }
    return run;
}

RunStore parse_run_file(const std::string& path, bool strict_ranks) {
    auto in = open_or_throw(path);
    return parse_run(in, path, strict_ranks);
}

QrelsStore parse_qrels(std::istream& in, const std::string& name) {
    QrelsStore qrels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 4) {
            line_error(name, lineno, "expected 4 fields `qid 0 docid grade`, got " +
                                         std::to_string(fields.size()));
        }
        int grade;
        try {
            std::size_t used = 0;
            grade = std::stoi(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
        } catch (const std::exception&) {
            line_error(name, lineno, "non-integer grade `" + fields[3] + "`");
        }
        if (grade < 0) line_error(name, lineno, "negative grade for document " + fields[2]);
        try {
            qrels.add(fields[0], fields[2], grade);
        } catch (const DataError& e) {
            line_error(name, lineno, e.what());
        }
    }
    return qrels;
}

QrelsStore parse_qrels_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_qrels(in, path);
}

LanguageMap parse_langmap(std::istream& in, const std::string& name) {
    LanguageMap lm;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            line_error(name, lineno, "expected `docid<TAB>language`");
        }
        std::string doc = line.substr(0, tab);
        std::string lang = line.substr(tab + 1);
        while (!lang.empty() && (lang.back() == '\r' || lang.back() == ' ')) lang.pop_back();
        if (doc.empty() || lang.empty()) {
            line_error(name, lineno, "empty docid or language");
        }
        try {
            lm.add(doc, lang);
        } catch (const DataError& e) {
            line_error(name, lineno, e.what());
        }
    }
    return lm;
}

LanguageMap parse_langmap_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_langmap(in, path);
}

void write_run(const RunStore& run, std::ostream& out, const std::string& tag) {
    out << std::setprecision(17);
    for (const auto& q : run.queries()) {
        for (const auto& e : *run.list(q)) {
            out << q << " Q0 " << e.doc << ' ' << e.rank << ' ' << e.score << ' ' << tag
                << '\n';
        }
    }
}

void write_qrels(const QrelsStore& qrels, std::ostream& out) {
    for (const auto& q : qrels.queries()) {
        for (const auto& [d, g] : *qrels.judgments(q)) {
            out << q << " 0 " << d << ' ' << g << '\n';
        }
    }
}

void write_langmap(const LanguageMap& langmap, std::ostream& out) {
    std::map<DocId, Language> ordered;
    for (const auto& [d, l] : langmap.items()) ordered.emplace(d, l);
    for (const auto& [d, l] : ordered) out << d << '\t' << l << '\n';
}

namespace {

// Splits a measure option list on commas, re-joining segments that carry
// no `=` into the previous value (weights and targets embed commas).
std::vector<std::pair<std::string, std::string>> split_options(const std::string& body,
                                                               const std::string& label) {
    std::vector<std::pair<std::string, std::string>> opts;
    std::string segment;
    std::istringstream ss(body);
    while (std::getline(ss, segment, ',')) {
        auto eq = segment.find('=');
        if (eq == std::string::npos) {
            if (opts.empty()) {
                throw ConfigError(label + ": malformed option segment `" + segment + "`");
            }
            opts.back().second += "," + segment;
        } else {
            opts.emplace_back(segment.substr(0, eq), segment.substr(eq + 1));
        }
    }
    for (const auto& [k, v] : opts) {
        if (k.empty() || v.empty()) {
            throw ConfigError(label + ": empty option key or value");
        }
    }
    return opts;
}

double parse_double(const std::string& s, const std::string& label) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(label + ": not a number: `" + s + "`");
    }
}

LevelWeights parse_weights(const std::string& s, const std::string& label) {
    LevelWeights weights;
    std::istringstream ss(s);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        auto colon = pair.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(label + ": weight entry `" + pair + "` is not GRADE:WEIGHT");
        }
        int grade;
        try {
            grade = std::stoi(pair.substr(0, colon));
        } catch (const std::exception&) {
            throw ConfigError(label + ": bad grade in weight entry `" + pair + "`");
        }
        double w = parse_double(pair.substr(colon + 1), label);
        if (w < 0.0) throw ConfigError(label + ": weights must be >= 0");
        if (!weights.emplace(grade, w).second) {
            throw ConfigError(label + ": duplicate weight for grade " +
                              std::to_string(grade));
        }
    }
    if (weights.empty()) throw ConfigError(label + ": empty weight list");
    return weights;
}

TargetDistribution parse_target(const std::string& s, const std::string& label) {
    TargetDistribution target;
    std::istringstream ss(s);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        auto colon = pair.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(label + ": target entry `" + pair + "` is not LANG:PROB");
        }
        target[pair.substr(0, colon)] = parse_double(pair.substr(colon + 1), label);
    }
    if (target.empty()) throw ConfigError(label + ": empty target distribution");
    return target;
}

}  // namespace

MeasureSpec parse_measure_spec(const std::string& s) {
    MeasureSpec spec;
    spec.label = s;

    auto at = s.rfind('@');
    if (at == std::string::npos) {
        throw ConfigError("measure `" + s + "`: missing @CUTOFF");
    }
    try {
        std::size_t used = 0;
        spec.cutoff = std::stoi(s.substr(at + 1), &used);
        if (used != s.size() - at - 1) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ConfigError("measure `" + s + "`: bad cutoff `" + s.substr(at + 1) + "`");
    }
    if (spec.cutoff < 1) throw ConfigError("measure `" + s + "`: cutoff must be >= 1");

    std::string head = s.substr(0, at);
    std::string options;
    auto paren = head.find('(');
    if (paren != std::string::npos) {
        if (head.back() != ')') {
            throw ConfigError("measure `" + s + "`: unbalanced option list");
        }
        options = head.substr(paren + 1, head.size() - paren - 2);
        head = head.substr(0, paren);
    }

    if (head == "PEER") spec.name = MeasureSpec::Name::Peer;
    else if (head == "AWRF") spec.name = MeasureSpec::Name::Awrf;
    else if (head == "aDCG") spec.name = MeasureSpec::Name::AlphaNdcg;
    else if (head == "nDCG") spec.name = MeasureSpec::Name::Ndcg;
    else if (head == "Recall") spec.name = MeasureSpec::Name::Recall;
    else throw ConfigError("unknown measure `" + head + "`");

    for (const auto& [key, value] : split_options(options, s)) {
        bool ok = false;
        switch (spec.name) {
            case MeasureSpec::Name::Peer:
                if (key == "w") {
                    spec.weights = parse_weights(value, s);
                    ok = true;
                } else if (key == "rerank") {
                    if (value == "midranks") spec.midranks = true;
                    else if (value == "literal") spec.midranks = false;
                    else throw ConfigError(s + ": rerank must be literal|midranks");
                    ok = true;
                } else if (key == "df") {
                    if (value == "collection") spec.df_collection = true;
                    else if (value == "sample") spec.df_collection = false;
                    else throw ConfigError(s + ": df must be sample|collection");
                    ok = true;
                } else if (key == "absent") {
                    if (value == "one") spec.absent_one = true;
                    else if (value == "skip") spec.absent_one = false;
                    else throw ConfigError(s + ": absent must be skip|one");
                    ok = true;
                }
                break;
            case MeasureSpec::Name::AlphaNdcg:
                if (key == "alpha") {
                    spec.alpha = parse_double(value, s);
                    if (spec.alpha < 0.0 || spec.alpha > 1.0) {
                        throw ConfigError(s + ": alpha must lie in [0,1]");
                    }
                    ok = true;
                }
                break;
            case MeasureSpec::Name::Ndcg:
                if (key == "gain") {
                    if (value == "linear") spec.linear_gain = true;
                    else if (value == "exp") spec.linear_gain = false;
                    else throw ConfigError(s + ": gain must be exp|linear");
                    ok = true;
                }
                break;
            case MeasureSpec::Name::Awrf:
                if (key == "target") {
                    if (value != "relevant-proportion") {
                        spec.awrf.target = parse_target(value, s);
                    }
                    ok = true;
                } else if (key == "attention") {
                    if (value == "log2") {
                        spec.awrf.attention = AwrfOptions::Attention::Log2;
                    } else if (value.rfind("rbp:", 0) == 0) {
                        spec.awrf.attention = AwrfOptions::Attention::Rbp;
                        spec.awrf.rbp_persistence = parse_double(value.substr(4), s);
                        if (spec.awrf.rbp_persistence <= 0.0 ||
                            spec.awrf.rbp_persistence >= 1.0) {
                            throw ConfigError(s + ": rbp persistence must lie in (0,1)");
                        }
                    } else {
                        throw ConfigError(s + ": attention must be log2|rbp:p");
                    }
                    ok = true;
                } else if (key == "dist") {
                    if (value == "tv") {
                        spec.awrf.distance = AwrfOptions::Distance::TotalVariation;
                    } else if (value == "jsd") {
                        spec.awrf.distance = AwrfOptions::Distance::JensenShannon;
                    } else {
                        throw ConfigError(s + ": dist must be tv|jsd");
                    }
                    ok = true;
                } else if (key == "remove") {
                    if (value == "true") spec.awrf.remove_nonrelevant = true;
                    else if (value == "false") spec.awrf.remove_nonrelevant = false;
                    else throw ConfigError(s + ": remove must be true|false");
                    ok = true;
                }
                break;
            case MeasureSpec::Name::Recall:
                break;
        }
        if (!ok) {
            throw ConfigError("measure `" + s + "`: unknown option `" + key + "`");
        }
    }
    return spec;
}

EvalReport evaluate(const RunStore& run, const QrelsStore& qrels,
                    const LanguageMap& langmap, const std::vector<MeasureSpec>& specs) {
    EvalReport report;
    if (qrels.empty()) throw DataError("empty query set: no judged queries");

    auto queries = qrels.queries();
    bool any_overlap = false;
    for (const auto& q : queries) {
        if (run.has_query(q)) {
            any_overlap = true;
            break;
        }
    }
    if (!any_overlap) {
        throw DataError("empty query set: run and qrels share no query");
    }
    for (const auto& q : run.queries()) {
        if (!qrels.judgments(q)) {
            report.warnings.push_back("query " + q + " appears in the run but not in the "
                                      "qrels; ignored");
        }
    }

    for (const auto& spec : specs) {
        MeasureResult result;
        result.measure = spec.label;
        try {
            if (spec.name == MeasureSpec::Name::Peer) {
                PeerOptions opts;
                opts.cutoff = spec.cutoff;
                opts.weights = spec.weights;
                opts.midranks = spec.midranks;
                opts.df_collection = spec.df_collection;
                opts.absent_one = spec.absent_one;
                PeerScore score = peer_aggregate(run, qrels, langmap, opts);
                result.per_query = std::move(score.per_query);
                result.aggregate = score.aggregate;
                result.skipped = std::move(score.skipped);
            } else {
                double sum = 0.0;
                for (const auto& q : queries) {
                    std::optional<double> v;
                    switch (spec.name) {
                        case MeasureSpec::Name::Ndcg:
                            v = ndcg_at(run, qrels, q, spec.cutoff, {spec.linear_gain});
                            break;
                        case MeasureSpec::Name::Recall:
                            v = recall_at(run, qrels, q, spec.cutoff);
                            break;
                        case MeasureSpec::Name::AlphaNdcg:
                            v = alpha_ndcg_at(run, qrels, langmap, q, spec.cutoff,
                                              spec.alpha);
                            break;
                        case MeasureSpec::Name::Awrf: {
                            auto r = awrf_at(run, qrels, langmap, q, spec.cutoff,
                                             spec.awrf);
                            if (r) {
                                v = r->value;
                                if (r->empty_exposure) {
                                    report.warnings.push_back(
                                        spec.label + ": query " + q +
                                        " retrieved no relevant document; scored 0");
                                }
                            }
                            break;
                        }
                        default:
                            break;
                    }
                    if (v) {
                        result.per_query[q] = *v;
                        sum += *v;
                    } else {
                        result.skipped.push_back(q);
                    }
                }
                if (result.per_query.empty()) {
                    throw DataError("no query could be scored");
                }
                result.aggregate = sum / static_cast<double>(result.per_query.size());
            }
        } catch (const DataError& e) {
            throw DataError(std::string("measure ") + spec.label + ": " + e.what());
        }
        report.results.push_back(std::move(result));
    }
    return report;
}

void emit_tsv(const EvalReport& report, std::ostream& out, bool per_query) {
    out << std::fixed << std::setprecision(4);
    for (const auto& r : report.results) {
        if (per_query) {
            for (const auto& [q, v] : r.per_query) {
                out << r.measure << '\t' << q << '\t' << v << '\n';
            }
        }
        out << r.measure << '\t' << "all" << '\t' << r.aggregate << '\n';
    }
}

void emit_json(const EvalReport& report, std::ostream& out) {
    nlohmann::json j;
    j["measures"] = nlohmann::json::array();
    for (const auto& r : report.results) {
        nlohmann::json m;
        m["measure"] = r.measure;
        m["aggregate"] = r.aggregate;
        m["per_query"] = nlohmann::json::object();
        for (const auto& [q, v] : r.per_query) m["per_query"][q] = v;
        m["skipped"] = r.skipped;
        j["measures"].push_back(std::move(m));
    }
    j["diagnostics"]["warnings"] = report.warnings;
    out << j.dump(2) << '\n';
}

EvalReport parse_report_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    EvalReport report;
    for (const auto& m : j.at("measures")) {
        MeasureResult r;
        r.measure = m.at("measure").get<std::string>();
        r.aggregate = m.at("aggregate").get<double>();
        for (const auto& [q, v] : m.at("per_query").items()) {
            r.per_query[q] = v.get<double>();
        }
        r.skipped = m.at("skipped").get<std::vector<QueryId>>();
        report.results.push_back(std::move(r));
    }
    report.warnings = j.at("diagnostics").at("warnings").get<std::vector<std::string>>();
    return report;
}

}  // namespace peerkit
