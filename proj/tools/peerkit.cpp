#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "peerkit/io.hpp"
#include "peerkit/peer.hpp"
#include "peerkit/synth.hpp"

namespace {

using namespace peerkit;

std::pair<std::string, std::string> split_kv(const std::string& s, const std::string& what) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
        throw ConfigError(what + " must be KEY=VALUE, got `" + s + "`");
    }
    return {s.substr(0, eq), s.substr(eq + 1)};
}

int run_eval(const std::string& run_path, const std::string& qrels_path,
             const std::string& langmap_path, const std::vector<std::string>& measures,
             const std::string& out_path, const std::string& format, bool per_query,
             bool strict_ranks) {
    std::vector<MeasureSpec> specs;
    specs.reserve(measures.size());
    for (const auto& m : measures) specs.push_back(parse_measure_spec(m));

    RunStore run = parse_run_file(run_path, strict_ranks);
    QrelsStore qrels = parse_qrels_file(qrels_path);
    LanguageMap langmap = parse_langmap_file(langmap_path);

    EvalReport report = evaluate(run, qrels, langmap, specs);

    std::ostringstream buffer;
    if (format == "tsv") {
        emit_tsv(report, buffer, per_query);
    } else {
        emit_json(report, buffer);
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << buffer.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << buffer.str();
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

int run_synth(const std::string& pattern, const std::vector<std::string>& params,
              const std::string& out_prefix) {
    std::map<std::string, int> p;
    for (const auto& kv : params) {
        auto [k, v] = split_kv(kv, "--params");
        try {
            p[k] = std::stoi(v);
        } catch (const std::exception&) {
            throw ConfigError("--params " + k + ": not an integer: `" + v + "`");
        }
    }
    auto get = [&](const std::string& key) {
        auto it = p.find(key);
        if (it == p.end()) {
            throw ConfigError("pattern " + pattern + " needs --params " + key + "=N");
        }
        return it->second;
    };

    SynthData data;
    if (pattern == "shifting") {
        data = gen_shifting(get("n"), get("step"));
    } else if (pattern == "moving_single") {
        data = gen_moving_single(get("n"), get("pos"));
    } else if (pattern == "interleaving") {
        data = gen_interleaving(get("length"));
    } else if (pattern == "increasing_length") {
        data = gen_increasing_length(get("total"), get("prefix"));
    } else {
        throw ConfigError("unknown pattern `" + pattern + "`");
    }

    auto write_to = [&](const std::string& suffix, auto&& writer) {
        std::string path = out_prefix + suffix;
        std::ofstream out(path);
        if (!out) throw DataError("cannot write " + path);
        writer(out);
        std::cerr << "wrote " << path << '\n';
    };
    write_to(".run", [&](std::ostream& o) { write_run(data.run, o, "peerkit-synth"); });
    write_to(".qrels", [&](std::ostream& o) { write_qrels(data.qrels, o); });
    write_to(".langmap", [&](std::ostream& o) { write_langmap(data.langmap, o); });
    return 0;
}

int run_assign(const std::string& run_path, const std::string& qrels_path,
               const std::vector<std::string>& means,
               const std::vector<std::string>& nonrel_means, double sigma,
               double min_share, int trials, std::uint64_t seed,
               const std::string& out_prefix, const std::string& measure) {
    AssignmentSpec spec;
    for (const auto& kv : means) {
        auto [lang, mu] = split_kv(kv, "--mean");
        spec.relevant_means[lang] = std::stod(mu);
    }
    for (const auto& kv : nonrel_means) {
        auto [lang, mu] = split_kv(kv, "--nonrel-mean");
        spec.nonrelevant_means[lang] = std::stod(mu);
    }
    spec.sigma = sigma;
    spec.min_nonrel_share = min_share;
    spec.trials = trials;
    spec.seed = seed;

    RunStore run = parse_run_file(run_path);
    QrelsStore qrels = parse_qrels_file(qrels_path);
    auto maps = assign_languages(run, qrels, spec);

    if (!out_prefix.empty()) {
        for (std::size_t t = 0; t < maps.size(); ++t) {
            std::ostringstream name;
            name << out_prefix << ".t" << std::setw(3) << std::setfill('0') << t
                 << ".langmap";
            std::ofstream out(name.str());
            if (!out) throw DataError("cannot write " + name.str());
            write_langmap(maps[t], out);
        }
        std::cerr << "wrote " << maps.size() << " language maps with prefix " << out_prefix
                  << '\n';
    }
    if (!measure.empty()) {
        MeasureSpec ms = parse_measure_spec(measure);
        double sum = 0.0;
        for (const auto& lm : maps) {
            EvalReport report = evaluate(run, qrels, lm, {ms});
            sum += report.results.front().aggregate;
        }
        std::cout << measure << "\tmean-over-" << maps.size() << "-trials\t" << std::fixed
                  << std::setprecision(4) << sum / static_cast<double>(maps.size())
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peerkit: language-fairness evaluation of multilingual ranked lists"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a run against qrels and a language map");
    std::string run_path, qrels_path, langmap_path, out_path, format = "tsv";
    std::vector<std::string> measures;
    bool per_query_flag = false, strict_ranks = false;
    eval->add_option("--run", run_path, "TREC run file")->required();
    eval->add_option("--qrels", qrels_path, "TREC qrels file")->required();
    eval->add_option("--langmap", langmap_path, "docid<TAB>language file")->required();
    eval->add_option("--measure", measures, "measure string, e.g. PEER@20")->required();
    eval->add_option("--out", out_path, "output file (default stdout)");
    eval->add_option("--format", format, "tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}));
    eval->add_flag("--per-query", per_query_flag, "emit per-query rows");
    eval->add_flag("--strict-ranks", strict_ranks,
                   "honor run file order instead of re-sorting by score");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic patterned ranked list");
    std::string pattern, out_prefix;
    std::vector<std::string> params;
    synth->add_option("--pattern", pattern,
                      "shifting|moving_single|interleaving|increasing_length")
        ->required();
    synth->add_option("--params", params, "pattern parameters K=V");
    synth->add_option("--out-prefix", out_prefix, "output path prefix")->required();

    // assign
    auto* assign = app.add_subcommand(
        "assign", "reassign document languages with normal draws per trial");
    std::string a_run, a_qrels, a_prefix, a_measure;
    std::vector<std::string> a_means, a_nonrel_means;
    double a_sigma = 1.0, a_share = 0.45;
    int a_trials = 1;
    std::uint64_t a_seed = 0;
    assign->add_option("--run", a_run, "TREC run file")->required();
    assign->add_option("--qrels", a_qrels, "TREC qrels file")->required();
    assign->add_option("--mean", a_means, "relevant-doc sampling mean LANG=MU (twice)")
        ->required();
    assign->add_option("--nonrel-mean", a_nonrel_means,
                       "nonrelevant-doc sampling mean LANG=MU (defaults to --mean)");
    assign->add_option("--sigma", a_sigma, "normal draw sigma");
    assign->add_option("--min-share", a_share, "minimum nonrelevant share per language");
    assign->add_option("--trials", a_trials, "number of trials");
    assign->add_option("--seed", a_seed, "RNG seed");
    assign->add_option("--out-prefix", a_prefix, "write PREFIX.tNNN.langmap per trial");
    assign->add_option("--measure", a_measure,
                       "also evaluate each trial and print the mean, e.g. PEER@20");

    try {
        app.parse(argc, argv);
        if (eval->parsed()) {
            return run_eval(run_path, qrels_path, langmap_path, measures, out_path, format,
                            per_query_flag, strict_ranks);
        }
        if (synth->parsed()) return run_synth(pattern, params, out_prefix);
        if (assign->parsed()) {
            return run_assign(a_run, a_qrels, a_means, a_nonrel_means, a_sigma, a_share,
                              a_trials, a_seed, a_prefix, a_measure);
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    } catch (const peerkit::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const peerkit::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
