#include <doctest.h>

#include <cmath>

#include "peerkit/peer.hpp"
#include "peerkit/synth.hpp"

using namespace peerkit;

namespace {

RunStore list_run(const QueryId& q, const std::vector<DocId>& docs) {
    std::vector<RunEntry> entries;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        entries.push_back({docs[i], 1.0 / static_cast<double>(i + 1), 0});
    }
    RunStore run;
    run.set_list(q, std::move(entries));
    return run;
}

}  // namespace

TEST_CASE("peer_level scores 1.0 when nothing at the level is retrieved") {
    QrelsStore qrels;
    qrels.add("q1", "a", 1);
    qrels.add("q1", "b", 1);
    LanguageMap lm;
    lm.add("a", "LangA");
    lm.add("b", "LangB");
    lm.add("x", "LangA");
    RunStore run = list_run("q1", {"x"});

    PeerOptions opts;
    opts.cutoff = 20;
    auto p = peer_level(run, qrels, lm, "q1", 1, opts);
    REQUIRE(p);
    CHECK(*p == 1.0);
}

TEST_CASE("peer_level marks levels absent from the collection") {
    QrelsStore qrels;
    qrels.add("q1", "a", 1);
    LanguageMap lm;
    lm.add("a", "LangA");
    RunStore run = list_run("q1", {"a"});

    PeerOptions opts;
    CHECK(!peer_level(run, qrels, lm, "q1", 2, opts));

    opts.absent_one = true;
    auto p = peer_level(run, qrels, lm, "q1", 2, opts);
    REQUIRE(p);
    CHECK(*p == 1.0);
}

TEST_CASE("peer_level on alternating languages is exactly 1") {
    SynthData data = gen_interleaving(7);
    PeerOptions opts;
    opts.cutoff = 20;
    auto p = peer_level(data.run, data.qrels, data.langmap, data.query, 1, opts);
    REQUIRE(p);
    CHECK(*p == 1.0);
}

TEST_CASE("peer_level on fully separated languages is near zero") {
    SynthData data = gen_shifting(25, 0);
    PeerOptions opts;
    opts.cutoff = 50;
    auto p = peer_level(data.run, data.qrels, data.langmap, data.query, 1, opts);
    REQUIRE(p);
    CHECK(*p < 0.001);
    // frozen from the variance-ratio form: H = 36.7647..., df = 1
    CHECK(*p == doctest::Approx(1.332814294054072e-09).epsilon(1e-6));
}

TEST_CASE("peer_query combines level p-values with renormalized weights") {
    // level 1: a,b retrieved interleaved across languages -> p in (0,1]
    // level 2: nothing retrieved -> p = 1.0
    QrelsStore qrels;
    qrels.add("q1", "a1", 1);
    qrels.add("q1", "b1", 1);
    qrels.add("q1", "a2", 2);
    LanguageMap lm;
    for (auto d : {"a1", "a2"}) lm.add(d, "LangA");
    lm.add("b1", "LangB");
    RunStore run = list_run("q1", {"a1", "b1"});

    PeerOptions opts;
    opts.cutoff = 20;
    auto p1 = peer_level(run, qrels, lm, "q1", 1, opts);
    auto p2 = peer_level(run, qrels, lm, "q1", 2, opts);
    REQUIRE(p1);
    REQUIRE(p2);
    CHECK(*p2 == 1.0);

    opts.weights = {{0, 0.0}, {1, 0.5}, {2, 0.5}};
    auto pq = peer_query(run, qrels, lm, "q1", opts);
    REQUIRE(pq);
    CHECK(*pq == doctest::Approx(0.5 * *p1 + 0.5 * *p2).epsilon(1e-12));

    // all weight on a single judged level renormalizes to that level
    opts.weights = {{1, 0.25}};
    pq = peer_query(run, qrels, lm, "q1", opts);
    REQUIRE(pq);
    CHECK(*pq == doctest::Approx(*p1).epsilon(1e-12));
}

TEST_CASE("peer_query rejects all-zero weights") {
    QrelsStore qrels;
    qrels.add("q1", "a", 1);
    LanguageMap lm;
    lm.add("a", "LangA");
    RunStore run = list_run("q1", {"a"});
    PeerOptions opts;
    opts.weights = {{0, 0.0}, {1, 0.0}};
    CHECK_THROWS_AS(peer_query(run, qrels, lm, "q1", opts), ConfigError);
}

TEST_CASE("peer_query excludes queries with only nonrelevant judgments") {
    QrelsStore qrels;
    qrels.add("q1", "a", 0);
    LanguageMap lm;
    lm.add("a", "LangA");
    RunStore run = list_run("q1", {"a"});
    PeerOptions opts;  // default weights put 0 on grade 0
    CHECK(!peer_query(run, qrels, lm, "q1", opts));
}

TEST_CASE("single-language collection scores 1.0 everywhere") {
    QrelsStore qrels;
    RunStore run;
    LanguageMap lm;
    for (int q = 1; q <= 3; ++q) {
        QueryId qid = "q" + std::to_string(q);
        std::vector<RunEntry> entries;
        for (int i = 0; i < 5; ++i) {
            DocId d = qid + "-d" + std::to_string(i);
            qrels.add(qid, d, 1);
            lm.add(d, "only");
            entries.push_back({d, 1.0 / (i + 1.0), 0});
        }
        run.set_list(qid, std::move(entries));
    }
    PeerOptions opts;
    PeerScore score = peer_aggregate(run, qrels, lm, opts);
    CHECK(score.aggregate == 1.0);
    for (const auto& [_, v] : score.per_query) CHECK(v == 1.0);
}

TEST_CASE("peer_aggregate averages per-query scores and reports skips") {
    // q1 fully separated (p ~ 0), q2 alternating odd (p = 1), q3 unjudged-only
    QrelsStore qrels;
    RunStore run;
    LanguageMap lm;

    auto add_query = [&](const QueryId& qid, const std::vector<Language>& order) {
        std::vector<RunEntry> entries;
        for (std::size_t i = 0; i < order.size(); ++i) {
            DocId d = qid + "-d" + std::to_string(i);
            qrels.add(qid, d, 1);
            lm.add(d, order[i]);
            entries.push_back({d, 1.0 / static_cast<double>(i + 1), 0});
        }
        run.set_list(qid, std::move(entries));
    };
    add_query("q1", {"A", "A", "A", "B", "B", "B"});
    add_query("q2", {"A", "B", "A", "B", "A"});
    qrels.add("q3", "q3-d0", 0);
    lm.add("q3-d0", "A");
    run.set_list("q3", {{"q3-d0", 1.0, 0}});

    PeerOptions opts;
    opts.cutoff = 20;
    PeerScore score = peer_aggregate(run, qrels, lm, opts);
    CHECK(score.per_query.size() == 2);
    CHECK(score.skipped == std::vector<QueryId>{"q3"});
    double expected = (score.per_query.at("q1") + score.per_query.at("q2")) / 2.0;
    CHECK(score.aggregate == doctest::Approx(expected).epsilon(1e-15));
    CHECK(score.per_query.at("q2") == 1.0);
}

TEST_CASE("peer_aggregate fails when no query can be scored") {
    QrelsStore qrels;
    qrels.add("q1", "a", 0);
    LanguageMap lm;
    lm.add("a", "A");
    RunStore run = list_run("q1", {"a"});
    CHECK_THROWS_AS(peer_aggregate(run, qrels, lm, {}), DataError);
}

TEST_CASE("PEER is invariant to language relabeling") {
    SynthData data = gen_shifting(10, 4);
    PeerOptions opts;
    opts.cutoff = 20;
    auto p = peer_query(data.run, data.qrels, data.langmap, data.query, opts);

    LanguageMap swapped;
    for (const auto& [d, l] : data.langmap.items()) {
        swapped.add(d, l == "LangA" ? "LangB" : "LangA");
    }
    auto p2 = peer_query(data.run, data.qrels, swapped, data.query, opts);
    REQUIRE(p);
    REQUIRE(p2);
    CHECK(*p == doctest::Approx(*p2).epsilon(1e-15));
}

TEST_CASE("binary PEER depends only on relevant-document positions") {
    // Mutating nonrelevant docs (here: swapping two of them) without moving
    // relevant documents leaves PEER unchanged.
    QrelsStore qrels;
    LanguageMap lm;
    std::vector<DocId> docs = {"n1", "r1", "n2", "r2", "n3", "r3"};
    for (const auto& d : docs) {
        qrels.add("q1", d, d[0] == 'r' ? 1 : 0);
        lm.add(d, d == "r1" || d == "n1" || d == "n2" ? "LangA" : "LangB");
    }
    RunStore run = list_run("q1", docs);
    RunStore mutated = list_run("q1", {"n3", "r1", "n1", "r2", "n2", "r3"});

    PeerOptions opts;
    opts.cutoff = 10;
    auto a = peer_query(run, qrels, lm, "q1", opts);
    auto b = peer_query(mutated, qrels, lm, "q1", opts);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
}

TEST_CASE("shifting endpoints move from unfair to fair") {
    PeerOptions opts;
    opts.cutoff = 50;
    SynthData lo = gen_shifting(25, 0);
    SynthData hi = gen_shifting(25, 25);
    auto p_lo = peer_query(lo.run, lo.qrels, lo.langmap, lo.query, opts);
    auto p_hi = peer_query(hi.run, hi.qrels, hi.langmap, hi.query, opts);
    REQUIRE(p_lo);
    REQUIRE(p_hi);
    CHECK(*p_hi > *p_lo);
    // For 50 documents the fully alternating list sits near 0.81, the
    // separated one near 1.3e-9.
    CHECK(*p_hi - *p_lo > 0.8);
    CHECK(*p_hi == doctest::Approx(0.8083651559145103).epsilon(1e-9));
}

TEST_CASE("odd interleaves are exactly fair, even ones approach fairness") {
    PeerOptions opts;
    opts.cutoff = 200;
    for (int len : {3, 9, 51, 99}) {
        SynthData d = gen_interleaving(len);
        auto p = peer_query(d.run, d.qrels, d.langmap, d.query, opts);
        REQUIRE(p);
        CHECK(*p == 1.0);
    }
    double prev = 0.0;
    for (int len : {8, 10, 40, 100}) {
        SynthData d = gen_interleaving(len);
        auto p = peer_query(d.run, d.qrels, d.langmap, d.query, opts);
        REQUIRE(p);
        CHECK(*p < 1.0);
        CHECK(*p > prev);
        prev = *p;
    }
}
