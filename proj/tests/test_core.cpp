#include <doctest.h>

#include <algorithm>
#include <random>

#include "peerkit/core.hpp"

using namespace peerkit;

TEST_CASE("canonicalize_run sorts by score descending") {
    auto out = canonicalize_run({{"dA", 2.0, 9}, {"dB", 3.0, 7}});
    REQUIRE(out.size() == 2);
    CHECK(out[0].doc == "dB");
    CHECK(out[0].rank == 1);
    CHECK(out[1].doc == "dA");
    CHECK(out[1].rank == 2);
}

TEST_CASE("canonicalize_run breaks score ties by doc id") {
    auto out = canonicalize_run({{"dB", 1.0, 0}, {"dA", 1.0, 0}});
    CHECK(out[0].doc == "dA");
    CHECK(out[1].doc == "dB");
}

TEST_CASE("canonicalize_run rejects duplicate documents") {
    CHECK_THROWS_WITH_AS(canonicalize_run({{"dA", 1.0, 0}, {"dA", 0.5, 0}}),
                         doctest::Contains("dA"), DataError);
}

TEST_CASE("canonicalize_run is idempotent and permutation-invariant") {
    std::mt19937 rng(7);
    std::vector<RunEntry> entries;
    for (int i = 0; i < 40; ++i) {
        entries.push_back({"doc" + std::to_string(i),
                           static_cast<double>(rng() % 10), 0});
    }
    auto once = canonicalize_run(entries);
    auto twice = canonicalize_run(once);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(twice[i].doc == once[i].doc);
        CHECK(twice[i].rank == once[i].rank);
    }
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(entries.begin(), entries.end(), rng);
        auto again = canonicalize_run(entries);
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(again[i].doc == once[i].doc);
            CHECK(again[i].rank == once[i].rank);
        }
    }
}

TEST_CASE("qrels store rejects duplicates and negative grades") {
    QrelsStore qrels;
    qrels.add("q1", "d1", 2);
    CHECK_THROWS_AS(qrels.add("q1", "d1", 2), DataError);
    CHECK_THROWS_AS(qrels.add("q1", "d2", -1), DataError);
    CHECK(qrels.grade("q1", "d1") == 2);
    CHECK(!qrels.grade("q1", "dX"));
    CHECK(qrels.grade_levels("q1") == std::set<int>{2});
}

TEST_CASE("language map conflicts") {
    LanguageMap lm;
    lm.add("d1", "fas");
    lm.add("d1", "fas");  // consistent duplicate
    CHECK_THROWS_WITH_AS(lm.add("d1", "rus"), doctest::Contains("d1"), DataError);
    CHECK_THROWS_AS(lm.require("dX"), DataError);
    CHECK(lm.languages() == std::set<Language>{"fas"});
}

namespace {

RunStore make_run(const std::vector<DocId>& docs) {
    std::vector<RunEntry> entries;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        entries.push_back({docs[i], 1.0 / static_cast<double>(i + 1), 0});
    }
    RunStore run;
    run.set_list("q1", std::move(entries));
    return run;
}

}  // namespace

TEST_CASE("build_level_sample applies the cutoff-plus-one rule") {
    // a(LangA, rank 2), b(LangB, rank 4), c(LangA, unretrieved), d(LangB, rank 9)
    RunStore run = make_run({"x1", "a", "x2", "b", "x3", "x4", "x5", "x6", "d"});
    QrelsStore qrels;
    for (auto d : {"a", "b", "c", "d"}) qrels.add("q1", d, 1);
    LanguageMap lm;
    lm.add("a", "LangA");
    lm.add("c", "LangA");
    lm.add("b", "LangB");
    lm.add("d", "LangB");

    auto sample = build_level_sample(run, qrels, lm, "q1", 1, 5);
    CHECK(sample.groups.at("LangA") == std::vector<double>{2.0, 6.0});
    CHECK(sample.groups.at("LangB") == std::vector<double>{4.0, 6.0});
    CHECK(sample.total_size() == 4);
}

TEST_CASE("build_level_sample edge cases") {
    RunStore run = make_run({"a", "b"});
    QrelsStore qrels;
    qrels.add("q1", "a", 1);
    qrels.add("q1", "b", 1);
    LanguageMap lm;
    lm.add("a", "LangA");
    lm.add("b", "LangB");

    SUBCASE("no grade-k docs gives an empty sample") {
        CHECK(build_level_sample(run, qrels, lm, "q1", 5, 10).total_size() == 0);
    }
    SUBCASE("all docs unretrieved score cutoff+1") {
        RunStore empty;
        empty.set_list("q1", {});
        auto sample = build_level_sample(empty, qrels, lm, "q1", 1, 20);
        CHECK(sample.groups.at("LangA") == std::vector<double>{21.0});
        CHECK(sample.groups.at("LangB") == std::vector<double>{21.0});
    }
    SUBCASE("missing language fails loudly") {
        LanguageMap partial;
        partial.add("a", "LangA");
        CHECK_THROWS_WITH_AS(build_level_sample(run, qrels, partial, "q1", 1, 5),
                             doctest::Contains("b"), DataError);
    }
    SUBCASE("unjudged retrieved documents never enter the sample") {
        RunStore wide = make_run({"z1", "a", "z2", "b", "z3"});
        auto sample = build_level_sample(wide, qrels, lm, "q1", 1, 5);
        CHECK(sample.total_size() == 2);
        CHECK(sample.groups.at("LangA") == std::vector<double>{2.0});
        CHECK(sample.groups.at("LangB") == std::vector<double>{4.0});
    }
}

TEST_CASE("sample rank-values below cutoff+1 are distinct") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DocId> docs;
        for (int i = 0; i < 30; ++i) docs.push_back("d" + std::to_string(i));
        std::shuffle(docs.begin(), docs.end(), rng);
        RunStore run = make_run(docs);
        QrelsStore qrels;
        LanguageMap lm;
        for (int i = 0; i < 30; ++i) {
            std::string d = "d" + std::to_string(i);
            qrels.add("q1", d, static_cast<int>(rng() % 2));
            lm.add(d, rng() % 2 ? "LangA" : "LangB");
        }
        int cutoff = 10;
        auto sample = build_level_sample(run, qrels, lm, "q1", 1, cutoff);
        std::vector<double> below;
        for (const auto& [_, vs] : sample.groups) {
            for (double v : vs) {
                CHECK(v <= cutoff + 1.0);
                if (v < cutoff + 1.0) below.push_back(v);
            }
        }
        std::sort(below.begin(), below.end());
        CHECK(std::adjacent_find(below.begin(), below.end()) == below.end());
        CHECK(sample.total_size() == qrels.docs_at_level("q1", 1).size());
    }
}
