#include "doctest.h"
#include "narnet/exports.hpp"
#include "narnet/testkit.hpp"

using namespace narnet;

TEST_CASE("series CSV is stable through a round trip") {
    InteractionTimeline timeline = interactions_from_truth(testkit::fixture_couple());
    DynamicGraphSeries series = build_smoothed_series(timeline, {});
    std::string once = series_to_csv(series);
    CHECK(once.rfind("scene,char_i,char_j,weight,method,params\n", 0) == 0);
    CHECK(once.find(",smooth,lambda=0.01") != std::string::npos);

    std::vector<Diagnostic> diagnostics;
    auto parsed = series_from_csv(once, "csv", diagnostics);
    REQUIRE(parsed.has_value());
    CHECK(diagnostics.empty());
    CHECK(parsed->method == SeriesMethod::NarrativeSmoothing);
    CHECK(parsed->params.lambda == 0.01);
    REQUIRE(parsed->snapshots.size() == series.snapshots.size());
    for (const auto& snapshot : parsed->snapshots)
        CHECK(snapshot.graph.scheme == WeightScheme::Normalized);
    CHECK(series_to_csv(*parsed) == once);

    DynamicGraphSeries sliced = build_time_slice_series(timeline, 2, 2);
    std::string slice_csv = series_to_csv(sliced);
    auto parsed_slice = series_from_csv(slice_csv, "csv", diagnostics);
    REQUIRE(parsed_slice.has_value());
    CHECK(parsed_slice->params.window == 2);
    CHECK(parsed_slice->params.stride == 2);
    CHECK(series_to_csv(*parsed_slice) == slice_csv);
}

TEST_CASE("series CSV rejects malformed input") {
    std::vector<Diagnostic> diagnostics;
    SUBCASE("bad header") {
        CHECK_FALSE(series_from_csv("scene,a,b\n", "x", diagnostics).has_value());
        CHECK(diagnostics[0].message.find("header") != std::string::npos);
    }
    SUBCASE("no rows") {
        CHECK_FALSE(series_from_csv("scene,char_i,char_j,weight,method,params\n", "x",
                                    diagnostics)
                        .has_value());
        CHECK(diagnostics[0].message.find("no rows") != std::string::npos);
    }
    SUBCASE("method changes midway") {
        std::string text =
            "scene,char_i,char_j,weight,method,params\n"
            "1,A,B,1,cumulative,\n"
            "2,A,B,2,slice,window=2;stride=1\n";
        CHECK_FALSE(series_from_csv(text, "x", diagnostics).has_value());
        CHECK(diagnostics[0].message.find("midway") != std::string::npos);
    }
    SUBCASE("unknown method") {
        std::string text =
            "scene,char_i,char_j,weight,method,params\n"
            "1,A,B,1,mystery,\n";
        CHECK_FALSE(series_from_csv(text, "x", diagnostics).has_value());
        CHECK(diagnostics[0].message.find("unknown method") != std::string::npos);
    }
    SUBCASE("self-loop row") {
        std::string text =
            "scene,char_i,char_j,weight,method,params\n"
            "1,A,A,1,cumulative,\n";
        CHECK_FALSE(series_from_csv(text, "x", diagnostics).has_value());
    }
}

TEST_CASE("hypotheses TSV round trip") {
    Corpus corpus = testkit::fixture_couple();
    auto hyps = infer_corpus(corpus, Ruleset::Rules1234);
    std::string once = hypotheses_to_tsv(hyps);

    std::vector<Diagnostic> diagnostics;
    auto parsed = hypotheses_from_tsv(once, corpus, "tsv", diagnostics);
    REQUIRE(parsed.has_value());
    CHECK(diagnostics.empty());
    REQUIRE(parsed->size() == hyps.size());
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        REQUIRE((*parsed)[i].size() == hyps[i].size());
        for (std::size_t j = 0; j < hyps[i].size(); ++j) {
            CHECK((*parsed)[i][j].utterance_id == hyps[i][j].utterance_id);
            CHECK((*parsed)[i][j].addressees == hyps[i][j].addressees);
            CHECK((*parsed)[i][j].rule == hyps[i][j].rule);
        }
    }
    CHECK(hypotheses_to_tsv(*parsed) == once);
}

TEST_CASE("hypotheses TSV validation") {
    Corpus corpus = testkit::fixture_couple();
    std::vector<Diagnostic> diagnostics;
    SUBCASE("unknown utterance id") {
        auto r = hypotheses_from_tsv("999\tClaire\tR1\n", corpus, "x", diagnostics);
        CHECK_FALSE(r.has_value());
        CHECK(diagnostics[0].message.find("unknown utterance id") != std::string::npos);
    }
    SUBCASE("duplicate row") {
        auto r = hypotheses_from_tsv("0\tClaire\tR1\n0\tClaire\tR1\n", corpus, "x", diagnostics);
        CHECK_FALSE(r.has_value());
        CHECK(diagnostics[0].message.find("duplicate") != std::string::npos);
    }
    SUBCASE("rule present without addressees") {
        auto r = hypotheses_from_tsv("0\t~\tR1\n", corpus, "x", diagnostics);
        CHECK_FALSE(r.has_value());
        CHECK(diagnostics[0].message.find("rule must be present") != std::string::npos);
    }
    SUBCASE("addressees present without a rule") {
        auto r = hypotheses_from_tsv("0\tClaire\t-\n", corpus, "x", diagnostics);
        CHECK_FALSE(r.has_value());
    }
    SUBCASE("unknown rule") {
        auto r = hypotheses_from_tsv("0\tClaire\tR9\n", corpus, "x", diagnostics);
        CHECK_FALSE(r.has_value());
        CHECK(diagnostics[0].message.find("unknown rule") != std::string::npos);
    }
    SUBCASE("subset coverage leaves the rest unassigned") {
        auto r = hypotheses_from_tsv("# header\n0\tClaire\tR1\n", corpus, "x", diagnostics);
        REQUIRE(r.has_value());
        CHECK((*r)[0][0].addressees == std::set<SpeakerId>{"Claire"});
        CHECK((*r)[0][1].addressees.empty());
        CHECK((*r)[0][1].utterance_id == corpus.scenes[0].utterances[1].id);
    }
}

TEST_CASE("dynamic GEXF output") {
    InteractionTimeline timeline = interactions_from_truth(testkit::fixture_couple());
    DynamicGraphSeries series = build_smoothed_series(timeline, {});
    std::string gexf = to_gexf(series);

    CHECK(gexf.find("<?xml version=\"1.0\"") == 0);
    CHECK(gexf.find("mode=\"dynamic\"") != std::string::npos);
    CHECK(gexf.find("timeformat=\"double\"") != std::string::npos);
    CHECK(gexf.find("start=\"1\" end=\"5\"") != std::string::npos);
    CHECK(gexf.find("label=\"Francis\"") != std::string::npos);

    std::size_t edges = 0, pos = 0;
    while ((pos = gexf.find("<edge ", pos)) != std::string::npos) {
        ++edges;
        pos += 6;
    }
    CHECK(edges == 3);

    std::size_t spells = 0;
    pos = 0;
    while ((pos = gexf.find("<attvalue ", pos)) != std::string::npos) {
        ++spells;
        pos += 10;
    }
    CHECK(spells == 12);  // 3 pairs x 4 scenes
    CHECK(gexf.find("end=\"5\"/>") != std::string::npos);  // last spell runs to the edge
}

TEST_CASE("static GEXF output escapes labels") {
    WeightedGraph graph;
    graph.nodes = {"A&B <x>", "C"};
    graph.edges[PairKey("A&B <x>", "C")] = 1.5;
    std::string gexf = to_gexf(graph);
    CHECK(gexf.find("mode=\"static\"") != std::string::npos);
    CHECK(gexf.find("label=\"A&amp;B &lt;x&gt;\"") != std::string::npos);
    CHECK(gexf.find("weight=\"1.5\"") != std::string::npos);
}

TEST_CASE("interaction and trajectory CSV formats") {
    Scene scene;
    scene.index = 1;
    Utterance u;
    u.id = 0;
    u.scene_index = 1;
    u.speaker = "A";
    u.start_ms = 0;
    u.end_ms = 1900;
    scene.utterances.push_back(u);
    std::vector<AddresseeHypothesis> hyps(1);
    hyps[0].utterance_id = 0;
    hyps[0].addressees = {"B"};
    hyps[0].rule = RuleId::R2;

    auto rows = directed_interactions(scene, hyps);
    CHECK(interactions_to_csv(rows) == "scene,from,to,count,seconds\n1,A,B,1,1.9\n");

    std::vector<std::pair<int, double>> values{{1, 0.5}, {2, 1.0}};
    CHECK(scene_values_to_csv(values) == "scene,value\n1,0.5\n2,1\n");
}
