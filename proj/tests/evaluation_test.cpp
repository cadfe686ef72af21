#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "narnet/evaluation.hpp"
#include "narnet/testkit.hpp"

using namespace narnet;

namespace {

LabeledItem item(int id, std::set<SpeakerId> gamma, std::set<SpeakerId> reference) {
    return {id, std::move(gamma), std::move(reference)};
}

}  // namespace

TEST_CASE("multilabel recall, precision and F-score") {
    LabeledUtteranceSet set;
    set.items.push_back(item(0, {"B"}, {"B"}));
    set.items.push_back(item(1, {"B"}, {"B", "C"}));
    set.items.push_back(item(2, {}, {"B"}));  // unassigned: 0 recall, no precision term
    MultilabelScores s = multilabel_scores(set);
    CHECK(s.scored_items == 3);
    CHECK(s.predicted_items == 2);
    CHECK(s.recall == doctest::Approx(0.5));
    CHECK(s.precision == doctest::Approx(1.0));
    CHECK(s.fscore == doctest::Approx(2.0 / 3.0));

    SUBCASE("wrong guesses hurt both sides") {
        set.items.push_back(item(3, {"X"}, {"B"}));
        MultilabelScores s2 = multilabel_scores(set);
        CHECK(s2.recall == doctest::Approx(1.5 / 4.0));
        CHECK(s2.precision == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("monologues are scored separately") {
        set.items.push_back(item(3, {}, {}));     // correctly left silent
        set.items.push_back(item(4, {"B"}, {}));  // spurious assignment
        MultilabelScores s2 = multilabel_scores(set);
        CHECK(s2.monologue_items == 2);
        CHECK(s2.monologue_correct == 1);
        CHECK(s2.scored_items == 3);  // unchanged
        CHECK(s2.recall == doctest::Approx(0.5));
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(multilabel_scores(LabeledUtteranceSet{}), std::invalid_argument);
    }
    SUBCASE("nothing predicted anywhere") {
        LabeledUtteranceSet silent;
        silent.items.push_back(item(0, {}, {"B"}));
        MultilabelScores s2 = multilabel_scores(silent);
        CHECK(s2.recall == 0.0);
        CHECK(s2.precision == 0.0);
        CHECK(s2.fscore == 0.0);
    }
}

TEST_CASE("labeled set construction") {
    Corpus corpus = testkit::fixture_couple();
    // Un-annotate one utterance, blank another to a monologue.
    corpus.scenes[0].utterances[0].truth_addressees = std::nullopt;
    corpus.scenes[1].utterances[0].truth_addressees = std::set<SpeakerId>{};

    auto hyps = infer_corpus(corpus, Ruleset::Rules1);  // two-turn scenes: nothing assigned
    auto full = build_labeled_set(corpus, hyps, false);
    CHECK(full.items.size() == 7);  // 8 utterances minus the unannotated one

    auto covered = build_labeled_set(corpus, hyps, true);
    CHECK(covered.items.size() == 1);  // only the monologue item survives
    CHECK(covered.items[0].reference.empty());

    auto wide = infer_corpus(corpus, Ruleset::Rules12);  // boundaries now assigned
    auto covered2 = build_labeled_set(corpus, wide, true);
    CHECK(covered2.items.size() == 7);
    MultilabelScores s = multilabel_scores(covered2);
    CHECK(s.recall == doctest::Approx(1.0));  // rule 2 recovers the dialogue truth
    CHECK(s.precision == doctest::Approx(1.0));
    CHECK(s.monologue_items == 1);
    CHECK(s.monologue_correct == 0);  // rule 2 guesses a partner in a monologue scene
}

TEST_CASE("network vectorization uses the united sorted node set") {
    WeightedGraph g1;
    g1.nodes = {"Ann", "Cara"};
    g1.edges[PairKey("Ann", "Cara")] = 2.0;
    WeightedGraph g2;
    g2.nodes = {"Ann", "Ben"};
    g2.edges[PairKey("Ann", "Ben")] = 1.0;

    auto [v1, v2] = network_vectorize(g1, g2);
    // Pairs in order: (Ann,Ben), (Ann,Cara), (Ben,Cara).
    CHECK(v1 == std::vector<double>{0.0, 2.0, 0.0});
    CHECK(v2 == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("edge jaccard ignores weights") {
    WeightedGraph g1, g2;
    g1.nodes = g2.nodes = {"A", "B", "C"};
    CHECK(edge_jaccard(g1, g2) == 1.0);  // both empty
    g1.edges[PairKey("A", "B")] = 5.0;
    g2.edges[PairKey("A", "B")] = 0.1;
    g2.edges[PairKey("A", "C")] = 1.0;
    CHECK(edge_jaccard(g1, g2) == doctest::Approx(0.5));
    CHECK(edge_jaccard(g2, g1) == doctest::Approx(0.5));
}

TEST_CASE("cosine and normalized L2") {
    std::vector<double> v1{1.0, 0.0};
    std::vector<double> v2{1.0, 1.0};
    CHECK(*cosine_similarity(v1, v2) == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(*normalized_l2(v1, v2) == doctest::Approx(0.76537).epsilon(1e-5));
    CHECK(*cosine_similarity(v1, v1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*normalized_l2(v1, v1) == 0.0);

    std::vector<double> zero{0.0, 0.0};
    CHECK_FALSE(cosine_similarity(v1, zero).has_value());
    CHECK_FALSE(normalized_l2(zero, v2).has_value());

    std::vector<double> shorter{1.0};
    CHECK_THROWS_AS(cosine_similarity(v1, shorter), std::invalid_argument);
    CHECK_THROWS_AS(normalized_l2(v1, shorter), std::invalid_argument);
}

TEST_CASE("normalized L2 squared plus twice the cosine equals two") {
    testkit::SplitMix64 rng{2024};
    for (int round = 0; round < 100; ++round) {
        std::vector<double> v1(12), v2(12);
        for (std::size_t i = 0; i < v1.size(); ++i) {
            v1[i] = rng.next_unit() * 50.0;
            v2[i] = rng.next_unit() * 50.0;
        }
        v1[round % v1.size()] += 1.0;  // keep the norms nonzero
        v2[(round + 5) % v2.size()] += 1.0;
        double cos = *cosine_similarity(v1, v2);
        double l2 = *normalized_l2(v1, v2);
        CHECK(std::abs(l2 * l2 + 2.0 * cos - 2.0) < 1e-12);
    }
}

TEST_CASE("network comparison against ground truth") {
    Corpus corpus = testkit::fixture_couple();

    // Rule 2 alone reconstructs these two-turn scenes exactly.
    SimilarityReport all = compare_networks(corpus, Ruleset::Rules12, EvalVariant::AllUtterances);
    CHECK(all.jaccard == 1.0);
    REQUIRE(all.cosine.has_value());
    CHECK(*all.cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*all.l2 == doctest::Approx(0.0));

    // Dropping boundaries empties every two-utterance scene on both sides.
    SimilarityReport dropped =
        compare_networks(corpus, Ruleset::Rules12, EvalVariant::DropSceneBoundary);
    CHECK(dropped.variant == EvalVariant::DropSceneBoundary);
    CHECK(dropped.jaccard == 1.0);  // empty vs empty
    CHECK_FALSE(dropped.cosine.has_value());
    CHECK_FALSE(dropped.l2.has_value());

    SUBCASE("annotations are required") {
        for (auto& scene : corpus.scenes)
            for (auto& utt : scene.utterances) utt.truth_addressees = std::nullopt;
        CHECK_THROWS_AS(compare_networks(corpus, Ruleset::Rules12, EvalVariant::AllUtterances),
                        std::invalid_argument);
    }

    SUBCASE("variant labels") {
        CHECK(variant_label(EvalVariant::AllUtterances) == "all-utterances");
        CHECK(variant_label(EvalVariant::DropSceneBoundary) == "drop-boundary");
    }
}
