#include <initializer_list>
#include <stdexcept>

#include "doctest.h"
#include "narnet/inference.hpp"
#include "narnet/testkit.hpp"

using namespace narnet;

namespace {

struct SceneBuilder {
    Scene scene;
    int next_id = 0;

    explicit SceneBuilder(int index) { scene.index = index; }

    SceneBuilder& utt(const char* who, Millis start, Millis end) {
        Utterance u;
        u.id = next_id++;
        u.scene_index = scene.index;
        u.speaker = who;
        u.start_ms = start;
        u.end_ms = end;
        scene.utterances.push_back(std::move(u));
        return *this;
    }
};

// 1s utterances separated by 100ms, in speaker order.
Scene pattern(int index, std::initializer_list<const char*> speakers) {
    SceneBuilder b(index);
    Millis clock = 0;
    for (const char* who : speakers) {
        b.utt(who, clock, clock + 1000);
        clock += 1100;
    }
    return b.scene;
}

const AddresseeHypothesis& hyp_of(const std::vector<AddresseeHypothesis>& hyps, int id) {
    for (const auto& h : hyps)
        if (h.utterance_id == id) return h;
    throw std::out_of_range("no hypothesis for id");
}

}  // namespace

TEST_CASE("rule 1 assigns the surrounded turn") {
    Scene scene = pattern(1, {"A", "B", "A"});
    auto hyps = infer_addressees(scene, Ruleset::Rules1);
    REQUIRE(hyps.size() == 3);
    CHECK(hyps[0].addressees.empty());
    CHECK_FALSE(hyps[0].rule.has_value());
    CHECK(hyps[1].addressees == std::set<SpeakerId>{"A"});
    CHECK(hyps[1].rule == RuleId::R1);
    CHECK(hyps[2].addressees.empty());
}

TEST_CASE("rule 2 fills the boundary turns without overriding") {
    Scene scene = pattern(1, {"A", "B", "A"});
    auto hyps = infer_addressees(scene, Ruleset::Rules12);
    CHECK(hyps[0].addressees == std::set<SpeakerId>{"B"});
    CHECK(hyps[0].rule == RuleId::R2);
    CHECK(hyps[1].rule == RuleId::R1);  // still rule 1's assignment
    CHECK(hyps[2].addressees == std::set<SpeakerId>{"B"});
    CHECK(hyps[2].rule == RuleId::R2);

    Scene two = pattern(2, {"A", "B"});
    auto pair_hyps = infer_addressees(two, Ruleset::Rules12);
    CHECK(pair_hyps[0].addressees == std::set<SpeakerId>{"B"});
    CHECK(pair_hyps[1].addressees == std::set<SpeakerId>{"A"});

    Scene lone = pattern(3, {"A"});
    auto lone_hyps = infer_addressees(lone, Ruleset::Rules1234);
    CHECK(lone_hyps[0].addressees.empty());
    CHECK_FALSE(lone_hyps[0].rule.has_value());
}

TEST_CASE("rule 3 disambiguates by one-sided context") {
    // Turns: C B A B D. Middles: B (3b, partner after), A (rule 1), B (3a).
    Scene scene = pattern(1, {"C", "B", "A", "B", "D"});
    auto hyps = infer_addressees(scene, Ruleset::Rules123);
    CHECK(hyps[1].addressees == std::set<SpeakerId>{"A"});
    CHECK(hyps[1].rule == RuleId::R3B);
    CHECK(hyps[2].addressees == std::set<SpeakerId>{"B"});
    CHECK(hyps[2].rule == RuleId::R1);
    CHECK(hyps[3].addressees == std::set<SpeakerId>{"A"});
    CHECK(hyps[3].rule == RuleId::R3A);

    auto narrower = infer_addressees(scene, Ruleset::Rules12);
    CHECK(narrower[1].addressees.empty());
    CHECK(narrower[3].addressees.empty());

    // Speaker on both sides: rule 3 must stay silent.
    auto turns = merge_turns(pattern(2, {"B", "A", "B", "A", "B"}));
    CHECK_FALSE(rule3_local(turns, 2).has_value());
}

TEST_CASE("rule 4 picks the temporally closer neighbor") {
    SUBCASE("closer after") {
        Scene scene = SceneBuilder(1)
                          .utt("A", 0, 1000)
                          .utt("B", 1500, 2000)
                          .utt("C", 2100, 3000)
                          .scene;
        auto hyps = infer_addressees(scene, Ruleset::Rules1234);
        CHECK(hyps[1].addressees == std::set<SpeakerId>{"C"});
        CHECK(hyps[1].rule == RuleId::R4);
    }
    SUBCASE("tie goes to the preceding speaker") {
        Scene scene = SceneBuilder(1)
                          .utt("A", 0, 1000)
                          .utt("B", 1100, 2000)
                          .utt("C", 2100, 3000)
                          .scene;
        auto hyps = infer_addressees(scene, Ruleset::Rules1234);
        CHECK(hyps[1].addressees == std::set<SpeakerId>{"A"});
        CHECK(hyps[1].rule == RuleId::R4);
    }
    SUBCASE("overlap clamps the gap to zero") {
        Scene scene = SceneBuilder(1)
                          .utt("A", 0, 2000)
                          .utt("B", 1000, 3000)
                          .utt("C", 5000, 6000)
                          .scene;
        auto hyps = infer_addressees(scene, Ruleset::Rules1234);
        CHECK(hyps[1].addressees == std::set<SpeakerId>{"A"});
    }
    SUBCASE("applies when the speaker flanks both sides") {
        // Turns: B C B A B; the middle B is ambiguous for rule 3.
        Scene scene = SceneBuilder(1)
                          .utt("B", 0, 1000)
                          .utt("C", 1100, 2000)
                          .utt("B", 2100, 3000)
                          .utt("A", 3050, 4000)
                          .utt("B", 4500, 5000)
                          .scene;
        auto hyps = infer_addressees(scene, Ruleset::Rules1234);
        CHECK(hyps[2].rule == RuleId::R4);
        CHECK(hyps[2].addressees == std::set<SpeakerId>{"A"});  // 50ms vs 100ms gap
    }
    SUBCASE("not applied without rule 4 in the set") {
        Scene scene = pattern(1, {"A", "B", "C"});
        auto hyps = infer_addressees(scene, Ruleset::Rules123);
        CHECK(hyps[1].addressees.empty());
    }
}

TEST_CASE("turn assignments propagate to every constituent utterance") {
    Scene scene = SceneBuilder(1)
                      .utt("A", 0, 1000)
                      .utt("A", 1100, 2000)
                      .utt("B", 2100, 3000)
                      .utt("A", 3100, 4000)
                      .scene;
    auto hyps = infer_addressees(scene, Ruleset::Rules12);
    CHECK(hyp_of(hyps, 0).addressees == std::set<SpeakerId>{"B"});
    CHECK(hyp_of(hyps, 1).addressees == std::set<SpeakerId>{"B"});
    CHECK(hyp_of(hyps, 0).rule == RuleId::R2);
    CHECK(hyp_of(hyps, 1).rule == RuleId::R2);
    CHECK(hyp_of(hyps, 2).rule == RuleId::R1);
    for (std::size_t i = 0; i < hyps.size(); ++i)
        CHECK(hyps[i].utterance_id == scene.utterances[i].id);
}

TEST_CASE("larger rulesets only add assignments") {
    testkit::SyntheticSpec spec;
    spec.storyline_count = 3;
    spec.speakers_per_storyline = 3;
    spec.scene_count = 40;
    Ruleset sets[] = {Ruleset::Rules1, Ruleset::Rules12, Ruleset::Rules123, Ruleset::Rules1234};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        spec.seed = seed;
        Corpus corpus = testkit::generate_interleaved_corpus(spec);
        double previous = -1.0;
        std::vector<std::vector<AddresseeHypothesis>> narrower;
        for (Ruleset set : sets) {
            auto hyps = infer_corpus(corpus, set);
            double cov = coverage(corpus, hyps);
            CHECK(cov >= previous);
            previous = cov;
            if (!narrower.empty()) {
                for (std::size_t i = 0; i < hyps.size(); ++i)
                    for (std::size_t j = 0; j < hyps[i].size(); ++j)
                        if (!narrower[i][j].addressees.empty()) {
                            CHECK(hyps[i][j].addressees == narrower[i][j].addressees);
                            CHECK(hyps[i][j].rule == narrower[i][j].rule);
                        }
            }
            narrower = std::move(hyps);
        }
    }
}

TEST_CASE("infer_corpus matches per-scene inference") {
    Corpus corpus = testkit::fixture_triangle();
    auto parallel = infer_corpus(corpus, Ruleset::Rules1234);
    REQUIRE(parallel.size() == corpus.scenes.size());
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i) {
        auto serial = infer_addressees(corpus.scenes[i], Ruleset::Rules1234);
        REQUIRE(parallel[i].size() == serial.size());
        for (std::size_t j = 0; j < serial.size(); ++j) {
            CHECK(parallel[i][j].utterance_id == serial[j].utterance_id);
            CHECK(parallel[i][j].addressees == serial[j].addressees);
            CHECK(parallel[i][j].rule == serial[j].rule);
        }
    }
    CHECK_THROWS_AS(coverage(Corpus{}, {}), std::invalid_argument);
}

TEST_CASE("pair keys normalize and reject self-pairs") {
    PairKey p("Zoe", "Ann");
    CHECK(p.a == "Ann");
    CHECK(p.b == "Zoe");
    CHECK(pair_label(p) == "Ann,Zoe");
    CHECK(PairKey("Ann", "Zoe") == p);
    CHECK_THROWS_AS(PairKey("Ann", "Ann"), std::invalid_argument);
}

TEST_CASE("interaction matrices aggregate assigned durations") {
    Scene scene = SceneBuilder(1)
                      .utt("A", 0, 1000)
                      .utt("B", 1100, 2000)
                      .utt("A", 2100, 3000)
                      .scene;
    auto hyps = infer_addressees(scene, Ruleset::Rules1);
    ScenePairMatrix m = interaction_matrix(scene, hyps);
    CHECK(m.scene_index == 1);
    CHECK(m.at(PairKey("A", "B")) == 900);
    CHECK(m.seconds(PairKey("A", "B")) == doctest::Approx(0.9));

    auto full = infer_addressees(scene, Ruleset::Rules12);
    ScenePairMatrix m2 = interaction_matrix(scene, full);
    CHECK(m2.at(PairKey("A", "B")) == 2800);  // all three utterances assigned

    SUBCASE("foreign utterance ids are rejected") {
        std::vector<AddresseeHypothesis> bogus = full;
        bogus[0].utterance_id = 999;
        CHECK_THROWS_AS(interaction_matrix(scene, bogus), std::out_of_range);
    }
}

TEST_CASE("pair totals conserve assigned speech time exactly") {
    testkit::SyntheticSpec spec;
    spec.scene_count = 30;
    spec.seed = 11;
    Corpus corpus = testkit::generate_interleaved_corpus(spec);

    // Ground truth uses one addressee per utterance, so per scene the pair
    // totals must equal the spoken milliseconds, as integers.
    InteractionTimeline truth = interactions_from_truth(corpus);
    for (const auto& scene : corpus.scenes) {
        Millis spoken = 0;
        for (const auto& utt : scene.utterances) spoken += utt.duration_ms();
        Millis total = 0;
        for (const auto& [pair, ms] : truth.scenes[static_cast<std::size_t>(scene.index - 1)].ms)
            total += ms;
        CHECK(total == spoken);
    }

    // Multi-addressee utterances count fully toward each listed pair.
    Scene multi = SceneBuilder(1).utt("A", 0, 1000).scene;
    multi.utterances[0].truth_addressees = std::set<SpeakerId>{"B", "C"};
    Corpus holder;
    holder.scenes.push_back(multi);
    holder.speakers = {"A", "B", "C"};
    holder.episodes.push_back({"E1", 1, 1, std::nullopt});
    InteractionTimeline wide = interactions_from_truth(holder);
    CHECK(wide.scenes[0].at(PairKey("A", "B")) == 1000);
    CHECK(wide.scenes[0].at(PairKey("A", "C")) == 1000);
}

TEST_CASE("directed interactions keep counts and direction") {
    Scene scene = SceneBuilder(1)
                      .utt("A", 0, 1000)
                      .utt("B", 1100, 2000)
                      .utt("A", 2100, 3000)
                      .scene;
    auto hyps = infer_addressees(scene, Ruleset::Rules12);
    auto rows = directed_interactions(scene, hyps);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].from == "A");
    CHECK(rows[0].to == "B");
    CHECK(rows[0].count == 2);
    CHECK(rows[0].ms == 1900);
    CHECK(rows[1].from == "B");
    CHECK(rows[1].count == 1);
    CHECK(rows[1].ms == 900);
}

TEST_CASE("boundary dropping removes first and last utterances") {
    Scene scene = SceneBuilder(1)
                      .utt("A", 0, 1000)
                      .utt("B", 1100, 2000)
                      .utt("A", 2100, 3000)
                      .scene;
    Corpus corpus;
    corpus.scenes.push_back(scene);
    corpus.speakers = {"A", "B"};
    corpus.episodes.push_back({"E1", 1, 1, std::nullopt});

    auto hyps = infer_corpus(corpus, Ruleset::Rules12);
    InteractionTimeline all = interactions_from_hypotheses(corpus, hyps);
    InteractionTimeline dropped = interactions_from_hypotheses(corpus, hyps, true);
    CHECK(all.scenes[0].at(PairKey("A", "B")) == 2800);
    CHECK(dropped.scenes[0].at(PairKey("A", "B")) == 900);

    std::vector<std::vector<AddresseeHypothesis>> short_list;
    CHECK_THROWS_AS(interactions_from_hypotheses(corpus, short_list), std::invalid_argument);
}

TEST_CASE("ruleset parsing") {
    CHECK(parse_ruleset("1") == Ruleset::Rules1);
    CHECK(parse_ruleset("12") == Ruleset::Rules12);
    CHECK(parse_ruleset("123") == Ruleset::Rules123);
    CHECK(parse_ruleset("1234") == Ruleset::Rules1234);
    CHECK_FALSE(parse_ruleset("13").has_value());
    CHECK_FALSE(parse_ruleset("").has_value());
    CHECK_FALSE(parse_ruleset("2").has_value());
    CHECK(ruleset_label(Ruleset::Rules123) == "123");
    CHECK(parse_rule_name("R3A") == RuleId::R3A);
    CHECK_FALSE(parse_rule_name("R5").has_value());
    CHECK(rule_name(RuleId::R4) == "R4");
}
