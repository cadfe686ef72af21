#pragma once

#include <compare>
#include <optional>

#include "narnet/corpus.hpp"

namespace narnet {

enum class RuleId { R1, R2, R3A, R3B, R4 };

std::string rule_name(RuleId rule);
std::optional<RuleId> parse_rule_name(std::string_view token);

// Rulesets nest: each adds assignments on top of the previous one.
enum class Ruleset { Rules1 = 1, Rules12 = 2, Rules123 = 3, Rules1234 = 4 };

// Accepts "1", "12", "123", "1234".
std::optional<Ruleset> parse_ruleset(std::string_view token);
std::string ruleset_label(Ruleset ruleset);

struct AddresseeHypothesis {
    int utterance_id = 0;
    std::set<SpeakerId> addressees;  // singleton when rule-assigned, empty when undecided
    std::optional<RuleId> rule;      // present iff addressees non-empty
};

struct TurnAssignment {
    std::optional<SpeakerId> addressee;
    std::optional<RuleId> rule;
};

// Rule kernels. All operate on the merged turn list of one scene (speakers
// alternate by construction) and only ever fill unassigned slots.
void apply_rule1(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments);
void apply_rule2(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments);
void apply_rule3(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments);
void apply_rule4(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments);

// Single-turn forms of the context rules, m indexes a middle turn.
std::optional<TurnAssignment> rule3_local(const std::vector<Turn>& turns, std::size_t m);
TurnAssignment rule4_proximity(const std::vector<Turn>& turns, std::size_t m);

// Per-scene inference; one hypothesis per utterance, in utterance order.
std::vector<AddresseeHypothesis> infer_addressees(const Scene& scene, Ruleset ruleset);

// Whole-corpus inference; scenes are independent and processed in parallel.
std::vector<std::vector<AddresseeHypothesis>> infer_corpus(const Corpus& corpus,
                                                           Ruleset ruleset);

// Share of utterances with an assigned addressee. Throws on an empty corpus.
double coverage(const Corpus& corpus,
                const std::vector<std::vector<AddresseeHypothesis>>& hypotheses);

// Unordered speaker pair, normalized to a < b. Self-pairs are invalid.
struct PairKey {
    SpeakerId a, b;

    PairKey(SpeakerId x, SpeakerId y);
    friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

std::string pair_label(const PairKey& pair);

// Symmetric per-scene interaction seconds, stored as exact milliseconds.
struct ScenePairMatrix {
    int scene_index = 0;
    std::map<PairKey, Millis> ms;

    Millis at(const PairKey& pair) const;
    double seconds(const PairKey& pair) const { return ms_to_seconds(at(pair)); }
};

// h for one scene from rule hypotheses; every hypothesis must reference an
// utterance of this scene. Multi-addressee sets contribute the full
// utterance duration to each listed pair.
ScenePairMatrix interaction_matrix(const Scene& scene,
                                   const std::vector<AddresseeHypothesis>& hypotheses);

struct DirectedInteraction {
    int scene_index = 0;
    SpeakerId from, to;
    int count = 0;
    Millis ms = 0;

    double seconds() const { return ms_to_seconds(ms); }
};

std::vector<DirectedInteraction> directed_interactions(
    const Scene& scene, const std::vector<AddresseeHypothesis>& hypotheses);

// Scene-indexed interaction matrices plus the node universe the graphs
// should carry (all corpus speakers, so never-interacting ones stay as
// isolated nodes).
struct InteractionTimeline {
    std::vector<SpeakerId> speakers;  // sorted
    std::vector<ScenePairMatrix> scenes;  // [t-1] holds scene t

    int scene_count() const { return static_cast<int>(scenes.size()); }
};

// drop_boundary removes each scene's first and last utterance from the
// aggregation (inference still sees the full scene).
InteractionTimeline interactions_from_hypotheses(
    const Corpus& corpus, const std::vector<std::vector<AddresseeHypothesis>>& hypotheses,
    bool drop_boundary = false);

// Same aggregation driven by ground-truth labels; unannotated and monologue
// utterances contribute nothing.
InteractionTimeline interactions_from_truth(const Corpus& corpus, bool drop_boundary = false);

}  // namespace narnet
