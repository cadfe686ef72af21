#pragma once

#include "narnet/graphs.hpp"

namespace narnet {

// One utterance with its hypothesized and reference addressee sets.
struct LabeledItem {
    int utterance_id = 0;
    std::set<SpeakerId> hypothesized;  // gamma
    std::set<SpeakerId> reference;     // M; empty = annotated monologue
};

struct LabeledUtteranceSet {
    std::vector<LabeledItem> items;
};

struct MultilabelScores {
    double recall = 0.0;
    double precision = 0.0;
    double fscore = 0.0;
    std::size_t scored_items = 0;      // non-monologue items entering recall
    std::size_t predicted_items = 0;   // of those, items with a hypothesis
    std::size_t monologue_items = 0;   // empty-reference items, scored separately
    std::size_t monologue_correct = 0; // left unassigned, as they should be
};

// Set-overlap recall/precision per item, averaged. Items with an empty
// hypothesis count 0 toward recall and are excluded from the precision
// average; empty-reference items feed only the monologue tally. Throws on an
// empty item list.
MultilabelScores multilabel_scores(const LabeledUtteranceSet& items);

// Items for every annotated utterance. covered_only additionally drops
// non-monologue items the ruleset left unassigned, which is how the direct
// evaluation is scored (coverage is reported alongside).
LabeledUtteranceSet build_labeled_set(
    const Corpus& corpus, const std::vector<std::vector<AddresseeHypothesis>>& hypotheses,
    bool covered_only);

// Aligns two graphs on their united, lexicographically sorted node set and
// lays out the unordered pair weights in that fixed order.
std::pair<std::vector<double>, std::vector<double>> network_vectorize(const WeightedGraph& g1,
                                                                      const WeightedGraph& g2);

// Presence-only edge overlap; 1 when both graphs are edgeless.
double edge_jaccard(const WeightedGraph& g1, const WeightedGraph& g2);

// nullopt when either vector has zero norm.
std::optional<double> cosine_similarity(const std::vector<double>& v1,
                                        const std::vector<double>& v2);

// Euclidean distance between the unit-normalized vectors; equals
// sqrt(2 - 2 cos) and lives in [0, sqrt(2)] for non-negative weights.
std::optional<double> normalized_l2(const std::vector<double>& v1,
                                    const std::vector<double>& v2);

enum class EvalVariant { AllUtterances, DropSceneBoundary };

std::string variant_label(EvalVariant variant);

struct SimilarityReport {
    EvalVariant variant = EvalVariant::AllUtterances;
    double jaccard = 0.0;
    std::optional<double> cosine;
    std::optional<double> l2;
};

// Cumulative network from rule inference vs the one from ground-truth
// labels. DropSceneBoundary removes each scene's first and last utterance
// from both aggregations. Throws if the corpus carries no annotations.
SimilarityReport compare_networks(const Corpus& corpus, Ruleset ruleset, EvalVariant variant);

}  // namespace narnet
