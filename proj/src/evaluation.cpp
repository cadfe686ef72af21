#include "narnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace narnet {

MultilabelScores multilabel_scores(const LabeledUtteranceSet& items) {
    if (items.items.empty()) throw std::invalid_argument("empty utterance set");
    MultilabelScores s;
    double recall_sum = 0.0, precision_sum = 0.0;
    for (const auto& item : items.items) {
        if (item.reference.empty()) {
            ++s.monologue_items;
            if (item.hypothesized.empty()) ++s.monologue_correct;
            continue;
        }
        ++s.scored_items;
        if (item.hypothesized.empty()) continue;  // counts 0 toward recall
        ++s.predicted_items;
        std::size_t hit = 0;
        for (const auto& name : item.hypothesized)
            if (item.reference.count(name)) ++hit;
        recall_sum += static_cast<double>(hit) / static_cast<double>(item.reference.size());
        precision_sum += static_cast<double>(hit) / static_cast<double>(item.hypothesized.size());
    }
    if (s.scored_items > 0) s.recall = recall_sum / static_cast<double>(s.scored_items);
    if (s.predicted_items > 0)
        s.precision = precision_sum / static_cast<double>(s.predicted_items);
    if (s.precision + s.recall > 0.0)
        s.fscore = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

LabeledUtteranceSet build_labeled_set(
    const Corpus& corpus, const std::vector<std::vector<AddresseeHypothesis>>& hypotheses,
    bool covered_only) {
    if (hypotheses.size() != corpus.scenes.size())
        throw std::invalid_argument("hypothesis list does not cover every scene");
    LabeledUtteranceSet set;
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i) {
        std::map<int, const AddresseeHypothesis*> by_id;
        for (const auto& hyp : hypotheses[i]) by_id[hyp.utterance_id] = &hyp;
        for (const auto& utt : corpus.scenes[i].utterances) {
            if (!utt.truth_addressees) continue;  // unannotated: excluded before scoring
            LabeledItem item;
            item.utterance_id = utt.id;
            item.reference = *utt.truth_addressees;
            auto it = by_id.find(utt.id);
            if (it != by_id.end()) item.hypothesized = it->second->addressees;
            if (covered_only && !item.reference.empty() && item.hypothesized.empty()) continue;
            set.items.push_back(std::move(item));
        }
    }
    return set;
}

std::pair<std::vector<double>, std::vector<double>> network_vectorize(const WeightedGraph& g1,
                                                                      const WeightedGraph& g2) {
    std::set<SpeakerId> union_nodes(g1.nodes.begin(), g1.nodes.end());
    union_nodes.insert(g2.nodes.begin(), g2.nodes.end());
    std::vector<SpeakerId> nodes(union_nodes.begin(), union_nodes.end());

    std::vector<double> v1, v2;
    std::size_t n = nodes.size();
    v1.reserve(n * (n - 1) / 2);
    v2.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairKey pair(nodes[i], nodes[j]);
            v1.push_back(g1.weight(pair));
            v2.push_back(g2.weight(pair));
        }
    }
    return {std::move(v1), std::move(v2)};
}

double edge_jaccard(const WeightedGraph& g1, const WeightedGraph& g2) {
    if (g1.edges.empty() && g2.edges.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const auto& [pair, w] : g1.edges)
        if (g2.edges.count(pair)) ++intersection;
    std::size_t unions = g1.edges.size() + g2.edges.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

namespace {

double norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

std::optional<double> cosine_similarity(const std::vector<double>& v1,
                                        const std::vector<double>& v2) {
    if (v1.size() != v2.size()) throw std::invalid_argument("vector length mismatch");
    double n1 = norm(v1), n2 = norm(v2);
    if (n1 == 0.0 || n2 == 0.0) return std::nullopt;
    double dot = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) dot += v1[i] * v2[i];
    return dot / (n1 * n2);
}

std::optional<double> normalized_l2(const std::vector<double>& v1,
                                    const std::vector<double>& v2) {
    if (v1.size() != v2.size()) throw std::invalid_argument("vector length mismatch");
    double n1 = norm(v1), n2 = norm(v2);
    if (n1 == 0.0 || n2 == 0.0) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        double diff = v1[i] / n1 - v2[i] / n2;
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

std::string variant_label(EvalVariant variant) {
    return variant == EvalVariant::AllUtterances ? "all-utterances" : "drop-boundary";
}

SimilarityReport compare_networks(const Corpus& corpus, Ruleset ruleset, EvalVariant variant) {
    bool annotated = false;
    for (const auto& scene : corpus.scenes)
        for (const auto& utt : scene.utterances)
            if (utt.truth_addressees) annotated = true;
    if (!annotated) throw std::invalid_argument("corpus carries no ground-truth addressees");

    bool drop = variant == EvalVariant::DropSceneBoundary;
    auto hypotheses = infer_corpus(corpus, ruleset);
    WeightedGraph estimated =
        build_cumulative(interactions_from_hypotheses(corpus, hypotheses, drop));
    WeightedGraph truth = build_cumulative(interactions_from_truth(corpus, drop));

    SimilarityReport report;
    report.variant = variant;
    report.jaccard = edge_jaccard(estimated, truth);
    auto [v1, v2] = network_vectorize(estimated, truth);
    report.cosine = cosine_similarity(v1, v2);
    report.l2 = normalized_l2(v1, v2);
    return report;
}

}  // namespace narnet
