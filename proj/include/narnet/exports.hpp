#pragma once

#include "narnet/evaluation.hpp"

namespace narnet {

// Dynamic GEXF: one undirected edge per pair, weight carried as timestamped
// attribute spells, one spell per snapshot.
std::string to_gexf(const DynamicGraphSeries& series);

// Static GEXF with plain edge weights.
std::string to_gexf(const WeightedGraph& graph);

// Long-format series CSV: scene,char_i,char_j,weight,method,params.
std::string series_to_csv(const DynamicGraphSeries& series);

// Inverse of series_to_csv. Node sets are reconstructed from the rows, so
// callers that know the full speaker universe should widen them afterwards.
std::optional<DynamicGraphSeries> series_from_csv(std::string_view text,
                                                  const std::string& source_name,
                                                  std::vector<Diagnostic>& diagnostics);

// scene,from,to,count,seconds.
std::string interactions_to_csv(const std::vector<DirectedInteraction>& interactions);

// scene,value.
std::string scene_values_to_csv(const std::vector<std::pair<int, double>>& values);

// Tab-separated hypothesis records: utterance_id, addressees, rule.
std::string hypotheses_to_tsv(const std::vector<std::vector<AddresseeHypothesis>>& hypotheses);

std::optional<std::vector<std::vector<AddresseeHypothesis>>> hypotheses_from_tsv(
    std::string_view text, const Corpus& corpus, const std::string& source_name,
    std::vector<Diagnostic>& diagnostics);

}  // namespace narnet
