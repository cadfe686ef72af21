#include "narnet/inference.hpp"

#include <algorithm>
#include <stdexcept>

namespace narnet {

std::string rule_name(RuleId rule) {
    switch (rule) {
        case RuleId::R1: return "R1";
        case RuleId::R2: return "R2";
        case RuleId::R3A: return "R3A";
        case RuleId::R3B: return "R3B";
        case RuleId::R4: return "R4";
    }
    return "?";
}

std::optional<RuleId> parse_rule_name(std::string_view token) {
    if (token == "R1") return RuleId::R1;
    if (token == "R2") return RuleId::R2;
    if (token == "R3A") return RuleId::R3A;
    if (token == "R3B") return RuleId::R3B;
    if (token == "R4") return RuleId::R4;
    return std::nullopt;
}

std::optional<Ruleset> parse_ruleset(std::string_view token) {
    if (token == "1") return Ruleset::Rules1;
    if (token == "12") return Ruleset::Rules12;
    if (token == "123") return Ruleset::Rules123;
    if (token == "1234") return Ruleset::Rules1234;
    return std::nullopt;
}

std::string ruleset_label(Ruleset ruleset) {
    switch (ruleset) {
        case Ruleset::Rules1: return "1";
        case Ruleset::Rules12: return "12";
        case Ruleset::Rules123: return "123";
        case Ruleset::Rules1234: return "1234";
    }
    return "?";
}

void apply_rule1(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments) {
    for (std::size_t m = 1; m + 1 < turns.size(); ++m) {
        if (assignments[m].addressee) continue;
        if (turns[m - 1].speaker == turns[m + 1].speaker &&
            turns[m - 1].speaker != turns[m].speaker) {
            assignments[m] = {turns[m - 1].speaker, RuleId::R1};
        }
    }
}

void apply_rule2(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments) {
    if (turns.size() < 2) return;
    if (!assignments.front().addressee)
        assignments.front() = {turns[1].speaker, RuleId::R2};
    if (!assignments.back().addressee)
        assignments.back() = {turns[turns.size() - 2].speaker, RuleId::R2};
}

std::optional<TurnAssignment> rule3_local(const std::vector<Turn>& turns, std::size_t m) {
    bool before = m >= 2 && turns[m - 2].speaker == turns[m].speaker;
    bool after = m + 2 < turns.size() && turns[m + 2].speaker == turns[m].speaker;
    if (before && !after) return TurnAssignment{turns[m - 1].speaker, RuleId::R3A};
    if (after && !before) return TurnAssignment{turns[m + 1].speaker, RuleId::R3B};
    return std::nullopt;
}

TurnAssignment rule4_proximity(const std::vector<Turn>& turns, std::size_t m) {
    Millis gap_prev = std::max<Millis>(0, turns[m].start_ms - turns[m - 1].end_ms);
    Millis gap_next = std::max<Millis>(0, turns[m + 1].start_ms - turns[m].end_ms);
    if (gap_prev <= gap_next) return {turns[m - 1].speaker, RuleId::R4};
    return {turns[m + 1].speaker, RuleId::R4};
}

void apply_rule3(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments) {
    for (std::size_t m = 1; m + 1 < turns.size(); ++m) {
        if (assignments[m].addressee) continue;
        if (auto a = rule3_local(turns, m)) assignments[m] = *a;
    }
}

void apply_rule4(const std::vector<Turn>& turns, std::vector<TurnAssignment>& assignments) {
    for (std::size_t m = 1; m + 1 < turns.size(); ++m) {
        if (assignments[m].addressee) continue;
        assignments[m] = rule4_proximity(turns, m);
    }
}

std::vector<AddresseeHypothesis> infer_addressees(const Scene& scene, Ruleset ruleset) {
    auto turns = merge_turns(scene);
    std::vector<TurnAssignment> assignments(turns.size());

    apply_rule1(turns, assignments);
    if (ruleset >= Ruleset::Rules123) apply_rule3(turns, assignments);
    if (ruleset >= Ruleset::Rules1234) apply_rule4(turns, assignments);
    if (ruleset >= Ruleset::Rules12) apply_rule2(turns, assignments);

    std::map<int, std::size_t> turn_of;
    for (std::size_t i = 0; i < turns.size(); ++i)
        for (int id : turns[i].utterance_ids) turn_of[id] = i;

    std::vector<AddresseeHypothesis> out;
    out.reserve(scene.utterances.size());
    for (const auto& utt : scene.utterances) {
        const auto& assignment = assignments[turn_of.at(utt.id)];
        AddresseeHypothesis hyp;
        hyp.utterance_id = utt.id;
        if (assignment.addressee) {
            hyp.addressees.insert(*assignment.addressee);
            hyp.rule = assignment.rule;
        }
        out.push_back(std::move(hyp));
    }
    return out;
}

std::vector<std::vector<AddresseeHypothesis>> infer_corpus(const Corpus& corpus,
                                                           Ruleset ruleset) {
    int count = corpus.scene_count();
    std::vector<std::vector<AddresseeHypothesis>> out(static_cast<std::size_t>(count));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] =
            infer_addressees(corpus.scenes[static_cast<std::size_t>(i)], ruleset);
    }
    return out;
}

double coverage(const Corpus& corpus,
                const std::vector<std::vector<AddresseeHypothesis>>& hypotheses) {
    std::size_t total = corpus.utterance_count();
    if (total == 0) throw std::invalid_argument("corpus has no utterances");
    std::size_t assigned = 0;
    for (const auto& scene : hypotheses)
        for (const auto& hyp : scene)
            if (!hyp.addressees.empty()) ++assigned;
    return static_cast<double>(assigned) / static_cast<double>(total);
}

PairKey::PairKey(SpeakerId x, SpeakerId y) {
    if (x == y) throw std::invalid_argument("self-pair '" + x + "'");
    if (x < y) {
        a = std::move(x);
        b = std::move(y);
    } else {
        a = std::move(y);
        b = std::move(x);
    }
}

std::string pair_label(const PairKey& pair) { return pair.a + "," + pair.b; }

Millis ScenePairMatrix::at(const PairKey& pair) const {
    auto it = ms.find(pair);
    return it == ms.end() ? 0 : it->second;
}

namespace {

// Shared aggregation core: addressee sets per utterance -> symmetric ms.
template <typename AddresseesOf>
ScenePairMatrix aggregate_scene(const Scene& scene, AddresseesOf&& addressees_of,
                                bool drop_boundary) {
    ScenePairMatrix matrix;
    matrix.scene_index = scene.index;
    std::size_t n = scene.utterances.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (drop_boundary && (i == 0 || i + 1 == n)) continue;
        const Utterance& utt = scene.utterances[i];
        const std::set<SpeakerId>* addressees = addressees_of(utt);
        if (!addressees) continue;
        for (const auto& to : *addressees)
            matrix.ms[PairKey(utt.speaker, to)] += utt.duration_ms();
    }
    return matrix;
}

}  // namespace

ScenePairMatrix interaction_matrix(const Scene& scene,
                                   const std::vector<AddresseeHypothesis>& hypotheses) {
    std::map<int, const std::set<SpeakerId>*> by_id;
    std::set<int> scene_ids;
    for (const auto& utt : scene.utterances) scene_ids.insert(utt.id);
    for (const auto& hyp : hypotheses) {
        if (!scene_ids.count(hyp.utterance_id))
            throw std::out_of_range("hypothesis references an utterance outside the scene");
        by_id[hyp.utterance_id] = &hyp.addressees;
    }
    return aggregate_scene(
        scene,
        [&](const Utterance& utt) -> const std::set<SpeakerId>* {
            auto it = by_id.find(utt.id);
            return it == by_id.end() || it->second->empty() ? nullptr : it->second;
        },
        false);
}

std::vector<DirectedInteraction> directed_interactions(
    const Scene& scene, const std::vector<AddresseeHypothesis>& hypotheses) {
    std::map<int, const AddresseeHypothesis*> by_id;
    for (const auto& hyp : hypotheses) by_id[hyp.utterance_id] = &hyp;
    std::map<std::pair<SpeakerId, SpeakerId>, DirectedInteraction> table;
    for (const auto& utt : scene.utterances) {
        auto it = by_id.find(utt.id);
        if (it == by_id.end()) continue;
        for (const auto& to : it->second->addressees) {
            auto& entry = table[{utt.speaker, to}];
            entry.scene_index = scene.index;
            entry.from = utt.speaker;
            entry.to = to;
            entry.count += 1;
            entry.ms += utt.duration_ms();
        }
    }
    std::vector<DirectedInteraction> out;
    out.reserve(table.size());
    for (auto& [key, entry] : table) out.push_back(std::move(entry));
    return out;
}

InteractionTimeline interactions_from_hypotheses(
    const Corpus& corpus, const std::vector<std::vector<AddresseeHypothesis>>& hypotheses,
    bool drop_boundary) {
    if (hypotheses.size() != corpus.scenes.size())
        throw std::invalid_argument("hypothesis list does not cover every scene");
    InteractionTimeline timeline;
    timeline.speakers.assign(corpus.speakers.begin(), corpus.speakers.end());
    timeline.scenes.reserve(corpus.scenes.size());
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i) {
        std::map<int, const std::set<SpeakerId>*> by_id;
        for (const auto& hyp : hypotheses[i]) by_id[hyp.utterance_id] = &hyp.addressees;
        timeline.scenes.push_back(aggregate_scene(
            corpus.scenes[i],
            [&](const Utterance& utt) -> const std::set<SpeakerId>* {
                auto it = by_id.find(utt.id);
                return it == by_id.end() || it->second->empty() ? nullptr : it->second;
            },
            drop_boundary));
    }
    return timeline;
}

InteractionTimeline interactions_from_truth(const Corpus& corpus, bool drop_boundary) {
    InteractionTimeline timeline;
    timeline.speakers.assign(corpus.speakers.begin(), corpus.speakers.end());
    timeline.scenes.reserve(corpus.scenes.size());
    for (const auto& scene : corpus.scenes) {
        timeline.scenes.push_back(aggregate_scene(
            scene,
            [](const Utterance& utt) -> const std::set<SpeakerId>* {
                return utt.truth_addressees && !utt.truth_addressees->empty()
                           ? &*utt.truth_addressees
                           : nullptr;
            },
            drop_boundary));
    }
    return timeline;
}

}  // namespace narnet
