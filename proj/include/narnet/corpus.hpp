#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "narnet/util.hpp"

namespace narnet {

using SpeakerId = std::string;

// One speaker-labeled spoken segment. truth_addressees distinguishes an
// explicit monologue label (empty set) from an unannotated segment (nullopt).
struct Utterance {
    int id = 0;           // ordinal within the corpus
    int scene_index = 0;  // global, 1-based, consecutive across episodes
    SpeakerId speaker;
    Millis start_ms = 0;
    Millis end_ms = 0;
    std::optional<std::string> text;
    std::optional<std::set<SpeakerId>> truth_addressees;

    Millis duration_ms() const { return end_ms - start_ms; }
    double seconds() const { return ms_to_seconds(duration_ms()); }
};

struct Scene {
    int index = 0;  // t, 1-based
    std::vector<Utterance> utterances;  // sorted by start_ms, non-decreasing

    std::set<SpeakerId> distinct_speakers() const;
    bool spoken() const { return !utterances.empty(); }
};

struct EpisodeRef {
    std::string id;
    int first_scene = 0;
    int last_scene = 0;  // inclusive; scene ranges partition 1..T
    std::optional<Millis> duration_ms;
};

struct Corpus {
    std::string series_id;
    std::vector<EpisodeRef> episodes;
    std::vector<Scene> scenes;  // scenes[t-1].index == t
    std::set<SpeakerId> speakers;

    int scene_count() const { return static_cast<int>(scenes.size()); }
    const Scene& scene(int t) const { return scenes.at(static_cast<std::size_t>(t - 1)); }
    std::size_t utterance_count() const;
};

// Maximal run of consecutive same-speaker utterances within one scene.
struct Turn {
    SpeakerId speaker;
    std::vector<int> utterance_ids;
    Millis start_ms = 0;
    Millis end_ms = 0;
};

struct ParseResult {
    std::optional<Corpus> corpus;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return corpus.has_value(); }
};

enum class CorpusFormat { CanonicalRecords, SrtWithSidecar };

// Canonical record format: one utterance per line,
//   episode  scene  speaker  start_ms  end_ms  addressees  [text]
// tab-separated, scene numbers local to the episode. "#!" lines are
// directives (series id, episode scene counts and durations), "#" lines are
// comments. Addressees: "-" unannotated, "~" explicit monologue, else a
// comma-separated name list.
ParseResult parse_canonical_text(std::string_view text, const std::string& source_name);
ParseResult parse_canonical(const std::filesystem::path& path);

ParseResult parse_corpus(const std::filesystem::path& path, CorpusFormat format,
                         const std::filesystem::path& sidecar = {});

// Emits the canonical record format; parse(serialize(c)) == c.
std::string serialize_corpus(const Corpus& corpus);

std::vector<Turn> merge_turns(const Scene& scene);

// n distinct speakers -> share of corpus utterances lying in scenes with
// exactly n speakers. Throws std::invalid_argument on an utterance-free corpus.
std::map<int, double> speakers_per_scene_distribution(const Corpus& corpus);

struct CorpusStats {
    std::size_t episode_count = 0;
    std::size_t utterance_count = 0;
    std::size_t scene_count = 0;
    std::size_t spoken_scene_count = 0;
    double spoken_proportion = 0.0;
    double speakers_per_scene_mean = 0.0;    // over all scenes, unspoken count 0
    double speakers_per_scene_stddev = 0.0;  // population form
    std::size_t speaker_occurrences = 0;     // one per distinct speaker per scene
    std::size_t speaker_count = 0;
    Millis utterance_ms = 0;
    std::optional<Millis> episode_ms;        // requires every episode to declare a duration
    std::optional<double> speech_coverage;   // utterance time / episode time
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string format_stats(const CorpusStats& stats);

}  // namespace narnet
