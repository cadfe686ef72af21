#include "narnet/testkit.hpp"

#include <cmath>
#include <stdexcept>

namespace narnet::testkit {

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bound must be positive");
    return next() % bound;
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Corpus generate_interleaved_corpus(const SyntheticSpec& spec) {
    if (spec.storyline_count < 1) throw std::invalid_argument("need at least one storyline");
    if (spec.speakers_per_storyline < 2 || spec.speakers_per_storyline > 26)
        throw std::invalid_argument("speakers per storyline must be in 2..26");
    if (spec.scene_count < 0) throw std::invalid_argument("negative scene count");
    if (spec.duration_range_ms.first < 1 ||
        spec.duration_range_ms.second < spec.duration_range_ms.first)
        throw std::invalid_argument("bad duration range");
    if (spec.utterances_per_scene.first < 2 ||
        spec.utterances_per_scene.second < spec.utterances_per_scene.first)
        throw std::invalid_argument("bad utterances-per-scene range");
    std::vector<double> activation = spec.activation;
    if (activation.empty())
        activation.assign(static_cast<std::size_t>(spec.storyline_count), 1.0);
    if (static_cast<int>(activation.size()) != spec.storyline_count)
        throw std::invalid_argument("activation weights must match the storyline count");
    double total_weight = 0.0;
    for (double w : activation) {
        if (w < 0.0) throw std::invalid_argument("negative activation weight");
        total_weight += w;
    }
    if (total_weight <= 0.0) throw std::invalid_argument("all activation weights are zero");

    // Storyline k owns speakers "S<k>A".."S<k>Z"; casts never overlap.
    std::vector<std::vector<SpeakerId>> casts;
    for (int k = 0; k < spec.storyline_count; ++k) {
        std::vector<SpeakerId> cast;
        for (int s = 0; s < spec.speakers_per_storyline; ++s)
            cast.push_back("S" + std::to_string(k + 1) + std::string(1, static_cast<char>('A' + s)));
        casts.push_back(std::move(cast));
    }

    SplitMix64 rng{spec.seed};
    Corpus corpus;
    corpus.series_id = "synthetic";
    Millis clock = 0;
    int next_id = 0;
    for (int t = 1; t <= spec.scene_count; ++t) {
        double draw = rng.next_unit() * total_weight;
        std::size_t storyline = 0;
        for (; storyline + 1 < activation.size(); ++storyline) {
            draw -= activation[storyline];
            if (draw < 0.0) break;
        }
        const auto& cast = casts[storyline];

        std::uint64_t cast_size = static_cast<std::uint64_t>(cast.size());
        std::uint64_t first = rng.next_below(cast_size);
        std::uint64_t second = rng.next_below(cast_size - 1);
        if (second >= first) ++second;

        int low = spec.utterances_per_scene.first;
        int count = low + static_cast<int>(rng.next_below(
                              static_cast<std::uint64_t>(spec.utterances_per_scene.second - low + 1)));

        Scene scene;
        scene.index = t;
        for (int u = 0; u < count; ++u) {
            const SpeakerId& speaker = u % 2 == 0 ? cast[first] : cast[second];
            const SpeakerId& partner = u % 2 == 0 ? cast[second] : cast[first];
            Millis gap = static_cast<Millis>(rng.next_below(501));
            Millis duration =
                spec.duration_range_ms.first +
                static_cast<Millis>(rng.next_below(static_cast<std::uint64_t>(
                    spec.duration_range_ms.second - spec.duration_range_ms.first + 1)));
            Utterance utt;
            utt.id = next_id++;
            utt.scene_index = t;
            utt.speaker = speaker;
            utt.start_ms = clock + gap;
            utt.end_ms = utt.start_ms + duration;
            utt.truth_addressees = std::set<SpeakerId>{partner};
            clock = utt.end_ms;
            corpus.speakers.insert(speaker);
            scene.utterances.push_back(std::move(utt));
        }
        corpus.scenes.push_back(std::move(scene));
    }
    corpus.episodes.push_back({"E1", 1, spec.scene_count, std::nullopt});
    return corpus;
}

double smoothing_oracle(const InteractionTimeline& matrices, const PairKey& pair, int t,
                        double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    int t_count = matrices.scene_count();
    if (t < 1 || t > t_count) throw std::out_of_range("scene index outside timeline");

    auto h_of = [&](int scene) -> Millis {
        for (const auto& [key, ms] : matrices.scenes[static_cast<std::size_t>(scene - 1)].ms)
            if (key == pair) return ms;
        return 0;
    };
    // Interaction of either member with anyone outside the pair.
    auto d_of = [&](int scene) -> Millis {
        Millis sum = 0;
        for (const auto& [key, ms] : matrices.scenes[static_cast<std::size_t>(scene - 1)].ms) {
            bool a_in = key.a == pair.a || key.a == pair.b;
            bool b_in = key.b == pair.a || key.b == pair.b;
            if (a_in != b_in) sum += ms;
        }
        return sum;
    };

    Millis weight_ms = 0;
    bool bottom = false;
    Millis here = h_of(t);
    if (here > 0) {
        weight_ms = here;
    } else {
        int last = 0;
        for (int scene = 1; scene < t; ++scene)
            if (h_of(scene) > 0) last = scene;
        int next = 0;
        for (int scene = t; scene <= t_count; ++scene) {
            if (h_of(scene) > 0) {
                next = scene;
                break;
            }
        }
        std::optional<Millis> persistence, anticipation;
        if (last > 0) {
            Millis drain = 0;
            for (int scene = last + 1; scene <= t; ++scene) drain += d_of(scene);
            persistence = h_of(last) - drain;
        }
        if (next > 0) {
            Millis drain = 0;
            for (int scene = t; scene <= next - 1; ++scene) drain += d_of(scene);
            anticipation = h_of(next) - drain;
        }
        if (persistence && anticipation) {
            weight_ms = std::max(*persistence, *anticipation);
        } else if (persistence) {
            weight_ms = *persistence;
        } else if (anticipation) {
            weight_ms = *anticipation;
        } else {
            bottom = true;
        }
    }
    if (bottom) return 0.0;
    double w = static_cast<double>(weight_ms) / 1000.0;
    return 1.0 / (1.0 + std::exp(-lambda * w));
}

namespace {

// Appends one two-speaker scene, one utterance per speaker per exchange,
// every utterance `ms` long and truth-addressed to the partner.
void add_dialogue_scene(Corpus& corpus, int* next_id, Millis* clock, const SpeakerId& x,
                        const SpeakerId& y, int exchanges, Millis ms) {
    Scene scene;
    scene.index = corpus.scene_count() + 1;
    for (int e = 0; e < 2 * exchanges; ++e) {
        const SpeakerId& speaker = e % 2 == 0 ? x : y;
        const SpeakerId& partner = e % 2 == 0 ? y : x;
        Utterance utt;
        utt.id = (*next_id)++;
        utt.scene_index = scene.index;
        utt.speaker = speaker;
        utt.start_ms = *clock;
        utt.end_ms = *clock + ms;
        utt.truth_addressees = std::set<SpeakerId>{partner};
        *clock = utt.end_ms + 1000;
        corpus.speakers.insert(speaker);
        scene.utterances.push_back(std::move(utt));
    }
    corpus.scenes.push_back(std::move(scene));
}

}  // namespace

Corpus fixture_triangle() {
    Corpus corpus;
    corpus.series_id = "triangle";
    int next_id = 0;
    Millis clock = 0;
    add_dialogue_scene(corpus, &next_id, &clock, "P1", "P2", 1, 10000);
    add_dialogue_scene(corpus, &next_id, &clock, "P1", "P2", 1, 10000);
    add_dialogue_scene(corpus, &next_id, &clock, "P1", "P3", 1, 10000);
    add_dialogue_scene(corpus, &next_id, &clock, "P1", "P3", 1, 10000);
    add_dialogue_scene(corpus, &next_id, &clock, "P2", "P3", 1, 10000);
    add_dialogue_scene(corpus, &next_id, &clock, "P2", "P3", 1, 10000);
    corpus.episodes.push_back({"E1", 1, 6, std::nullopt});
    return corpus;
}

Corpus fixture_couple() {
    Corpus corpus;
    corpus.series_id = "couple";
    int next_id = 0;
    Millis clock = 0;
    add_dialogue_scene(corpus, &next_id, &clock, "Francis", "Claire", 1, 15000);  // h = 30 s
    add_dialogue_scene(corpus, &next_id, &clock, "Claire", "Zoe", 1, 20000);      // h = 40 s
    add_dialogue_scene(corpus, &next_id, &clock, "Lucas", "Gavin", 1, 25000);     // h = 50 s
    add_dialogue_scene(corpus, &next_id, &clock, "Francis", "Claire", 1, 10000);  // h = 20 s
    corpus.episodes.push_back({"E1", 1, 4, std::nullopt});
    return corpus;
}

}  // namespace narnet::testkit
