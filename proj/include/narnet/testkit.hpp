#pragma once

#include "narnet/graphs.hpp"

namespace narnet::testkit {

// Deterministic generator state (splitmix64); intentionally independent of
// <random> distributions so identical seeds give identical corpora on every
// platform.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next();
    std::uint64_t next_below(std::uint64_t bound);  // bound > 0
    double next_unit();                             // [0, 1)
};

struct SyntheticSpec {
    int storyline_count = 2;
    int speakers_per_storyline = 2;  // disjoint casts, 2..26
    int scene_count = 10;
    std::vector<double> activation;  // per-storyline draw weight; empty = uniform
    std::pair<Millis, Millis> duration_range_ms{1000, 5000};
    std::pair<int, int> utterances_per_scene{2, 8};
    std::uint64_t seed = 1;
};

// Interleaved-storyline corpus: each scene is a two-speaker alternating
// dialogue drawn from one storyline, ground truth addressee = the partner.
// The seed fully determines the output.
Corpus generate_interleaved_corpus(const SyntheticSpec& spec);

// Brute-force re-evaluation of the smoothed weight for one pair at one
// scene, straight from the interaction matrices: linear occurrence scans and
// explicit separate-interaction sums. Kept free of any graph-builder code on
// purpose; it is the reference the optimized kernel is checked against.
double smoothing_oracle(const InteractionTimeline& matrices, const PairKey& pair, int t,
                        double lambda);

// Three speakers P1..P3, six scenes: P1-P2 twice, P1-P3 twice, P2-P3 twice,
// every utterance 10 s, ground truth = dialogue partner.
Corpus fixture_triangle();

// Four scenes, five speakers: the leads Francis and Claire talk 30 s, then
// Claire spends 40 s with someone else, then an unrelated 50 s scene, then
// the leads reunite for 20 s. Their instantaneous weights across the scenes
// are exactly 30, -10, 20, 20.
Corpus fixture_couple();

}  // namespace narnet::testkit
