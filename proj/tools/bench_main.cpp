// Benchmark: parallel graph kernels against the serial reference path.
// The reference (testkit::smoothing_oracle) recomputes every window sum from
// scratch, so it also serves as a cost baseline for the prefix-sum builder.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "narnet/graphs.hpp"
#include "narnet/inference.hpp"
#include "narnet/testkit.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void set_threads(const char* value) {
#ifdef _OPENMP
    setenv("NARRATIVE_NET_THREADS", value, 1);
#else
    (void)value;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    narnet::testkit::SyntheticSpec spec;
    spec.storyline_count = 4;
    spec.speakers_per_storyline = 4;
    spec.scene_count = argc > 1 ? std::atoi(argv[1]) : 2000;
    spec.utterances_per_scene = {4, 10};
    spec.seed = 7;
    narnet::Corpus corpus = narnet::testkit::generate_interleaved_corpus(spec);
    std::cout << "corpus: " << corpus.scene_count() << " scenes, "
              << corpus.utterance_count() << " utterances, " << corpus.speakers.size()
              << " speakers\n";

    auto hypotheses = narnet::infer_corpus(corpus, narnet::Ruleset::Rules1234);
    auto timeline = narnet::interactions_from_hypotheses(corpus, hypotheses);

    set_threads("1");
    auto start = std::chrono::steady_clock::now();
    auto series_serial = narnet::build_smoothed_series(timeline, {});
    double t_serial = seconds_since(start);
    std::cout << "smooth build, 1 thread:    " << t_serial << " s\n";

    unsetenv("NARRATIVE_NET_THREADS");
    start = std::chrono::steady_clock::now();
    auto series_parallel = narnet::build_smoothed_series(timeline, {});
    double t_parallel = seconds_since(start);
    std::cout << "smooth build, max threads: " << t_parallel << " s ("
              << narnet::thread_cap() << " threads, x" << t_serial / t_parallel << ")\n";

    // Reference path: brute-force window sums for every pair at every scene.
    std::vector<narnet::PairKey> pairs;
    for (const auto& snapshot : series_serial.snapshots)
        for (const auto& [pair, weight] : snapshot.graph.edges) {
            (void)weight;
            if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) pairs.push_back(pair);
        }
    start = std::chrono::steady_clock::now();
    double checksum = 0.0;
    long mismatches = 0;
    for (int t = 1; t <= static_cast<int>(timeline.scene_count()); ++t) {
        const auto& snapshot = series_parallel.snapshots[static_cast<std::size_t>(t - 1)];
        for (const auto& pair : pairs) {
            double reference = narnet::testkit::smoothing_oracle(timeline, pair, t, 0.01);
            checksum += reference;
            if (reference != snapshot.graph.weight(pair)) ++mismatches;
        }
    }
    double t_reference = seconds_since(start);
    std::cout << "serial reference sweep:    " << t_reference << " s (checksum " << checksum
              << ")\n";
    std::cout << "builder vs reference mismatches: " << mismatches << "\n";

    set_threads("1");
    start = std::chrono::steady_clock::now();
    auto hyps_serial = narnet::infer_corpus(corpus, narnet::Ruleset::Rules1234);
    double t_infer_serial = seconds_since(start);
    unsetenv("NARRATIVE_NET_THREADS");
    start = std::chrono::steady_clock::now();
    auto hyps_parallel = narnet::infer_corpus(corpus, narnet::Ruleset::Rules1234);
    double t_infer_parallel = seconds_since(start);
    std::cout << "inference, 1 thread:       " << t_infer_serial << " s\n";
    std::cout << "inference, max threads:    " << t_infer_parallel << " s (x"
              << t_infer_serial / t_infer_parallel << ")\n";

    return mismatches == 0 ? 0 : 1;
}
