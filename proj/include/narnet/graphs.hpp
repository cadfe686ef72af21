#pragma once

#include "narnet/inference.hpp"

namespace narnet {

enum class WeightScheme { Seconds, Normalized };

struct WeightedGraph {
    std::vector<SpeakerId> nodes;  // sorted; isolated speakers included
    std::map<PairKey, double> edges;
    WeightScheme scheme = WeightScheme::Seconds;

    double weight(const PairKey& pair) const;
};

enum class SeriesMethod { CumulativePrefix, TimeSlice, NarrativeSmoothing };

std::string method_name(SeriesMethod method);
std::optional<SeriesMethod> parse_method_name(std::string_view token);

struct SeriesParams {
    std::optional<int> window;
    std::optional<int> stride;
    std::optional<double> lambda;

    std::string label() const;  // "window=10;stride=1", "lambda=0.01", ""
};

struct Snapshot {
    int scene_index = 0;
    WeightedGraph graph;
};

struct DynamicGraphSeries {
    SeriesMethod method = SeriesMethod::CumulativePrefix;
    SeriesParams params;
    std::vector<Snapshot> snapshots;  // scene indices strictly increasing
};

// Static cumulative graph over scenes 1..upto (default: all). Edges with a
// zero total are omitted.
WeightedGraph build_cumulative(const InteractionTimeline& timeline,
                               std::optional<int> upto = std::nullopt);

// One snapshot per scene, each the cumulative graph of scenes 1..t.
DynamicGraphSeries build_cumulative_prefix_series(const InteractionTimeline& timeline);

// Trailing-window sums over [max(1, t-window+1), t], snapshots at
// t = 1, 1+stride, ... Window and stride must be >= 1.
DynamicGraphSeries build_time_slice_series(const InteractionTimeline& timeline, int window,
                                           int stride = 1);

struct SmoothingParams {
    double lambda = 0.01;  // sigmoid steepness, per second of interaction
};

// Instantaneous link weight; bottom marks the explicit "no occurrence on
// either side" value that normalizes to 0.
struct ExtendedWeight {
    double seconds = 0.0;
    bool bottom = false;
};

// Everything instantaneous_weight needs about one pair: its occurrence
// scenes, per-scene h, and prefix sums of the separate-interaction term d.
struct PairTimeline {
    PairKey pair;
    std::vector<int> occurrence_scenes;  // sorted, h > 0 there
    std::vector<Millis> h_ms;            // [t-1], dense over 1..T
    std::vector<Millis> d_prefix_ms;     // [t] = sum of d over scenes 1..t

    int scene_count() const { return static_cast<int>(h_ms.size()); }
    Millis h_at(int t) const { return h_ms.at(static_cast<std::size_t>(t - 1)); }
    Millis d_at(int t) const;
    Millis d_sum(int from, int to) const;  // inclusive; 0 when from > to
};

PairTimeline make_pair_timeline(const InteractionTimeline& timeline, const PairKey& pair);

// Decay since the most recent occurrence l < t: h(l) minus the separate
// interaction accumulated over (l, t]. Undefined without a prior occurrence.
std::optional<double> narrative_persistence(const PairTimeline& timeline, int t);

// Build-up toward the next occurrence n >= t: h(n) minus the separate
// interaction over [t, n). Undefined without a coming occurrence. The two
// window conventions differ deliberately; keep them as they are.
std::optional<double> narrative_anticipation(const PairTimeline& timeline, int t);

ExtendedWeight instantaneous_weight(const PairTimeline& timeline, int t);

// Logistic squash of the weight; bottom maps to 0, w = 0 to 0.5.
double normalize_weight(const ExtendedWeight& weight, const SmoothingParams& params);

// One snapshot per scene; every pair occurring anywhere in the timeline is
// present in every snapshot with its normalized weight. Pairs are processed
// in parallel; snapshots are assembled in deterministic pair order.
DynamicGraphSeries build_smoothed_series(const InteractionTimeline& timeline,
                                         const SmoothingParams& params = {});

// (scene, value) trajectories. Unknown speakers throw std::invalid_argument.
std::vector<std::pair<int, double>> node_strength_series(const DynamicGraphSeries& series,
                                                         const SpeakerId& who);
std::vector<std::pair<int, double>> link_weight_series(const DynamicGraphSeries& series,
                                                       const PairKey& pair);

}  // namespace narnet
