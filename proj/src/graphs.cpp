#include "narnet/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace narnet {

double WeightedGraph::weight(const PairKey& pair) const {
    auto it = edges.find(pair);
    return it == edges.end() ? 0.0 : it->second;
}

std::string method_name(SeriesMethod method) {
    switch (method) {
        case SeriesMethod::CumulativePrefix: return "cumulative";
        case SeriesMethod::TimeSlice: return "slice";
        case SeriesMethod::NarrativeSmoothing: return "smooth";
    }
    return "?";
}

std::optional<SeriesMethod> parse_method_name(std::string_view token) {
    if (token == "cumulative") return SeriesMethod::CumulativePrefix;
    if (token == "slice") return SeriesMethod::TimeSlice;
    if (token == "smooth") return SeriesMethod::NarrativeSmoothing;
    return std::nullopt;
}

std::string SeriesParams::label() const {
    std::string out;
    auto add = [&](const std::string& piece) {
        if (!out.empty()) out += ';';
        out += piece;
    };
    if (window) add("window=" + std::to_string(*window));
    if (stride) add("stride=" + std::to_string(*stride));
    if (lambda) add("lambda=" + fmt_num(*lambda));
    return out;
}

namespace {

WeightedGraph graph_from_ms(const std::vector<SpeakerId>& speakers,
                            const std::map<PairKey, Millis>& totals) {
    WeightedGraph graph;
    graph.nodes = speakers;
    graph.scheme = WeightScheme::Seconds;
    for (const auto& [pair, ms] : totals)
        if (ms > 0) graph.edges.emplace(pair, ms_to_seconds(ms));
    return graph;
}

}  // namespace

WeightedGraph build_cumulative(const InteractionTimeline& timeline, std::optional<int> upto) {
    int t_max = upto.value_or(timeline.scene_count());
    if (t_max < 0 || t_max > timeline.scene_count())
        throw std::invalid_argument("cumulative bound outside the timeline");
    std::map<PairKey, Millis> totals;
    for (int t = 1; t <= t_max; ++t)
        for (const auto& [pair, ms] : timeline.scenes[static_cast<std::size_t>(t - 1)].ms)
            totals[pair] += ms;
    return graph_from_ms(timeline.speakers, totals);
}

DynamicGraphSeries build_cumulative_prefix_series(const InteractionTimeline& timeline) {
    DynamicGraphSeries series;
    series.method = SeriesMethod::CumulativePrefix;
    std::map<PairKey, Millis> totals;
    for (int t = 1; t <= timeline.scene_count(); ++t) {
        for (const auto& [pair, ms] : timeline.scenes[static_cast<std::size_t>(t - 1)].ms)
            totals[pair] += ms;
        series.snapshots.push_back({t, graph_from_ms(timeline.speakers, totals)});
    }
    return series;
}

DynamicGraphSeries build_time_slice_series(const InteractionTimeline& timeline, int window,
                                           int stride) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    DynamicGraphSeries series;
    series.method = SeriesMethod::TimeSlice;
    series.params.window = window;
    series.params.stride = stride;

    std::vector<int> snapshot_scenes;
    for (int t = 1; t <= timeline.scene_count(); t += stride) snapshot_scenes.push_back(t);
    series.snapshots.resize(snapshot_scenes.size());

    int count = static_cast<int>(snapshot_scenes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (int k = 0; k < count; ++k) {
        int t = snapshot_scenes[static_cast<std::size_t>(k)];
        std::map<PairKey, Millis> totals;
        for (int u = std::max(1, t - window + 1); u <= t; ++u)
            for (const auto& [pair, ms] : timeline.scenes[static_cast<std::size_t>(u - 1)].ms)
                totals[pair] += ms;
        series.snapshots[static_cast<std::size_t>(k)] = {t,
                                                         graph_from_ms(timeline.speakers, totals)};
    }
    return series;
}

Millis PairTimeline::d_at(int t) const {
    return d_prefix_ms.at(static_cast<std::size_t>(t)) -
           d_prefix_ms.at(static_cast<std::size_t>(t - 1));
}

Millis PairTimeline::d_sum(int from, int to) const {
    if (from > to) return 0;
    return d_prefix_ms.at(static_cast<std::size_t>(to)) -
           d_prefix_ms.at(static_cast<std::size_t>(from - 1));
}

PairTimeline make_pair_timeline(const InteractionTimeline& timeline, const PairKey& pair) {
    int t_count = timeline.scene_count();
    PairTimeline out{pair, {}, {}, {}};
    out.h_ms.assign(static_cast<std::size_t>(t_count), 0);
    out.d_prefix_ms.assign(static_cast<std::size_t>(t_count) + 1, 0);
    for (int t = 1; t <= t_count; ++t) {
        const auto& scene = timeline.scenes[static_cast<std::size_t>(t - 1)];
        Millis h = 0, d = 0;
        for (const auto& [key, ms] : scene.ms) {
            bool has_a = key.a == pair.a || key.a == pair.b;
            bool has_b = key.b == pair.a || key.b == pair.b;
            if (has_a && has_b) {
                h = ms;
            } else if (has_a || has_b) {
                d += ms;
            }
        }
        out.h_ms[static_cast<std::size_t>(t - 1)] = h;
        out.d_prefix_ms[static_cast<std::size_t>(t)] =
            out.d_prefix_ms[static_cast<std::size_t>(t - 1)] + d;
        if (h > 0) out.occurrence_scenes.push_back(t);
    }
    return out;
}

namespace {

// Exact integer forms; seconds conversion happens once, at the edge.
std::optional<Millis> persistence_ms(const PairTimeline& tl, int t) {
    auto it = std::lower_bound(tl.occurrence_scenes.begin(), tl.occurrence_scenes.end(), t);
    if (it == tl.occurrence_scenes.begin()) return std::nullopt;
    int last = *(it - 1);
    return tl.h_at(last) - tl.d_sum(last + 1, t);
}

std::optional<Millis> anticipation_ms(const PairTimeline& tl, int t) {
    auto it = std::lower_bound(tl.occurrence_scenes.begin(), tl.occurrence_scenes.end(), t);
    if (it == tl.occurrence_scenes.end()) return std::nullopt;
    int next = *it;
    return tl.h_at(next) - tl.d_sum(t, next - 1);
}

struct ExtendedMillis {
    Millis ms = 0;
    bool bottom = false;
};

ExtendedMillis instantaneous_weight_ms(const PairTimeline& tl, int t) {
    Millis here = tl.h_at(t);
    if (here > 0) return {here, false};
    auto last = persistence_ms(tl, t);
    auto next = anticipation_ms(tl, t);  // strictly future here since h(t) == 0
    if (last && next) return {std::max(*last, *next), false};
    if (last) return {*last, false};
    if (next) return {*next, false};
    return {0, true};
}

void check_scene(const PairTimeline& tl, int t) {
    if (t < 1 || t > tl.scene_count()) throw std::out_of_range("scene index outside timeline");
}

}  // namespace

std::optional<double> narrative_persistence(const PairTimeline& timeline, int t) {
    check_scene(timeline, t);
    auto ms = persistence_ms(timeline, t);
    if (!ms) return std::nullopt;
    return ms_to_seconds(*ms);
}

std::optional<double> narrative_anticipation(const PairTimeline& timeline, int t) {
    check_scene(timeline, t);
    auto ms = anticipation_ms(timeline, t);
    if (!ms) return std::nullopt;
    return ms_to_seconds(*ms);
}

ExtendedWeight instantaneous_weight(const PairTimeline& timeline, int t) {
    check_scene(timeline, t);
    auto w = instantaneous_weight_ms(timeline, t);
    if (w.bottom) return {0.0, true};
    return {ms_to_seconds(w.ms), false};
}

double normalize_weight(const ExtendedWeight& weight, const SmoothingParams& params) {
    if (params.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (weight.bottom) return 0.0;
    return 1.0 / (1.0 + std::exp(-params.lambda * weight.seconds));
}

DynamicGraphSeries build_smoothed_series(const InteractionTimeline& timeline,
                                         const SmoothingParams& params) {
    if (params.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    DynamicGraphSeries series;
    series.method = SeriesMethod::NarrativeSmoothing;
    series.params.lambda = params.lambda;

    int t_count = timeline.scene_count();
    std::set<PairKey> pair_set;
    for (const auto& scene : timeline.scenes)
        for (const auto& [pair, ms] : scene.ms)
            if (ms > 0) pair_set.insert(pair);
    std::vector<PairKey> pairs(pair_set.begin(), pair_set.end());

    // Pair trajectories are independent; each slot is written by one thread
    // and assembly below follows the sorted pair order, so the result does
    // not depend on the schedule.
    std::vector<std::vector<double>> weights(pairs.size());
    int pair_count = static_cast<int>(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (int p = 0; p < pair_count; ++p) {
        PairTimeline tl = make_pair_timeline(timeline, pairs[static_cast<std::size_t>(p)]);
        std::vector<double> row(static_cast<std::size_t>(t_count), 0.0);
        for (int t = 1; t <= t_count; ++t)
            row[static_cast<std::size_t>(t - 1)] =
                normalize_weight(instantaneous_weight(tl, t), params);
        weights[static_cast<std::size_t>(p)] = std::move(row);
    }

    series.snapshots.reserve(static_cast<std::size_t>(t_count));
    for (int t = 1; t <= t_count; ++t) {
        WeightedGraph graph;
        graph.nodes = timeline.speakers;
        graph.scheme = WeightScheme::Normalized;
        for (std::size_t p = 0; p < pairs.size(); ++p)
            graph.edges.emplace(pairs[p], weights[p][static_cast<std::size_t>(t - 1)]);
        series.snapshots.push_back({t, std::move(graph)});
    }
    return series;
}

namespace {

void require_known(const DynamicGraphSeries& series, const SpeakerId& who) {
    if (series.snapshots.empty()) return;
    const auto& nodes = series.snapshots.front().graph.nodes;
    if (!std::binary_search(nodes.begin(), nodes.end(), who))
        throw std::invalid_argument("unknown speaker '" + who + "'");
}

}  // namespace

std::vector<std::pair<int, double>> node_strength_series(const DynamicGraphSeries& series,
                                                         const SpeakerId& who) {
    require_known(series, who);
    std::vector<std::pair<int, double>> out;
    out.reserve(series.snapshots.size());
    for (const auto& snapshot : series.snapshots) {
        double strength = 0.0;
        for (const auto& [pair, w] : snapshot.graph.edges)
            if (pair.a == who || pair.b == who) strength += w;
        out.emplace_back(snapshot.scene_index, strength);
    }
    return out;
}

std::vector<std::pair<int, double>> link_weight_series(const DynamicGraphSeries& series,
                                                       const PairKey& pair) {
    require_known(series, pair.a);
    require_known(series, pair.b);
    std::vector<std::pair<int, double>> out;
    out.reserve(series.snapshots.size());
    for (const auto& snapshot : series.snapshots)
        out.emplace_back(snapshot.scene_index, snapshot.graph.weight(pair));
    return out;
}

}  // namespace narnet
