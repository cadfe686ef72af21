#include "narnet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "narnet/srt.hpp"

namespace narnet {

namespace {

bool valid_name(const std::string& name) {
    // Names travel through comma-separated lists and CSV columns.
    return !name.empty() && name.find(',') == std::string::npos &&
           name.find('\t') == std::string::npos;
}

std::optional<std::int64_t> parse_int(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    try {
        std::int64_t v = std::stoll(text, &pos);
        if (pos != text.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

struct PendingUtterance {
    Utterance utt;   // scene_index holds the episode-local index until finalize
    int line = 0;
};

struct EpisodeAcc {
    std::string id;
    bool directive_seen = false;
    std::optional<int> declared_scenes;
    std::optional<Millis> duration_ms;
    int max_scene = 0;
    int last_record_scene = 0;
    bool has_records = false;
    std::map<int, std::vector<PendingUtterance>> by_scene;
};

struct Builder {
    std::string source;
    std::string series_id;
    std::vector<EpisodeAcc> episodes;
    std::map<std::string, std::size_t> episode_index;
    std::vector<Diagnostic> diagnostics;

    void error(int line, std::string message) {
        diagnostics.push_back({source, line, true, std::move(message)});
    }

    EpisodeAcc& episode(const std::string& id) {
        auto it = episode_index.find(id);
        if (it != episode_index.end()) return episodes[it->second];
        episode_index.emplace(id, episodes.size());
        episodes.push_back(EpisodeAcc{});
        episodes.back().id = id;
        return episodes.back();
    }
};

void parse_directive(Builder& b, const std::string& body, int line) {
    std::string text = trim(body);
    if (text.rfind("series=", 0) == 0) {
        b.series_id = trim(text.substr(7));
        return;
    }
    if (text.rfind("episode=", 0) != 0) {
        b.error(line, "unknown directive (expected series= or episode=)");
        return;
    }
    std::istringstream words(text);
    std::string token;
    words >> token;  // episode=<id>
    std::string id = token.substr(8);
    if (id.empty()) {
        b.error(line, "episode directive without an id");
        return;
    }
    EpisodeAcc& ep = b.episode(id);
    if (ep.directive_seen) {
        b.error(line, "duplicate episode directive for '" + id + "'");
        return;
    }
    ep.directive_seen = true;
    while (words >> token) {
        auto eq = token.find('=');
        std::string key = token.substr(0, eq == std::string::npos ? token.size() : eq);
        std::optional<std::int64_t> value;
        if (eq != std::string::npos) value = parse_int(token.substr(eq + 1));
        if (key == "scenes" && value && *value >= 0) {
            ep.declared_scenes = static_cast<int>(*value);
        } else if (key == "duration_ms" && value && *value >= 0) {
            ep.duration_ms = *value;
        } else {
            b.error(line, "bad episode directive field '" + token + "'");
        }
    }
}

void parse_record(Builder& b, const std::string& line_text, int line,
                  std::size_t* current_episode) {
    auto fields = split(line_text, '\t');
    if (fields.size() != 6 && fields.size() != 7) {
        b.error(line, "malformed record: expected 6 or 7 tab-separated fields, got " +
                          std::to_string(fields.size()));
        return;
    }
    std::string episode_id = trim(fields[0]);
    if (episode_id.empty() || episode_id.find(' ') != std::string::npos) {
        b.error(line, "malformed record: bad episode id");
        return;
    }
    auto scene = parse_int(trim(fields[1]));
    if (!scene || *scene < 1) {
        b.error(line, "malformed record: scene index must be a positive integer");
        return;
    }
    std::string speaker = trim(fields[2]);
    if (!valid_name(speaker)) {
        b.error(line, "malformed record: bad speaker name");
        return;
    }
    auto start = parse_int(trim(fields[3]));
    auto end = parse_int(trim(fields[4]));
    if (!start || !end || *start < 0 || *end < 0) {
        b.error(line, "malformed record: bad start_ms/end_ms");
        return;
    }
    if (*end <= *start) {
        b.error(line, "empty utterance span (end_ms <= start_ms)");
        return;
    }

    Utterance utt;
    utt.scene_index = static_cast<int>(*scene);
    utt.speaker = speaker;
    utt.start_ms = *start;
    utt.end_ms = *end;

    std::string addr = trim(fields[5]);
    if (addr == "-") {
        utt.truth_addressees = std::nullopt;
    } else if (addr == "~") {
        utt.truth_addressees = std::set<SpeakerId>{};
    } else {
        std::set<SpeakerId> names;
        bool bad = false;
        for (const auto& part : split(addr, ',')) {
            std::string name = trim(part);
            if (!valid_name(name)) {
                b.error(line, "malformed record: bad addressee list");
                bad = true;
                break;
            }
            names.insert(name);
        }
        if (bad) return;
        if (names.count(speaker)) {
            b.error(line, "speaker listed as its own addressee");
            return;
        }
        utt.truth_addressees = std::move(names);
    }

    if (fields.size() == 7 && trim(fields[6]) != "-") utt.text = fields[6];

    EpisodeAcc& ep = b.episode(episode_id);
    std::size_t index = b.episode_index.at(episode_id);
    if (ep.has_records && *current_episode != index) {
        b.error(line, "episode '" + episode_id + "' records are not contiguous");
        return;
    }
    *current_episode = index;
    if (ep.has_records && utt.scene_index < ep.last_record_scene) {
        b.error(line, "scene index decreases within episode '" + episode_id + "'");
        return;
    }
    ep.has_records = true;
    ep.last_record_scene = utt.scene_index;
    ep.max_scene = std::max(ep.max_scene, utt.scene_index);
    ep.by_scene[utt.scene_index].push_back({std::move(utt), line});
}

ParseResult finalize(Builder& b) {
    for (auto& ep : b.episodes) {
        if (ep.declared_scenes && ep.max_scene > *ep.declared_scenes) {
            for (auto& [local, pending] : ep.by_scene) {
                if (local > *ep.declared_scenes) {
                    b.error(pending.front().line,
                            "utterance references unknown scene " + std::to_string(local) +
                                " (episode '" + ep.id + "' declares " +
                                std::to_string(*ep.declared_scenes) + ")");
                }
            }
        }
    }

    bool failed = !b.diagnostics.empty();
    Corpus corpus;
    corpus.series_id = b.series_id;
    int offset = 0;
    int next_id = 0;
    for (auto& ep : b.episodes) {
        int count = ep.declared_scenes.value_or(ep.max_scene);
        EpisodeRef ref{ep.id, offset + 1, offset + count, ep.duration_ms};
        std::optional<Millis> prev_scene_start;
        for (int local = 1; local <= count; ++local) {
            Scene scene;
            scene.index = offset + local;
            auto it = ep.by_scene.find(local);
            if (it != ep.by_scene.end()) {
                std::stable_sort(it->second.begin(), it->second.end(),
                                 [](const PendingUtterance& x, const PendingUtterance& y) {
                                     return x.utt.start_ms < y.utt.start_ms;
                                 });
                Millis first = it->second.front().utt.start_ms;
                if (prev_scene_start && first < *prev_scene_start) {
                    b.error(it->second.front().line,
                            "non-monotone scene timestamps within episode '" + ep.id + "'");
                    failed = true;
                }
                prev_scene_start = first;
                for (auto& pending : it->second) {
                    pending.utt.id = next_id++;
                    pending.utt.scene_index = scene.index;
                    corpus.speakers.insert(pending.utt.speaker);
                    scene.utterances.push_back(std::move(pending.utt));
                }
            }
            corpus.scenes.push_back(std::move(scene));
        }
        corpus.episodes.push_back(std::move(ref));
        offset += count;
    }

    failed = failed || !b.diagnostics.empty();
    ParseResult result;
    result.diagnostics = std::move(b.diagnostics);
    if (!failed) result.corpus = std::move(corpus);
    return result;
}

}  // namespace

std::set<SpeakerId> Scene::distinct_speakers() const {
    std::set<SpeakerId> out;
    for (const auto& utt : utterances) out.insert(utt.speaker);
    return out;
}

std::size_t Corpus::utterance_count() const {
    std::size_t n = 0;
    for (const auto& scene : scenes) n += scene.utterances.size();
    return n;
}

ParseResult parse_canonical_text(std::string_view text, const std::string& source_name) {
    Builder b;
    b.source = source_name;
    std::size_t current_episode = static_cast<std::size_t>(-1);

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                        : eol - pos));
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line.rfind("#!", 0) == 0) {
            parse_directive(b, line.substr(2), line_no);
        } else if (line[0] == '#') {
            continue;
        } else {
            parse_record(b, line, line_no, &current_episode);
        }
    }
    return finalize(b);
}

ParseResult parse_canonical(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {std::nullopt, {{path.string(), 0, true, "cannot open file"}}};
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ParseResult result = parse_canonical_text(buffer.str(), path.string());
    if (result.corpus && result.corpus->series_id.empty())
        result.corpus->series_id = path.stem().string();
    return result;
}

ParseResult parse_corpus(const std::filesystem::path& path, CorpusFormat format,
                         const std::filesystem::path& sidecar) {
    if (format == CorpusFormat::CanonicalRecords) return parse_canonical(path);
    return parse_srt({path}, sidecar);
}

std::string serialize_corpus(const Corpus& corpus) {
    std::ostringstream out;
    out << "#! series=" << corpus.series_id << "\n";
    for (const auto& ep : corpus.episodes) {
        out << "#! episode=" << ep.id << " scenes=" << (ep.last_scene - ep.first_scene + 1);
        if (ep.duration_ms) out << " duration_ms=" << *ep.duration_ms;
        out << "\n";
    }
    out << "# episode\tscene\tspeaker\tstart_ms\tend_ms\taddressees\ttext\n";
    for (const auto& ep : corpus.episodes) {
        for (int t = ep.first_scene; t <= ep.last_scene; ++t) {
            for (const auto& utt : corpus.scene(t).utterances) {
                out << ep.id << '\t' << (t - ep.first_scene + 1) << '\t' << utt.speaker << '\t'
                    << utt.start_ms << '\t' << utt.end_ms << '\t';
                if (!utt.truth_addressees) {
                    out << '-';
                } else if (utt.truth_addressees->empty()) {
                    out << '~';
                } else {
                    bool first = true;
                    for (const auto& name : *utt.truth_addressees) {
                        if (!first) out << ',';
                        out << name;
                        first = false;
                    }
                }
                out << '\t' << (utt.text ? *utt.text : "-") << "\n";
            }
        }
    }
    return out.str();
}

std::vector<Turn> merge_turns(const Scene& scene) {
    std::vector<Turn> turns;
    for (const auto& utt : scene.utterances) {
        if (turns.empty() || turns.back().speaker != utt.speaker) {
            turns.push_back({utt.speaker, {utt.id}, utt.start_ms, utt.end_ms});
        } else {
            turns.back().utterance_ids.push_back(utt.id);
            turns.back().end_ms = utt.end_ms;
        }
    }
    return turns;
}

std::map<int, double> speakers_per_scene_distribution(const Corpus& corpus) {
    std::size_t total = corpus.utterance_count();
    if (total == 0) throw std::invalid_argument("corpus has no utterances");
    std::map<int, std::size_t> counts;
    for (const auto& scene : corpus.scenes) {
        if (!scene.spoken()) continue;
        counts[static_cast<int>(scene.distinct_speakers().size())] += scene.utterances.size();
    }
    std::map<int, double> out;
    for (const auto& [n, c] : counts)
        out[n] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats s;
    s.episode_count = corpus.episodes.size();
    s.scene_count = corpus.scenes.size();
    s.speaker_count = corpus.speakers.size();

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& scene : corpus.scenes) {
        auto speakers = scene.distinct_speakers();
        if (scene.spoken()) ++s.spoken_scene_count;
        s.speaker_occurrences += speakers.size();
        s.utterance_count += scene.utterances.size();
        for (const auto& utt : scene.utterances) s.utterance_ms += utt.duration_ms();
        double n = static_cast<double>(speakers.size());
        sum += n;
        sum_sq += n * n;
    }
    if (s.scene_count > 0) {
        double count = static_cast<double>(s.scene_count);
        s.spoken_proportion = static_cast<double>(s.spoken_scene_count) / count;
        s.speakers_per_scene_mean = sum / count;
        double var = sum_sq / count - s.speakers_per_scene_mean * s.speakers_per_scene_mean;
        s.speakers_per_scene_stddev = std::sqrt(std::max(0.0, var));
    }

    bool all_durations = !corpus.episodes.empty();
    Millis episode_ms = 0;
    for (const auto& ep : corpus.episodes) {
        if (!ep.duration_ms) {
            all_durations = false;
            break;
        }
        episode_ms += *ep.duration_ms;
    }
    if (all_durations) {
        s.episode_ms = episode_ms;
        if (episode_ms > 0)
            s.speech_coverage = static_cast<double>(s.utterance_ms) / static_cast<double>(episode_ms);
    }
    return s;
}

std::string format_stats(const CorpusStats& s) {
    std::ostringstream out;
    out << "episodes             " << s.episode_count << "\n";
    out << "scenes               " << s.scene_count << "\n";
    out << "spoken scenes        " << s.spoken_scene_count << " ("
        << fmt_num(s.spoken_proportion) << ")\n";
    out << "utterances           " << s.utterance_count << "\n";
    out << "speakers             " << s.speaker_count << "\n";
    out << "speaker occurrences  " << s.speaker_occurrences << "\n";
    out << "speakers per scene   " << fmt_num(s.speakers_per_scene_mean) << " mean, "
        << fmt_num(s.speakers_per_scene_stddev) << " stddev\n";
    out << "speech time          " << fmt_num(ms_to_seconds(s.utterance_ms)) << " s\n";
    if (s.episode_ms)
        out << "episode time         " << fmt_num(ms_to_seconds(*s.episode_ms)) << " s\n";
    out << "speech coverage      "
        << (s.speech_coverage ? fmt_num(*s.speech_coverage) : std::string("unavailable"))
        << "\n";
    return out.str();
}

}  // namespace narnet
