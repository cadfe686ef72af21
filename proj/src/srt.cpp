#include "narnet/srt.hpp"

#include <algorithm>
#include <fstream>

namespace narnet {

namespace {

struct SceneTable {
    // Per episode, the declared scene start times in declaration order.
    std::map<std::string, std::vector<Millis>> starts;
};

std::optional<SceneTable> parse_sidecar(const std::filesystem::path& path,
                                        std::vector<Diagnostic>& diagnostics) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        diagnostics.push_back({path.string(), 0, true, "cannot open sidecar"});
        return std::nullopt;
    }
    SceneTable table;
    bool failed = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2) {
            diagnostics.push_back({path.string(), line_no, true,
                                   "expected episode_id<TAB>scene_start_ms"});
            failed = true;
            continue;
        }
        std::string id = trim(fields[0]);
        Millis ms = -1;
        try {
            std::size_t pos = 0;
            ms = std::stoll(trim(fields[1]), &pos);
            if (pos != trim(fields[1]).size()) ms = -1;
        } catch (const std::exception&) {
        }
        if (id.empty() || ms < 0) {
            diagnostics.push_back({path.string(), line_no, true, "bad sidecar entry"});
            failed = true;
            continue;
        }
        auto& list = table.starts[id];
        if (!list.empty() && ms <= list.back()) {
            diagnostics.push_back({path.string(), line_no, true,
                                   "non-monotone scene timestamps within episode '" + id + "'"});
            failed = true;
            continue;
        }
        list.push_back(ms);
    }
    if (failed) return std::nullopt;
    return table;
}

struct Block {
    Millis start = 0, end = 0;
    SpeakerId speaker;
    std::string text;
};

std::vector<Block> parse_srt_file(const std::filesystem::path& path,
                                  std::vector<Diagnostic>& diagnostics) {
    std::vector<Block> blocks;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        diagnostics.push_back({path.string(), 0, true, "cannot open file"});
        return blocks;
    }
    std::vector<std::string> lines;
    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        lines.push_back(raw);
    }
    if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0].erase(0, 3);

    std::size_t i = 0;
    auto skip_blank = [&] { while (i < lines.size() && trim(lines[i]).empty()) ++i; };
    auto resync = [&] { while (i < lines.size() && !trim(lines[i]).empty()) ++i; };

    while (true) {
        skip_blank();
        if (i >= lines.size()) break;
        std::string counter = trim(lines[i]);
        if (counter.empty() ||
            !std::all_of(counter.begin(), counter.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            diagnostics.push_back({path.string(), static_cast<int>(i + 1), true,
                                   "expected a subtitle counter"});
            resync();
            continue;
        }
        ++i;
        if (i >= lines.size()) {
            diagnostics.push_back({path.string(), static_cast<int>(i), true, "truncated subtitle"});
            break;
        }
        std::string timing = lines[i];
        auto arrow = timing.find("-->");
        std::optional<Millis> start, end;
        if (arrow != std::string::npos) {
            start = parse_srt_timestamp(trim(timing.substr(0, arrow)));
            end = parse_srt_timestamp(trim(timing.substr(arrow + 3)));
        }
        if (!start || !end) {
            diagnostics.push_back({path.string(), static_cast<int>(i + 1), true,
                                   "bad timing line"});
            resync();
            continue;
        }
        ++i;
        int first_text_line = static_cast<int>(i + 1);
        std::vector<std::string> text_lines;
        while (i < lines.size() && !trim(lines[i]).empty()) text_lines.push_back(lines[i++]);
        if (text_lines.empty()) {
            diagnostics.push_back({path.string(), first_text_line, true, "empty subtitle"});
            continue;
        }
        auto colon = text_lines[0].find(':');
        std::string speaker = colon == std::string::npos ? "" : trim(text_lines[0].substr(0, colon));
        if (speaker.empty() || speaker.find(',') != std::string::npos) {
            diagnostics.push_back({path.string(), first_text_line, true,
                                   "missing or bad speaker label (expected \"SPEAKER: text\")"});
            continue;
        }
        if (*end <= *start) {
            diagnostics.push_back({path.string(), first_text_line - 1, true,
                                   "empty utterance span (end <= start)"});
            continue;
        }
        std::string text = trim(text_lines[0].substr(colon + 1));
        for (std::size_t k = 1; k < text_lines.size(); ++k) {
            std::string extra = trim(text_lines[k]);
            if (extra.empty()) continue;
            if (!text.empty()) text += ' ';
            text += extra;
        }
        blocks.push_back({*start, *end, std::move(speaker), std::move(text)});
    }
    return blocks;
}

}  // namespace

std::optional<Millis> parse_srt_timestamp(std::string_view text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) return std::nullopt;
    std::string secs = parts[2];
    std::size_t dot = secs.find_first_of(",.");
    if (dot == std::string::npos) return std::nullopt;
    auto to_int = [](const std::string& s) -> std::optional<Millis> {
        if (s.empty()) return std::nullopt;
        for (char c : s)
            if (c < '0' || c > '9') return std::nullopt;
        try {
            return std::stoll(s);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    auto h = to_int(trim(parts[0]));
    auto m = to_int(trim(parts[1]));
    auto s = to_int(trim(secs.substr(0, dot)));
    auto ms = to_int(trim(secs.substr(dot + 1)));
    if (!h || !m || !s || !ms || *m >= 60 || *s >= 60 || *ms >= 1000) return std::nullopt;
    return ((*h * 60 + *m) * 60 + *s) * 1000 + *ms;
}

ParseResult parse_srt(const std::vector<std::filesystem::path>& episode_files,
                      const std::filesystem::path& sidecar) {
    ParseResult result;
    auto table = parse_sidecar(sidecar, result.diagnostics);
    if (!table) return result;

    Corpus corpus;
    corpus.series_id = sidecar.stem().string();
    int offset = 0;
    int next_id = 0;
    bool failed = false;

    for (const auto& path : episode_files) {
        std::string id = path.stem().string();
        auto starts_it = table->starts.find(id);
        if (starts_it == table->starts.end() || starts_it->second.empty()) {
            result.diagnostics.push_back({sidecar.string(), 0, true,
                                          "sidecar declares no scenes for episode '" + id + "'"});
            failed = true;
            continue;
        }
        const auto& starts = starts_it->second;
        int scene_count = static_cast<int>(starts.size());

        auto blocks = parse_srt_file(path, result.diagnostics);
        std::vector<std::vector<Block>> by_scene(static_cast<std::size_t>(scene_count));
        int block_no = 0;
        for (auto& block : blocks) {
            ++block_no;
            if (block.start < starts.front()) {
                result.diagnostics.push_back(
                    {path.string(), 0, true,
                     "subtitle " + std::to_string(block_no) + " starts before the first scene"});
                failed = true;
                continue;
            }
            auto it = std::upper_bound(starts.begin(), starts.end(), block.start);
            std::size_t scene = static_cast<std::size_t>(it - starts.begin());  // 1-based
            by_scene[scene - 1].push_back(std::move(block));
        }

        for (int local = 1; local <= scene_count; ++local) {
            Scene scene;
            scene.index = offset + local;
            auto& list = by_scene[static_cast<std::size_t>(local - 1)];
            std::stable_sort(list.begin(), list.end(),
                             [](const Block& x, const Block& y) { return x.start < y.start; });
            for (auto& block : list) {
                Utterance utt;
                utt.id = next_id++;
                utt.scene_index = scene.index;
                utt.speaker = std::move(block.speaker);
                utt.start_ms = block.start;
                utt.end_ms = block.end;
                if (!block.text.empty()) utt.text = std::move(block.text);
                corpus.speakers.insert(utt.speaker);
                scene.utterances.push_back(std::move(utt));
            }
            corpus.scenes.push_back(std::move(scene));
        }
        corpus.episodes.push_back({id, offset + 1, offset + scene_count, std::nullopt});
        offset += scene_count;
    }

    for (const auto& d : result.diagnostics) failed = failed || d.is_error;
    if (!failed) result.corpus = std::move(corpus);
    return result;
}

}  // namespace narnet
