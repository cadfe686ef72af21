#pragma once

#include "narnet/corpus.hpp"

namespace narnet {

// "HH:MM:SS,mmm" (or '.' before the millisecond field).
std::optional<Millis> parse_srt_timestamp(std::string_view text);

// SubRip ingestion. Every subtitle must carry a "SPEAKER: " prefix on its
// first text line. Scene boundaries come from the sidecar: lines of
// "episode_id<TAB>scene_start_ms", strictly increasing per episode. An
// episode id is the stem of its .srt file name; episode order follows the
// file list.
ParseResult parse_srt(const std::vector<std::filesystem::path>& episode_files,
                      const std::filesystem::path& sidecar);

}  // namespace narnet
