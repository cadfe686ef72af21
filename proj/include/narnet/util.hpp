#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace narnet {

// All timing is kept in integer milliseconds internally so that sums are
// exact and independent of evaluation order; values are converted to
// seconds only at the reporting boundary.
using Millis = std::int64_t;

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Shared numeric format for derived output: 5 significant digits.
std::string fmt_num(double v);

double ms_to_seconds(Millis ms);

// Thread budget for the parallel kernels. NARRATIVE_NET_THREADS lowers it.
int thread_cap();

struct Diagnostic {
    std::string file;
    int line = 0;  // 0 = whole-file
    bool is_error = true;
    std::string message;

    std::string str() const;
};

}  // namespace narnet
