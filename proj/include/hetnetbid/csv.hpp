#ifndef HETNETBID_CSV_HPP
#define HETNETBID_CSV_HPP

#include <charconv>
#include <string>

namespace hetnetbid {

/// Shortest round-trip decimal representation; keeps CSV output
/// byte-stable across runs.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace hetnetbid

#endif
