#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>

namespace wellopt::detail {

/// Shortest round-trip decimal form of a double (locale-independent), the
/// one representation that keeps exported CSVs byte-stable across reruns.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

/// 64-bit FNV-1a running hash.
struct Fnv1a {
    std::uint64_t state = 1469598103934665603ull;
    void feed(const std::string& s) {
        for (unsigned char c : s) {
            state ^= c;
            state *= 1099511628211ull;
        }
    }
    std::string hex() const;
};

/// Write `content` to a sibling temp file and rename it onto `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace wellopt::detail
