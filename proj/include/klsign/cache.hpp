#pragma once

// One file per entry: a 16-byte header (8-byte magic, u32 version, u32
// checksum over key and payload) followed by the payload verbatim. The file
// name is the FNV-1a hash of the key.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace klsign::cache {

inline constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a64(std::string_view s);
std::uint32_t fnv1a32(std::string_view s);

// --cache-dir, then KL_CACHE_DIR, then $XDG_CACHE_HOME/klsign, then
// $HOME/.cache/klsign, then ./.klsign-cache.
std::filesystem::path resolve_dir(const std::string& explicit_dir);

class Store {
public:
    explicit Store(std::filesystem::path dir, std::ostream* warnings = nullptr);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(std::string_view key) const;

    // nullopt on a miss. A damaged or mismatched entry is reported to the
    // warning stream and treated as a miss.
    std::optional<std::string> load(std::string_view key) const;

    // Writes to a temporary file and renames it into place. Failures are
    // reported as warnings; the cache never blocks a run.
    void store(std::string_view key, std::string_view payload) const;

private:
    void warn(const std::string& msg) const;

    std::filesystem::path dir_;
    std::ostream* warnings_;
};

} // namespace klsign::cache
