#include "klsign/cache.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <thread>

#include <unistd.h>

namespace klsign::cache {

namespace {

constexpr std::array<char, 8> kMagic{'K', 'L', 'S', 'C', 'A', 'C', 'H', 'E'};
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const char* p)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::uint32_t checksum(std::string_view key, std::string_view payload)
{
    std::string buf;
    buf.reserve(key.size() + 1 + payload.size());
    buf.append(key);
    buf.push_back('\0');
    buf.append(payload);
    return fnv1a32(buf);
}

} // namespace

std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint32_t fnv1a32(std::string_view s)
{
    std::uint32_t h = 0x811c9dc5u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x01000193u;
    }
    return h;
}

std::filesystem::path resolve_dir(const std::string& explicit_dir)
{
    if (!explicit_dir.empty())
        return explicit_dir;
    if (const char* env = std::getenv("KL_CACHE_DIR"); env && *env)
        return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
        return std::filesystem::path(xdg) / "klsign";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "klsign";
    return ".klsign-cache";
}

Store::Store(std::filesystem::path dir, std::ostream* warnings) : dir_(std::move(dir)), warnings_(warnings) {}

std::filesystem::path Store::path_for(std::string_view key) const
{
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.bin", static_cast<unsigned long long>(fnv1a64(key)));
    return dir_ / name;
}

void Store::warn(const std::string& msg) const
{
    if (warnings_)
        *warnings_ << "warning: " << msg << '\n';
}

std::optional<std::string> Store::load(std::string_view key) const
{
    const auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        warn("cache entry " + path.string() + " unreadable; recomputing");
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string raw = ss.str();
    if (raw.size() < kHeaderSize || std::memcmp(raw.data(), kMagic.data(), kMagic.size()) != 0) {
        warn("cache entry " + path.string() + " has a bad header; recomputing");
        return std::nullopt;
    }
    if (get_u32(raw.data() + 8) != kFormatVersion) {
        warn("cache entry " + path.string() + " has an unknown version; recomputing");
        return std::nullopt;
    }
    std::string payload = raw.substr(kHeaderSize);
    if (get_u32(raw.data() + 12) != checksum(key, payload)) {
        warn("cache entry " + path.string() + " failed its checksum; recomputing");
        return std::nullopt;
    }
    return payload;
}

void Store::store(std::string_view key, std::string_view payload) const
{
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        warn("cannot create cache directory " + dir_.string() + ": " + ec.message());
        return;
    }
    std::string blob(kMagic.begin(), kMagic.end());
    put_u32(blob, kFormatVersion);
    put_u32(blob, checksum(key, payload));
    blob.append(payload);

    const auto final_path = path_for(key);
    std::ostringstream tmp_name;
    tmp_name << final_path.filename().string() << ".tmp." << ::getpid() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id());
    const auto tmp = dir_ / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        if (!out) {
            warn("cannot write cache entry " + tmp.string());
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) {
        warn("cannot publish cache entry " + final_path.string() + ": " + ec.message());
        std::filesystem::remove(tmp, ec);
    }
}

} // namespace klsign::cache
