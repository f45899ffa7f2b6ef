#pragma once

// Plain-text `key = value` run configuration.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netdyn {

class RunConfig {
public:
    RunConfig() = default;

    /// Parses `key = value` lines; '#' starts a comment line. Relative paths
    /// resolve against the file's directory.
    static RunConfig load(const std::filesystem::path& path);
    static RunConfig parse(std::string_view text, std::filesystem::path base_dir = {});

    /// Command-line overrides, `key=value`.
    void set(std::string key, std::string value);
    void set_override(std::string_view assignment);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback) const;
    int get_int(std::string_view key, int fallback) const;
    int require_int(std::string_view key) const;
    double get_double(std::string_view key, double fallback) const;
    std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    std::vector<std::string> get_list(std::string_view key, std::vector<std::string> fallback = {}) const;

    /// Value of `key` as a path; relative paths resolve against the config dir.
    std::filesystem::path path(std::string_view key) const;
    std::filesystem::path path_or(std::string_view key, const std::filesystem::path& fallback) const;
    /// Throws ConfigError naming the key when the referenced file is absent.
    std::filesystem::path existing_path(std::string_view key) const;

    /// Entries whose key starts with `prefix`, prefix stripped.
    std::map<std::string, std::string> with_prefix(std::string_view prefix) const;

    /// FNV-1a over the sorted entries, excluding keys that only affect where
    /// or how fast outputs are produced (out, threads, and *_dir paths).
    std::uint64_t hash() const;

    const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }
    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
    std::filesystem::path base_dir_;
};

}  // namespace netdyn
