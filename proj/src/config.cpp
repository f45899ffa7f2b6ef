#include "netdyn/config.hpp"

#include <charconv>
#include <sstream>

#include "netdyn/error.hpp"
#include "netdyn/io.hpp"

namespace netdyn {

namespace fs = std::filesystem;

RunConfig RunConfig::load(const fs::path& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const IoError& e) {
        throw ConfigError(std::string("cannot read configuration: ") + e.what());
    }
    return parse(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

RunConfig RunConfig::parse(std::string_view text, fs::path base_dir) {
    RunConfig cfg;
    cfg.base_dir_ = std::move(base_dir);
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = io::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("configuration line " + std::to_string(lineno) + ": expected key = value");
        auto key = io::trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError("configuration line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = io::trim(std::string_view(t).substr(eq + 1));
    }
    return cfg;
}

void RunConfig::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

void RunConfig::set_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ConfigError("override must be key=value: " + std::string(assignment));
    set(io::trim(assignment.substr(0, eq)), io::trim(assignment.substr(eq + 1)));
}

bool RunConfig::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> RunConfig::get(std::string_view key) const {
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    return std::nullopt;
}

std::string RunConfig::require(std::string_view key) const {
    if (auto v = get(key)) return *v;
    throw ConfigError("missing configuration key: " + std::string(key));
}

std::string RunConfig::get_or(std::string_view key, std::string fallback) const {
    return get(key).value_or(std::move(fallback));
}

int RunConfig::get_int(std::string_view key, int fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    int out = 0;
    auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || end != v->data() + v->size())
        throw ConfigError("configuration key " + std::string(key) + ": expected an integer, got \"" + *v + "\"");
    return out;
}

int RunConfig::require_int(std::string_view key) const {
    require(key);
    return get_int(key, 0);
}

double RunConfig::get_double(std::string_view key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double out = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("configuration key " + std::string(key) + ": expected a number, got \"" + *v + "\"");
    }
}

std::uint64_t RunConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || end != v->data() + v->size())
        throw ConfigError("configuration key " + std::string(key) + ": expected an unsigned integer, got \"" + *v + "\"");
    return out;
}

bool RunConfig::get_bool(std::string_view key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
    throw ConfigError("configuration key " + std::string(key) + ": expected true/false, got \"" + *v + "\"");
}

std::vector<std::string> RunConfig::get_list(std::string_view key, std::vector<std::string> fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::vector<std::string> out;
    for (auto& item : io::split(*v, ','))
        if (!item.empty()) out.push_back(std::move(item));
    return out;
}

fs::path RunConfig::path(std::string_view key) const {
    fs::path p(require(key));
    return p.is_absolute() || base_dir_.empty() ? p : base_dir_ / p;
}

fs::path RunConfig::path_or(std::string_view key, const fs::path& fallback) const {
    return has(key) ? path(key) : fallback;
}

fs::path RunConfig::existing_path(std::string_view key) const {
    auto p = path(key);
    if (!fs::exists(p)) throw ConfigError("configuration key " + std::string(key) + ": file not found: " + p.string());
    return p;
}

std::map<std::string, std::string> RunConfig::with_prefix(std::string_view prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : entries_)
        if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) out[k.substr(prefix.size())] = v;
    return out;
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [k, v] : entries_) {
        if (k == "out" || k == "threads" || (k.size() > 4 && k.compare(k.size() - 4, 4, "_dir") == 0)) continue;
        feed(k);
        feed(v);
    }
    return h;
}

}  // namespace netdyn
