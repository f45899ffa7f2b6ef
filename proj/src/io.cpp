#include "netdyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "netdyn/error.hpp"

namespace netdyn::io {

using nlohmann::json;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(path.string(), "write failed");
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> data_lines(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

namespace {

int parse_int(const std::string& s, const fs::path& path) {
    int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size())
        throw ValidationError(path.string() + ": expected an integer, got \"" + s + "\"");
    return v;
}

double parse_double(const std::string& s, const fs::path& path) {
    if (s == "NA" || s == "NaN" || s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(path.string() + ": expected a number, got \"" + s + "\"");
    }
}

int actor_index(const ActorSet& actors, const std::string& label, const fs::path& path) {
    auto idx = actors.index_of(label);
    if (!idx) throw ValidationError(path.string() + ": actor " + label + " is not in the actor set");
    return *idx;
}

bool is_header(const std::vector<std::string>& cells) { return !cells.empty() && cells[0] == "year"; }

std::string comment(std::string_view provenance) {
    return provenance.empty() ? std::string() : "# " + std::string(provenance) + "\n";
}

}  // namespace

ActorSet read_actor_set(const fs::path& path) {
    std::vector<std::string> labels;
    for (const auto& line : data_lines(path)) labels.push_back(trim(line));
    if (labels.empty()) throw ValidationError(path.string() + ": actor set is empty");
    return ActorSet(std::move(labels));
}

DisambiguationDictionary read_dictionary(const fs::path& path, const ActorSet& actors,
                                         std::optional<UnmatchedPolicy> fallback) {
    std::istringstream in(read_text(path));
    std::optional<UnmatchedPolicy> policy;
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line.front() == '#') {
            auto body = trim(std::string_view(line).substr(1));
            if (body.rfind("policy", 0) == 0) {
                auto value = trim(body.substr(body.find_first_of(":=") == std::string::npos ? 6 : body.find_first_of(":=") + 1));
                if (value == "drop") policy = UnmatchedPolicy::drop;
                else if (value == "error") policy = UnmatchedPolicy::error;
                else throw ValidationError(path.string() + ": unknown unmatched-name policy \"" + value + "\"");
            }
            continue;
        }
        auto cells = split(line, '\t');
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty())
            throw ValidationError(fmt::format("{}:{}: expected \"raw name<TAB>ISO3\"", path.string(), lineno));
        rows.emplace_back(cells[0], cells[1]);
    }
    DisambiguationDictionary dict(actors, policy.value_or(fallback.value_or(UnmatchedPolicy::drop)));
    for (auto& [raw, code] : rows) {
        if (code == "-" || code == "NA") dict.add(raw, std::nullopt);
        else dict.add(raw, code);
    }
    return dict;
}

std::vector<ArticleRecord> read_records(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<ArticleRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line.front() == '#') continue;
        try {
            out.push_back(parse_record(line));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string weighted_edgelist(const WeightedNetwork& net, std::string_view provenance) {
    std::string out = comment(provenance) + "year,iso3_a,iso3_b,weight\n";
    const auto& a = net.actors();
    for (int i = 0; i < net.size(); ++i)
        for (int j = i + 1; j < net.size(); ++j)
            if (net.weight(i, j) > 0) out += fmt::format("{},{},{},{}\n", net.year(), a.label(i), a.label(j), net.weight(i, j));
    return out;
}

WeightedNetwork read_weighted_edgelist(const fs::path& path, const ActorSet& actors, int year) {
    WeightedNetwork net(actors, year);
    for (const auto& line : data_lines(path)) {
        auto cells = split(line, ',');
        if (is_header(cells)) continue;
        if (cells.size() != 4) throw ValidationError(path.string() + ": expected year,iso3_a,iso3_b,weight");
        if (parse_int(cells[0], path) != year)
            throw ValidationError(path.string() + ": row for year " + cells[0] + " in the file for " + std::to_string(year));
        const int i = actor_index(actors, cells[1], path);
        const int j = actor_index(actors, cells[2], path);
        const int w = parse_int(cells[3], path);
        if (w < 0) throw ValidationError(path.string() + ": negative weight");
        net.add_weight(i, j, w);
    }
    return net;
}

std::string binary_edgelist(const BinaryNetwork& net, std::string_view provenance, const BackboneScores* scores) {
    std::string out = comment(provenance) + (scores ? "year,iso3_a,iso3_b,alpha\n" : "year,iso3_a,iso3_b\n");
    for (int i = 0; i < net.size(); ++i) {
        for (int j = i + 1; j < net.size(); ++j) {
            if (!net.x.has(i, j)) continue;
            out += fmt::format("{},{},{}", net.year, net.actors.label(i), net.actors.label(j));
            if (scores) out += "," + format_double(scores->alpha_at(i, j));
            out += '\n';
        }
    }
    return out;
}

BinaryNetwork read_binary_edgelist(const fs::path& path, const ActorSet& actors, int year) {
    BinaryNetwork net(actors, year);
    for (const auto& line : data_lines(path)) {
        auto cells = split(line, ',');
        if (is_header(cells)) continue;
        if (cells.size() < 3) throw ValidationError(path.string() + ": expected year,iso3_a,iso3_b");
        if (parse_int(cells[0], path) != year)
            throw ValidationError(path.string() + ": row for year " + cells[0] + " in the file for " + std::to_string(year));
        const int i = actor_index(actors, cells[1], path);
        const int j = actor_index(actors, cells[2], path);
        if (i == j) throw ValidationError(path.string() + ": self-tie for " + cells[1]);
        net.x.set(i, j, true);
    }
    return net;
}

ActorCovariate read_actor_covariate(const fs::path& path, std::string name, const ActorSet& actors,
                                    const std::vector<int>& years, Transform transform) {
    const int n = actors.size();
    const int periods = static_cast<int>(years.size());
    std::vector<double> raw(static_cast<std::size_t>(n) * static_cast<std::size_t>(periods),
                            std::numeric_limits<double>::quiet_NaN());
    for (const auto& line : data_lines(path)) {
        auto cells = split(line, ',');
        if (!cells.empty() && cells[0] == "iso3") continue;
        if (cells.size() != 3)
            throw ValidationError("covariate " + name + " (" + path.string() + "): expected iso3,year,value rows");
        auto idx = actors.index_of(cells[0]);
        if (!idx)
            throw ValidationError("covariate " + name + " (" + path.string() + "): actor " + cells[0] +
                                  " is not in the actor set");
        const int year = parse_int(cells[1], path);
        auto at = std::find(years.begin(), years.end(), year);
        if (at == years.end()) continue;
        const auto m = static_cast<std::size_t>(at - years.begin());
        raw[static_cast<std::size_t>(*idx) * static_cast<std::size_t>(periods) + m] = parse_double(cells[2], path);
    }
    try {
        return ActorCovariate(std::move(name), n, periods, std::move(raw), transform);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(e.what()) + " (" + path.string() + ")");
    }
}

DyadCovariate read_dyad_covariate(const fs::path& path, std::string name, const ActorSet& actors, Transform transform) {
    const auto lines = data_lines(path);
    if (lines.empty()) throw ValidationError("dyadic covariate " + name + ": empty file " + path.string());
    const auto header = split(lines[0], ',');
    const int n = actors.size();
    std::vector<int> column_actor;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto idx = actors.index_of(header[c]);
        column_actor.push_back(idx ? *idx : -1);
    }
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                               std::numeric_limits<double>::quiet_NaN());
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size())
            throw ValidationError("dyadic covariate " + name + ": row " + std::to_string(r) + " has wrong width");
        auto row = actors.index_of(cells[0]);
        if (!row) continue;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const int col = column_actor[c - 1];
            if (col < 0) continue;
            values[static_cast<std::size_t>(*row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)] =
                parse_double(cells[c], path);
        }
    }
    for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 0.0;
        for (int j = 0; j < n; ++j)
            if (std::isnan(values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]))
                throw ValidationError("dyadic covariate " + name + ": no value for " + actors.label(i) + "-" +
                                      actors.label(j));
    }
    return DyadCovariate(std::move(name), n, std::move(values), transform);
}

// ---------------------------------------------------------------------------

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string xml_unescape(std::string s) {
    const std::pair<const char*, const char*> table[] = {{"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&amp;", "&"}};
    for (auto [from, to] : table) {
        for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + 1)) s.replace(pos, std::strlen(from), to);
    }
    return s;
}

}  // namespace

std::string graphml(const BinaryNetwork& net, const std::vector<NodeAttribute>& attributes, std::string_view provenance) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!provenance.empty()) out += "<!-- " + std::string(provenance) + " -->\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out += "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n";
    for (std::size_t a = 0; a < attributes.size(); ++a)
        out += fmt::format("  <key id=\"c{}\" for=\"node\" attr.name=\"{}\" attr.type=\"double\"/>\n", a,
                           xml_escape(attributes[a].name));
    out += fmt::format("  <graph id=\"{}\" edgedefault=\"undirected\">\n", net.year);
    for (int i = 0; i < net.size(); ++i) {
        out += fmt::format("    <node id=\"{}\"><data key=\"degree\">{}</data>", xml_escape(net.actors.label(i)),
                           net.x.degree(i));
        for (std::size_t a = 0; a < attributes.size(); ++a) {
            const auto& v = attributes[a].values.at(static_cast<std::size_t>(i));
            if (v) out += fmt::format("<data key=\"c{}\">{}</data>", a, format_double(*v));
        }
        out += "</node>\n";
    }
    for (int i = 0; i < net.size(); ++i)
        for (int j = i + 1; j < net.size(); ++j)
            if (net.x.has(i, j))
                out += fmt::format("    <edge source=\"{}\" target=\"{}\"/>\n", xml_escape(net.actors.label(i)),
                                   xml_escape(net.actors.label(j)));
    out += "  </graph>\n</graphml>\n";
    return out;
}

BinaryNetwork read_graphml(const fs::path& path, const ActorSet& actors, int year) {
    const auto text = read_text(path);
    BinaryNetwork net(actors, year);
    static const std::regex edge(R"re(<edge\s+source="([^"]*)"\s+target="([^"]*)")re");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), edge); it != std::sregex_iterator(); ++it) {
        const int i = actor_index(actors, xml_unescape((*it)[1].str()), path);
        const int j = actor_index(actors, xml_unescape((*it)[2].str()), path);
        net.x.set(i, j, true);
    }
    return net;
}

// ---------------------------------------------------------------------------

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
}

Eigen::VectorXd vector_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = j[k].is_null() ? NAN : j[k].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return m;
}

}  // namespace

std::string result_json(const EstimationResult& r, std::string_view domain, std::uint64_t config_hash,
                        const std::vector<std::string>& actor_labels) {
    json j;
    j["config_hash"] = fmt::format("{:016x}", config_hash);
    j["seed"] = r.seed;
    j["domain"] = domain;
    j["actors"] = actor_labels;
    j["tie_rule"] = tie_rule_name(r.rule);
    j["periods"] = r.periods;
    json effects = json::array();
    for (const auto& e : r.effects)
        effects.push_back({{"kind", effect_name(e.kind)}, {"covariate", e.covariate}, {"gwesp_decay", e.gwesp_decay}});
    j["effects"] = effects;
    j["parameter_names"] = r.parameter_names;
    j["theta"] = vector_json(r.theta);
    j["se"] = vector_json(r.se);
    j["derivative"] = matrix_json(r.derivative);
    j["covariance"] = matrix_json(r.covariance);
    j["targets"] = vector_json(r.targets);
    j["mean_statistics"] = vector_json(r.mean_statistics);
    j["t_ratios"] = vector_json(r.t_ratios);
    j["max_convergence_ratio"] = r.max_convergence_ratio;
    j["covariance_ridge"] = r.covariance_ridge;
    j["iterations"] = {{"phase1", r.phase1_iterations},
                       {"phase2", r.phase2_iterations},
                       {"phase3", r.phase3_iterations},
                       {"subphases", r.subphase_iterations},
                       {"total", r.iteration_steps()}};
    json tests = json::array();
    for (int k = 0; k < r.effect_count(); ++k) {
        json t = {{"name", r.effects[static_cast<std::size_t>(k)].label()}, {"estimate", r.beta(k)}, {"se", r.beta_se(k)}};
        if (r.beta_se(k) > 0.0) {
            const double p = two_sided_p(r.beta(k), r.beta_se(k));
            t["p"] = p;
            t["stars"] = significance_stars(p);
        } else {
            t["p"] = nullptr;
            t["stars"] = "";
        }
        tests.push_back(std::move(t));
    }
    j["tests"] = tests;
    j["warnings"] = r.warnings;
    j["draw_periods"] = r.draw_periods;
    j["retained_draws"] = r.draws.size();
    return j.dump(2) + "\n";
}

EstimationResult read_result_json(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    EstimationResult r;
    try {
        r.seed = j.at("seed").get<std::uint64_t>();
        r.rule = parse_tie_rule(j.at("tie_rule").get<std::string>());
        r.periods = j.at("periods").get<int>();
        for (const auto& e : j.at("effects")) {
            EffectSpec spec;
            spec.kind = parse_effect_kind(e.at("kind").get<std::string>());
            spec.covariate = e.at("covariate").get<std::string>();
            spec.gwesp_decay = e.at("gwesp_decay").get<double>();
            r.effects.push_back(std::move(spec));
        }
        r.parameter_names = j.at("parameter_names").get<std::vector<std::string>>();
        r.theta = vector_from(j.at("theta"));
        r.se = vector_from(j.at("se"));
        r.derivative = matrix_from(j.at("derivative"));
        r.covariance = matrix_from(j.at("covariance"));
        r.targets = vector_from(j.at("targets"));
        r.mean_statistics = vector_from(j.at("mean_statistics"));
        r.t_ratios = vector_from(j.at("t_ratios"));
        r.max_convergence_ratio = j.at("max_convergence_ratio").get<double>();
        r.covariance_ridge = j.at("covariance_ridge").get<bool>();
        const auto& it = j.at("iterations");
        r.phase1_iterations = it.at("phase1").get<int>();
        r.phase2_iterations = it.at("phase2").get<int>();
        r.phase3_iterations = it.at("phase3").get<int>();
        r.subphase_iterations = it.at("subphases").get<std::vector<int>>();
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.draw_periods = j.at("draw_periods").get<std::vector<int>>();
        r.draws.resize(j.at("retained_draws").get<std::size_t>());
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": malformed estimation result: " + e.what());
    }
    return r;
}

std::string draws_csv(const EstimationResult& result, const ActorSet& actors, std::string_view provenance) {
    std::string out = comment(provenance) + "draw,period,iso3_a,iso3_b\n";
    for (std::size_t d = 0; d < result.draws.size(); ++d) {
        const auto& draw = result.draws[d];
        for (std::size_t s = 0; s < draw.ends.size(); ++s) {
            const auto& x = draw.ends[s];
            for (int i = 0; i < x.size(); ++i)
                for (int j : x.neighbors(i))
                    if (j > i)
                        out += fmt::format("{},{},{},{}\n", d, result.draw_periods[s] + 1, actors.label(i), actors.label(j));
        }
    }
    return out;
}

void read_draws_csv(const fs::path& path, const ActorSet& actors, EstimationResult& result) {
    const auto draw_count = static_cast<int>(result.draws.size());
    for (auto& d : result.draws) d.ends.assign(result.draw_periods.size(), Adjacency(actors.size()));
    for (const auto& line : data_lines(path)) {
        auto cells = split(line, ',');
        if (!cells.empty() && cells[0] == "draw") continue;
        if (cells.size() != 4) throw ValidationError(path.string() + ": expected draw,period,iso3_a,iso3_b");
        const int d = parse_int(cells[0], path);
        const int period = parse_int(cells[1], path) - 1;
        if (d < 0 || d >= draw_count) throw ValidationError(path.string() + ": draw index out of range");
        auto slot = std::find(result.draw_periods.begin(), result.draw_periods.end(), period);
        if (slot == result.draw_periods.end()) throw ValidationError(path.string() + ": unexpected period");
        result.draws[static_cast<std::size_t>(d)]
            .ends[static_cast<std::size_t>(slot - result.draw_periods.begin())]
            .set(actor_index(actors, cells[2], path), actor_index(actors, cells[3], path), true);
    }
}

}  // namespace netdyn::io
