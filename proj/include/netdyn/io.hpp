#pragma once

// File formats. Every text artifact may start with '#' comment lines, which
// readers skip; writers use one to record provenance (config hash and seed).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netdyn/backbone.hpp"
#include "netdyn/estimator.hpp"
#include "netdyn/ingest.hpp"
#include "netdyn/panel.hpp"

namespace netdyn::io {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path);
/// Writes atomically enough for batch use: creates parent directories.
void write_text(const fs::path& path, std::string_view content);

/// Non-empty lines that are not '#' comments, with line endings stripped.
std::vector<std::string> data_lines(const fs::path& path);
std::vector<std::string> split(std::string_view line, char sep);
std::string trim(std::string_view s);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// One ISO3 label per line.
ActorSet read_actor_set(const fs::path& path);

/// Tab-separated "raw name<TAB>ISO3". An ISO3 of "-" or "NA" flags the name as
/// a known out-of-set country. An optional "# policy: drop|error" line sets the
/// unmatched-name policy (otherwise `fallback`).
DisambiguationDictionary read_dictionary(const fs::path& path, const ActorSet& actors,
                                         std::optional<UnmatchedPolicy> fallback = std::nullopt);

/// Line-delimited JSON records.
std::vector<ArticleRecord> read_records(const fs::path& path);

/// `year,iso3_a,iso3_b,weight`, iso3_a < iso3_b, positive weights only.
std::string weighted_edgelist(const WeightedNetwork& net, std::string_view provenance);
WeightedNetwork read_weighted_edgelist(const fs::path& path, const ActorSet& actors, int year);

/// `year,iso3_a,iso3_b` (plus `alpha` when scores are given).
std::string binary_edgelist(const BinaryNetwork& net, std::string_view provenance,
                            const BackboneScores* scores = nullptr);
BinaryNetwork read_binary_edgelist(const fs::path& path, const ActorSet& actors, int year);

/// Long format `iso3,year,value`; absent (actor, year) rows are missing.
/// Period m of the covariate is wave year years[m].
ActorCovariate read_actor_covariate(const fs::path& path, std::string name, const ActorSet& actors,
                                    const std::vector<int>& years, Transform transform);

/// Square matrix with an ISO3 header row and an ISO3 first column.
DyadCovariate read_dyad_covariate(const fs::path& path, std::string name, const ActorSet& actors,
                                  Transform transform);

struct NodeAttribute {
    std::string name;
    std::vector<std::optional<double>> values;  ///< one per actor; nullopt omits the entry
};

/// GraphML, undirected, nodes keyed by ISO3 with integer `degree` and one
/// double attribute per covariate.
std::string graphml(const BinaryNetwork& net, const std::vector<NodeAttribute>& attributes,
                    std::string_view provenance);
/// Adjacency from a GraphML file written by `graphml`.
BinaryNetwork read_graphml(const fs::path& path, const ActorSet& actors, int year);

/// Estimation result as JSON (all fields except the simulation draws).
std::string result_json(const EstimationResult& result, std::string_view domain, std::uint64_t config_hash,
                        const std::vector<std::string>& actor_labels);
/// Inverse of `result_json`. `draws` is sized to the retained draw count with
/// empty networks; `read_draws_csv` fills them.
EstimationResult read_result_json(const fs::path& path);

/// `draw,period,iso3_a,iso3_b` for every retained end network.
std::string draws_csv(const EstimationResult& result, const ActorSet& actors, std::string_view provenance);
void read_draws_csv(const fs::path& path, const ActorSet& actors, EstimationResult& result);

}  // namespace netdyn::io
