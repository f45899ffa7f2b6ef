#pragma once

// Synthetic publication corpus for demos and end-to-end tests: records,
// dictionary, actor set, covariates, distance matrix and a run configuration.

#include <cstdint>
#include <filesystem>

namespace netdyn {

struct SynthOptions {
    std::uint64_t seed = 1;
    int first_year = 2001;
    int last_year = 2005;
    int articles_per_year = 1500;
};

/// Writes actors.txt, dictionary.tsv, records.jsonl, afi.csv, gdp.csv,
/// distance.csv and demo.cfg into `dir`.
void write_demo_dataset(const std::filesystem::path& dir, const SynthOptions& options);

}  // namespace netdyn
