#pragma once

// Batch pipeline commands. Each reads a RunConfig and writes its artifacts
// under the configured output directory:
//
//   out/weighted/   <tag>_<year>.csv, describe.{csv,txt}, ingest_summary.txt
//   out/backbone/   <tag>_<year>.csv, trimming.{csv,txt}, describe.{csv,txt}, alpha_sweep.csv
//   out/estimate/   <tag>/result.json, <tag>/draws.csv, report.{txt,csv}, convergence.csv
//   out/gof/        <tag>_<aux>.csv, summary.csv
//   out/export/     <tag>_<year>.graphml

#include <iosfwd>

#include "netdyn/config.hpp"

namespace netdyn::cli {

void cmd_ingest(const RunConfig& cfg, std::ostream& log);
void cmd_backbone(const RunConfig& cfg, std::ostream& log);
void cmd_estimate(const RunConfig& cfg, std::ostream& log);
void cmd_gof(const RunConfig& cfg, std::ostream& log);
void cmd_export(const RunConfig& cfg, std::ostream& log);
/// ingest, backbone, estimate, gof, export in sequence.
void cmd_run(const RunConfig& cfg, std::ostream& log);

/// Entry point. Exit codes: 0 success, 1 validation error, 2 runtime error.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netdyn::cli
