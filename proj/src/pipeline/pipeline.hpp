// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace hypc {

namespace fs = std::filesystem;

struct PipelineOptions {
  bool force_lossless = false;
  std::size_t cap_worlds = 1'000'000;
  std::size_t cap_attrs = 12;
  double epsilon = 0;  // instance-FD bucketing for u-factor learning; 0 is exact
};

struct StageReport {
  std::vector<std::string> outputs;  // paths relative to the output directory
  std::vector<std::string> warnings;
};

// Every stage writes into `out`, then merges its record (input and output
// hashes, verdicts, warnings) into out/manifest.json under the stage name.
// Wall-clock time goes to out/timing.json, which is not hashed. Errors carry
// the stage name as a prefix.

// structure JSON -> sigma.fd (left-reduced) and classes.json.
StageReport stage_encode(const fs::path& structure, const fs::path& out, const PipelineOptions& opts);

// sigma.fd -> folded.fd. Precondition error unless the input is parsimonious.
StageReport stage_fold(const fs::path& fds, const fs::path& out, const PipelineOptions& opts);

// folded.fd -> schema.json: the schemes, the FD set they were designed for,
// and BCNF, preservation and lossless verdicts.
StageReport stage_synth(const fs::path& fds, const fs::path& out, const PipelineOptions& opts);

// schema.json + trial CSVs -> store/<file>.csv with canonical headers and
// store.json. Each header, minus tid, must equal the attributes of one
// scheme; (scheme key, tid) must be unique; upsilon cells must equal k.
StageReport stage_load(const fs::path& schema, const std::string& upsilon, const std::vector<fs::path>& trials,
                       const fs::path& out, const PipelineOptions& opts);

// H0 + hypothesis directories (each holding sigma.fd and store.json) ->
// Y0.csv, Y<k>_<i>.csv, Gamma<k>.fd and W.csv. Hypotheses share Y0 and the
// world table; their variables are allocated in the order given.
StageReport stage_u_intro(const fs::path& h0, const std::vector<fs::path>& hypotheses, const fs::path& out,
                          const PipelineOptions& opts);

enum class QueryOutput { Relation, Confidence, Worlds };

// Evaluates a query over the U-relations in `db` (every *.csv but W.csv,
// named by file stem) and returns CSV text: the U-relation, distinct tuples
// with their confidence, or the decoded answer in every world.
std::string run_query(const fs::path& db, const std::string& query, QueryOutput mode, const PipelineOptions& opts);

// Recomputes the hashes recorded in dir/manifest.json and validates any world
// table and U-relations found there. Integrity error on the first mismatch.
StageReport stage_check(const fs::path& dir, const PipelineOptions& opts);

// Whole pipeline from a config JSON:
//   {"h0": path, "hypotheses": [{"upsilon": k, "structure": path, "trials": [paths]}]}
// Paths are relative to the config file. Per hypothesis, encode, fold, synth
// and load run in out/H<k>; u-intro runs in out. The result equals running
// those stages one by one.
StageReport run_pipeline(const fs::path& config, const fs::path& out, const PipelineOptions& opts);

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace hypc
