// SPDX-License-Identifier: Apache-2.0
// Command-line driver over the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypc/hypc.h"

namespace {

struct Options {
  std::string out = ".";
  bool out_given = false;
  bool force_lossless = false;
  std::size_t cap_worlds = 1'000'000;
  std::size_t cap_attrs = 12;
  double epsilon = 0;
};

struct OptionsHandle {
  hypc_options* p = hypc_options_new();
  ~OptionsHandle() { hypc_options_free(p); }
};

int report(hypc_status s, const char* stage) {
  if (s != HYPC_OK) std::cerr << "hypc: " << (*hypc_last_error() ? hypc_last_error() : stage) << "\n";
  return s;
}

// Prints the warnings recorded in dir's manifest.
void print_warnings(const OptionsHandle& o, const std::string& dir) {
  char* warnings = nullptr;
  if (hypc_check(o.p, dir.c_str(), &warnings) == HYPC_OK && warnings) std::cerr << warnings;
  hypc_string_free(warnings);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (auto& s : v) out.push_back(s.c_str());
  return out;
}

bool write_or_print(const std::string& text, const Options& opt) {
  if (!opt.out_given) {
    std::cout << text;
    return true;
  }
  std::ofstream f(opt.out + "/query.csv", std::ios::binary | std::ios::trunc);
  return static_cast<bool>(f << text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis encoding, schema synthesis and U-relational uncertainty"};
  app.require_subcommand(1);
  Options opt;
  auto* out_flag = app.add_option("--out", opt.out, "Output directory")->capture_default_str();
  app.add_flag("--force-lossless", opt.force_lossless, "Add a key scheme when no scheme holds a key of U");
  app.add_option("--cap-worlds", opt.cap_worlds, "Most worlds enumerated by query --conf/--worlds")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--cap-attrs", opt.cap_attrs, "Most attributes per exhaustive check")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--epsilon", opt.epsilon, "Numeric tolerance for u-factor learning (0 = exact)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.fallthrough();

  std::string structure, fd_file, schema, upsilon, h0, db, query, dir, config;
  std::vector<std::string> trials, hypotheses;
  bool want_conf = false, want_worlds = false;

  auto* encode = app.add_subcommand("encode", "Structure JSON to sigma.fd and classes.json");
  encode->add_option("structure", structure, "Structure JSON")->required();
  auto* fold = app.add_subcommand("fold", "Parsimonious FD file to folded.fd");
  fold->add_option("fds", fd_file, "FD file")->required();
  auto* synth = app.add_subcommand("synth", "FD file to schema.json with verdicts");
  synth->add_option("fds", fd_file, "FD file")->required();
  auto* load = app.add_subcommand("load", "Check trial CSVs against schema.json and store them");
  load->add_option("schema", schema, "schema.json")->required();
  load->add_option("trials", trials, "Trial CSV files");
  load->add_option("--upsilon,-k", upsilon, "Hypothesis id")->required();
  auto* u_intro = app.add_subcommand("u-intro", "Build Y0, the U-relations of each hypothesis and W.csv");
  u_intro->add_option("h0", h0, "H0 CSV (phi, upsilon, Conf)")->required();
  u_intro->add_option("hypotheses", hypotheses, "Hypothesis directories holding sigma.fd and store.json")->required();
  auto* query_cmd = app.add_subcommand("query", "Evaluate a query over a U-relational directory");
  query_cmd->add_option("db", db, "Directory with Y*.csv and W.csv")->required();
  query_cmd->add_option("query", query, "Query file, or the query text itself")->required();
  auto* conf_flag = query_cmd->add_flag("--conf", want_conf, "Distinct tuples with their confidence");
  query_cmd->add_flag("--worlds", want_worlds, "Decoded answer in every world")->excludes(conf_flag);
  auto* check = app.add_subcommand("check", "Verify a directory against its manifest");
  check->add_option("dir", dir, "Directory with manifest.json")->required();
  auto* run = app.add_subcommand("run", "Whole pipeline from a config JSON");
  run->add_option("config", config, "Run config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : HYPC_ERR_INPUT;
  }
  opt.out_given = out_flag->count() > 0;

  OptionsHandle o;
  if (!o.p) return report(HYPC_ERR_INTERNAL, "options");
  hypc_options_set_force_lossless(o.p, opt.force_lossless ? 1 : 0);
  hypc_options_set_cap_worlds(o.p, opt.cap_worlds);
  hypc_options_set_cap_attrs(o.p, opt.cap_attrs);
  if (hypc_options_set_epsilon(o.p, opt.epsilon) != HYPC_OK) return report(HYPC_ERR_INPUT, "options");
  const char* out = opt.out.c_str();

  if (*encode) return report(hypc_encode(o.p, structure.c_str(), out), "encode");
  if (*fold) return report(hypc_fold(o.p, fd_file.c_str(), out), "fold");
  if (*synth) return report(hypc_synth(o.p, fd_file.c_str(), out), "synth");
  if (*load) {
    auto paths = c_strings(trials);
    int rc = report(hypc_load(o.p, schema.c_str(), upsilon.c_str(), paths.data(), paths.size(), out), "load");
    if (rc == HYPC_OK) print_warnings(o, opt.out);
    return rc;
  }
  if (*u_intro) {
    auto paths = c_strings(hypotheses);
    int rc = report(hypc_u_intro(o.p, h0.c_str(), paths.data(), paths.size(), out), "u-intro");
    if (rc == HYPC_OK) print_warnings(o, opt.out);
    return rc;
  }
  if (*query_cmd) {
    std::string text = query;
    if (std::ifstream f{query, std::ios::binary}; f && !query.empty() && query.front() != '(') {
      std::ostringstream s;
      s << f.rdbuf();
      text = s.str();
    }
    hypc_query_mode mode = want_conf ? HYPC_QUERY_CONFIDENCE : want_worlds ? HYPC_QUERY_WORLDS : HYPC_QUERY_RELATION;
    char* csv = nullptr;
    int rc = report(hypc_query(o.p, db.c_str(), text.c_str(), mode, &csv), "query");
    if (rc == HYPC_OK && !write_or_print(csv, opt)) {
      std::cerr << "hypc query: cannot write " << opt.out << "/query.csv\n";
      rc = HYPC_ERR_INPUT;
    }
    hypc_string_free(csv);
    return rc;
  }
  if (*check) {
    char* warnings = nullptr;
    int rc = report(hypc_check(o.p, dir.c_str(), &warnings), "check");
    if (rc == HYPC_OK) std::cout << "ok\n" << (warnings ? warnings : "");
    hypc_string_free(warnings);
    return rc;
  }
  if (*run) {
    int rc = report(hypc_run(o.p, config.c_str(), out), "run");
    return rc;
  }
  return HYPC_ERR_INPUT;
}
