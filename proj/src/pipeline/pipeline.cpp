// SPDX-License-Identifier: Apache-2.0
#include "pipeline/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "fd/reasoning.hpp"
#include "folding/folding.hpp"
#include "pipeline/query.hpp"
#include "sem/encode.hpp"
#include "synth4c/normal_forms.hpp"
#include "synth4c/schema.hpp"
#include "synth4u/synth4u.hpp"
#include "urel/csv.hpp"
#include "urel/value.hpp"

namespace hypc {

using json = nlohmann::json;

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) fail(ErrorKind::Io, "cannot write " + p.string());
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, what + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// One stage run: collects input and output hashes, then merges them into the
// manifest of the output directory.
class StageRecord {
 public:
  StageRecord(std::string name, fs::path out) : name_(std::move(name)), out_(std::move(out)) {
    start_ = std::chrono::steady_clock::now();
  }

  std::string input(const fs::path& p) {
    std::string text = read_text(p);
    std::string key = p.filename().string();
    while (inputs_.contains(key)) key += "'";
    inputs_[key] = sha256_hex(text);
    return text;
  }
  void output(const std::string& rel, const std::string& text) {
    write_text(out_ / rel, text);
    outputs_[rel] = sha256_hex(text);
    report_.outputs.push_back(rel);
  }
  void warn(const std::string& w) { report_.warnings.push_back(w); }
  json& verdicts() { return verdicts_; }

  StageReport finish() {
    json rec = {{"inputs", inputs_}, {"outputs", outputs_}};
    if (!verdicts_.is_null()) rec["verdicts"] = verdicts_;
    if (!report_.warnings.empty()) rec["warnings"] = report_.warnings;
    merge("manifest.json", rec);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    merge("timing.json", json{{"ms", ms}});
    return report_;
  }

 private:
  void merge(const std::string& file, const json& rec) {
    fs::path p = out_ / file;
    json doc = json::object();
    if (fs::exists(p)) doc = parse_json(read_text(p), p.string());
    if (!doc.is_object() || (doc.contains("stages") && !doc["stages"].is_object()))
      fail(ErrorKind::Parse, p.string() + " is not a manifest");
    doc["stages"][name_] = rec;
    write_text(p, dump(doc));
  }

  std::string name_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  json inputs_ = json::object(), outputs_ = json::object(), verdicts_;
  StageReport report_;
};

template <class F>
auto attributed(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), stage + ": " + e.what());
  }
}

FDSet read_fds(StageRecord& rec, const fs::path& p) { return parse_fdset(rec.input(p)); }

Relation read_relation(const std::string& name, const std::string& text) {
  Relation r = relation_from_csv(name, text);
  std::set<std::string> seen;
  for (auto& c : r.cols) {
    c = Catalog::canonical_name(c);
    if (!seen.insert(c).second) fail(ErrorKind::Parse, name + ": duplicate column '" + c + "'");
  }
  return r;
}

std::string stem(const fs::path& p) { return p.stem().string(); }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::Io, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

StageReport stage_encode(const fs::path& structure, const fs::path& out, const PipelineOptions&) {
  return attributed("encode", [&] {
    StageRecord rec("encode", out);
    Structure s = Structure::from_json(rec.input(structure));
    require_well_formed(s);
    FDSet sigma = left_reduce(h_encode(s));
    json classes = json::array();
    std::map<std::string, int> counts;
    sigma.universe().for_each([&](AttrId a) {
      std::string c(to_string(classify(a, sigma)));
      classes.push_back({{"attr", sigma.cat().name(a)}, {"class", c}});
      ++counts[c];
    });
    rec.output("sigma.fd", to_text(sigma));
    rec.output("classes.json", dump(classes));
    rec.verdicts() = {{"fds", sigma.size()}, {"parsimonious", is_parsimonious(sigma)}, {"classes", counts}};
    return rec.finish();
  });
}

StageReport stage_fold(const fs::path& fds, const fs::path& out, const PipelineOptions&) {
  return attributed("fold", [&] {
    StageRecord rec("fold", out);
    FDSet sigma = read_fds(rec, fds);
    auto check = check_parsimonious(sigma);
    if (!check.ok()) fail(ErrorKind::Precondition, fds.filename().string() + " is not parsimonious");
    FDSet folded = folding(sigma).folded;
    rec.output("folded.fd", to_text(folded));
    rec.verdicts() = {{"fds", folded.size()}, {"parsimonious", is_parsimonious(folded)}};
    return rec.finish();
  });
}

StageReport stage_synth(const fs::path& fds, const fs::path& out, const PipelineOptions& opts) {
  return attributed("synth", [&] {
    StageRecord rec("synth", out);
    FDSet sigma = read_fds(rec, fds);
    Schema schema = synthesize(sigma, SynthOptions{opts.force_lossless});
    Verdict bcnf = is_bcnf(schema, sigma, opts.cap_attrs);
    bool preserved = preserves(schema, sigma);
    json chase = nullptr;
    try {
      chase = chase_oracle(schema, sigma, opts.cap_attrs);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Capacity) throw;
      rec.warn("chase skipped: " + std::string(e.what()));
    }
    json lossless = preserved ? json(lossless_join(schema, sigma)) : chase;
    json verdicts = {{"schemes", schema.schemes.size()}, {"bcnf", bcnf.ok}, {"preserves", preserved},
                     {"lossless", lossless},           {"chase", chase}};
    if (!bcnf.ok) verdicts["bcnf_witness"] = bcnf.describe(schema);
    json doc = {{"fds", to_text(sigma)}, {"schemes", json::parse(schema.to_json())}, {"verdicts", verdicts}};
    rec.output("schema.json", dump(doc));
    rec.verdicts() = verdicts;
    return rec.finish();
  });
}

StageReport stage_load(const fs::path& schema_path, const std::string& upsilon, const std::vector<fs::path>& trials,
                       const fs::path& out, const PipelineOptions&) {
  return attributed("load", [&] {
    StageRecord rec("load", out);
    if (upsilon.empty()) fail(ErrorKind::Precondition, "the hypothesis id is empty");
    json doc = parse_json(rec.input(schema_path), schema_path.string());
    if (!doc.is_object() || !doc.contains("fds") || !doc.contains("schemes"))
      fail(ErrorKind::Parse, schema_path.string() + " needs \"fds\" and \"schemes\"");
    FDSet sigma = parse_fdset(doc["fds"].get<std::string>());
    Schema schema = Schema::from_json(doc["schemes"].dump(), sigma);
    const Catalog& cat = sigma.cat();

    json relations = json::array();
    std::set<std::string> names;
    for (auto& path : trials) {
      std::string name = stem(path);
      if (!names.insert(name).second) fail(ErrorKind::Precondition, "two trial files are named " + name);
      Relation r = read_relation(name, rec.input(path));
      if (!r.has("tid")) fail(ErrorKind::Precondition, name + ": header has no tid column");
      AttrSet attrs;
      for (auto& c : r.cols) {
        if (c == "tid") continue;
        auto id = cat.find(c);
        if (!id) fail(ErrorKind::Precondition, name + ": column '" + c + "' is not an attribute of the schema");
        attrs.insert(*id);
      }
      auto scheme = std::find_if(schema.schemes.begin(), schema.schemes.end(),
                                 [&](const RelScheme& s) { return s.attrs == attrs; });
      if (scheme == schema.schemes.end())
        fail(ErrorKind::Precondition, name + ": header does not match the attributes of any scheme plus tid");
      r.key = cat.names_of(scheme->key);
      r.key.push_back("tid");
      r.check_key();
      if (r.has("upsilon"))
        for (auto& row : r.rows)
          if (!same_value(row[r.col("upsilon")], upsilon))
            fail(ErrorKind::Integrity, name + ": upsilon " + row[r.col("upsilon")] + " in data for hypothesis " + upsilon);
      if (r.rows.empty()) rec.warn(name + " has no rows");
      std::string file = "store/" + name + ".csv";
      rec.output(file, relation_to_csv(r));
      relations.push_back({{"name", name},
                           {"file", file},
                           {"scheme", scheme->name},
                           {"role", r.has("upsilon") ? "endogenous" : "exogenous"},
                           {"rows", r.rows.size()}});
    }
    json store = {{"upsilon", upsilon}, {"relations", relations}};
    rec.output("store.json", dump(store));
    rec.verdicts() = {{"relations", relations.size()}};
    return rec.finish();
  });
}

StageReport stage_u_intro(const fs::path& h0_path, const std::vector<fs::path>& hypotheses, const fs::path& out,
                          const PipelineOptions& opts) {
  StageRecord rec("u-intro", out);
  WorldTable w;
  URelation y0 = attributed("u-intro[explanation]", [&] {
    Relation h0 = read_relation("H0", rec.input(h0_path));
    h0.col("phi");
    h0.col("upsilon");
    h0.col("Conf");
    return build_explanation(h0, w);
  });
  rec.output("Y0.csv", urelation_to_csv(y0));

  json per = json::object();
  std::set<std::string> seen;
  for (auto& dir : hypotheses) {
    std::string where = "u-intro[" + dir.filename().string() + "]";
    auto sigma = attributed(where, [&] { return parse_fdset(rec.input(dir / "sigma.fd")); });
    auto store = attributed(where, [&] { return parse_json(rec.input(dir / "store.json"), (dir / "store.json").string()); });
    std::string k = attributed(where, [&] {
      if (!store.is_object() || !store.contains("upsilon") || !store.contains("relations"))
        fail(ErrorKind::Parse, "store.json needs \"upsilon\" and \"relations\"");
      return store["upsilon"].get<std::string>();
    });
    if (!seen.insert(canonical_value(k)).second) fail(ErrorKind::Precondition, where + ": hypothesis " + k + " given twice");

    Hypothesis h{k, {}, {}};
    for (auto& item : store["relations"]) {
      std::string name = item.at("name").get<std::string>();
      Relation r = attributed(where, [&] { return read_relation(name, rec.input(dir / item.at("file").get<std::string>())); });
      if (r.rows.empty()) {
        rec.warn(name + " has no rows and is skipped");
        continue;
      }
      (r.has("upsilon") ? h.endogenous : h.exogenous).push_back(std::move(r));
    }

    std::vector<UFactorGroups> learned;
    for (auto& e : h.exogenous)
      learned.push_back(attributed(where + "[learn " + e.name + "]",
                                   [&] { return learn_u_factors(e, sigma, LearnOptions{opts.epsilon}); }));
    FDSet gamma_fold = attributed(where + "[fold]", [&] {
      FDSet gamma = combine_gamma(sigma, learned);
      for (auto& e : h.endogenous)
        for (auto& c : e.cols)
          if (auto id = sigma.cat().find(c); id && *id != Catalog::kTid) gamma.extend_universe(AttrSet{*id});
      return folding(left_reduce(gamma)).folded;
    });
    rec.output("Gamma" + k + ".fd", to_text(gamma_fold));
    U4Result result = attributed(where + "[synthesize]", [&] { return synthesize4u(gamma_fold, h, y0, w); });
    json files = json::array();
    for (auto& y : result.relations) {
      rec.output(y.name + ".csv", urelation_to_csv(y));
      files.push_back(y.name);
    }
    json groups = json::array();
    for (std::size_t i = 0; i < learned.size(); ++i)
      for (std::size_t g = 0; g < learned[i].groups.size(); ++g)
        groups.push_back({{"relation", h.exogenous[i].name},
                          {"pivot", sigma.cat().name(learned[i].pivots[g])},
                          {"group", sigma.cat().names_of(learned[i].groups[g])}});
    per[k] = {{"relations", files}, {"groups", groups}};
  }
  w.validate();
  rec.output("W.csv", world_table_to_csv(w));
  rec.verdicts() = {{"variables", w.size()}, {"hypotheses", per}};
  return rec.finish();
}

namespace {

struct LoadedDb {
  Database relations;
  WorldTable w;
};

LoadedDb load_db(const fs::path& db) {
  if (!fs::is_directory(db)) fail(ErrorKind::Io, db.string() + " is not a directory");
  LoadedDb out;
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(db))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  bool have_w = false;
  for (auto& f : files) {
    if (f.filename() == "W.csv") {
      out.w = world_table_from_csv(read_text(f));
      have_w = true;
    } else {
      out.relations.emplace(stem(f), urelation_from_csv(stem(f), read_text(f)));
    }
  }
  if (!have_w) fail(ErrorKind::Io, "no W.csv in " + db.string());
  for (auto& [name, r] : out.relations)
    for (auto& row : r.rows)
      for (auto& a : row.cond)
        if (a.var >= out.w.size() || a.value == 0 || a.value > out.w.var(a.var).marginals.size())
          fail(ErrorKind::Integrity, name + ": condition " + var_name(a.var) + "=" + std::to_string(a.value) +
                                         " is not in the world table");
  return out;
}

}  // namespace

std::string run_query(const fs::path& db, const std::string& text, QueryOutput mode, const PipelineOptions& opts) {
  return attributed("query", [&] {
    Query q = parse_query(text);
    LoadedDb loaded = load_db(db);
    URelation r = evaluate(q, loaded.relations);
    if (mode == QueryOutput::Relation) return urelation_to_csv(r);

    if (mode == QueryOutput::Confidence) {
      std::vector<std::vector<std::string>> tuples;
      for (auto& row : r.rows) tuples.push_back(row.values);
      auto less = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const std::string& x, const std::string& y) { return compare_values(x, y) < 0; });
      };
      auto same = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_value);
      };
      std::stable_sort(tuples.begin(), tuples.end(), less);
      tuples.erase(std::unique(tuples.begin(), tuples.end(), same), tuples.end());
      CsvTable t{r.cols, {}};
      t.header.push_back("conf");
      for (auto& tup : tuples) {
        auto row = tup;
        row.push_back(format_double(conf(r, loaded.w, tup, opts.cap_worlds)));
        t.rows.push_back(std::move(row));
      }
      return write_csv(t);
    }

    CsvTable t{{"world", "Pr"}, {}};
    t.header.insert(t.header.end(), r.cols.begin(), r.cols.end());
    std::size_t index = 0;
    for_each_world(loaded.w, opts.cap_worlds, [&](const World& world) {
      ++index;
      for (auto& row : decode(r, world.theta).rows) {
        std::vector<std::string> line = {std::to_string(index), format_double(world.pr)};
        line.insert(line.end(), row.begin(), row.end());
        t.rows.push_back(std::move(line));
      }
    });
    return write_csv(t);
  });
}

StageReport stage_check(const fs::path& dir, const PipelineOptions&) {
  return attributed("check", [&] {
    StageReport report;
    fs::path manifest = dir / "manifest.json";
    json doc = parse_json(read_text(manifest), manifest.string());
    if (!doc.is_object() || !doc.contains("stages") || !doc["stages"].is_object())
      fail(ErrorKind::Parse, manifest.string() + " is not a manifest");
    for (auto& [stage, rec] : doc["stages"].items()) {
      if (!rec.contains("outputs")) continue;
      for (auto& [file, hash] : rec["outputs"].items()) {
        fs::path p = dir / file;
        if (!fs::exists(p)) fail(ErrorKind::Integrity, stage + ": " + file + " is missing");
        if (sha256_hex(read_text(p)) != hash.get<std::string>())
          fail(ErrorKind::Integrity, stage + ": " + file + " does not match its recorded hash");
        report.outputs.push_back(file);
      }
      if (rec.contains("warnings"))
        for (auto& wmsg : rec["warnings"]) report.warnings.push_back(stage + ": " + wmsg.get<std::string>());
    }
    if (fs::exists(dir / "W.csv")) {
      auto db = load_db(dir);
      db.w.validate();
    }
    return report;
  });
}

StageReport run_pipeline(const fs::path& config, const fs::path& out, const PipelineOptions& opts) {
  json doc = attributed("run", [&] {
    json d = parse_json(read_text(config), config.string());
    if (!d.is_object() || !d.contains("h0") || !d.contains("hypotheses") || !d["hypotheses"].is_array())
      fail(ErrorKind::Parse, "run config needs \"h0\" and a \"hypotheses\" array");
    return d;
  });
  fs::path base = config.parent_path();
  auto resolve = [&](const json& v) {
    fs::path p = base / v.get<std::string>();
    if (!fs::exists(p)) fail(ErrorKind::Io, "run: " + p.string() + " does not exist");
    return p;
  };
  struct Plan {
    std::string k;
    fs::path structure;
    std::vector<fs::path> trials;
  };
  std::vector<Plan> plans;
  fs::path h0 = resolve(doc["h0"]);
  for (auto& h : doc["hypotheses"]) {
    Plan p{h.at("upsilon").is_string() ? h["upsilon"].get<std::string>() : h["upsilon"].dump(), resolve(h.at("structure")), {}};
    for (auto& t : h.value("trials", json::array())) p.trials.push_back(resolve(t));
    plans.push_back(std::move(p));
  }

  StageReport report;
  auto absorb = [&](const fs::path& sub, StageReport r) {
    for (auto& o : r.outputs) report.outputs.push_back((sub / o).generic_string());
    report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
  };
  std::vector<fs::path> dirs;
  for (auto& p : plans) {
    fs::path dir = out / ("H" + p.k);
    fs::path sub = "H" + p.k;
    absorb(sub, stage_encode(p.structure, dir, opts));
    absorb(sub, stage_fold(dir / "sigma.fd", dir, opts));
    absorb(sub, stage_synth(dir / "folded.fd", dir, opts));
    absorb(sub, stage_load(dir / "schema.json", p.k, p.trials, dir, opts));
    dirs.push_back(dir);
  }
  absorb("", stage_u_intro(h0, dirs, out, opts));
  return report;
}

}  // namespace hypc
