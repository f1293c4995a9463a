// SPDX-License-Identifier: Apache-2.0
#include "hypc/hypc.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "fd/reasoning.hpp"
#include "folding/folding.hpp"
#include "pipeline/pipeline.hpp"
#include "sem/encode.hpp"
#include "synth4c/normal_forms.hpp"
#include "synth4c/schema.hpp"

struct hypc_options {
  hypc::PipelineOptions opts;
};

struct hypc_fdset {
  hypc::FDSet sigma;
};

struct hypc_schema {
  hypc::Schema schema;
};

namespace {

thread_local std::string last_error;

hypc_status status_of(hypc::ErrorKind k) {
  switch (k) {
    case hypc::ErrorKind::Integrity: return HYPC_ERR_INTEGRITY;
    case hypc::ErrorKind::Capacity: return HYPC_ERR_CAPACITY;
    case hypc::ErrorKind::Domain:
    case hypc::ErrorKind::Precondition:
    case hypc::ErrorKind::Parse:
    case hypc::ErrorKind::Io: return HYPC_ERR_INPUT;
  }
  return HYPC_ERR_INTERNAL;
}

template <class F>
hypc_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return HYPC_OK;
  } catch (const hypc::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return HYPC_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) hypc::fail(hypc::ErrorKind::Precondition, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hypc::PipelineOptions options(const hypc_options* o) { return o ? o->opts : hypc::PipelineOptions{}; }

std::vector<hypc::fs::path> paths(const char* const* items, size_t n) {
  if (n) need(items, "path list");
  std::vector<hypc::fs::path> out;
  for (size_t i = 0; i < n; ++i) {
    need(items[i], "path");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* hypc_last_error(void) { return last_error.c_str(); }

void hypc_string_free(char* s) { std::free(s); }

const char* hypc_version(void) { return "1.0.0"; }

hypc_options* hypc_options_new(void) { return new (std::nothrow) hypc_options{}; }
void hypc_options_free(hypc_options* o) { delete o; }
void hypc_options_set_force_lossless(hypc_options* o, int on) {
  if (o) o->opts.force_lossless = on != 0;
}
void hypc_options_set_cap_worlds(hypc_options* o, size_t cap) {
  if (o) o->opts.cap_worlds = cap;
}
void hypc_options_set_cap_attrs(hypc_options* o, size_t cap) {
  if (o) o->opts.cap_attrs = cap;
}
hypc_status hypc_options_set_epsilon(hypc_options* o, double epsilon) {
  return guard([&] {
    need(o, "options");
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) hypc::fail(hypc::ErrorKind::Domain, "epsilon must be finite and >= 0");
    o->opts.epsilon = epsilon;
  });
}

hypc_status hypc_fdset_parse(const char* text, hypc_fdset** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new hypc_fdset{hypc::parse_fdset(text)};
  });
}

hypc_status hypc_fdset_encode(const char* structure_json, hypc_fdset** out) {
  return guard([&] {
    need(structure_json, "structure");
    need(out, "out");
    auto s = hypc::Structure::from_json(structure_json);
    hypc::require_well_formed(s);
    *out = new hypc_fdset{hypc::left_reduce(hypc::h_encode(s))};
  });
}

void hypc_fdset_free(hypc_fdset* s) { delete s; }

size_t hypc_fdset_size(const hypc_fdset* s) { return s ? s->sigma.size() : 0; }

hypc_status hypc_fdset_to_text(const hypc_fdset* s, char** out) {
  return guard([&] {
    need(s, "fdset");
    need(out, "out");
    *out = dup(hypc::to_text(s->sigma));
  });
}

int hypc_fdset_is_parsimonious(const hypc_fdset* s) { return s && hypc::is_parsimonious(s->sigma) ? 1 : 0; }

int hypc_fdset_same(const hypc_fdset* a, const hypc_fdset* b) { return a && b && a->sigma.same_as(b->sigma) ? 1 : 0; }

hypc_status hypc_fdset_closure(const hypc_fdset* s, const char* attrs, char** out) {
  return guard([&] {
    need(s, "fdset");
    need(attrs, "attrs");
    need(out, "out");
    *out = dup(s->sigma.cat().format(hypc::xclosure(s->sigma, s->sigma.parse_attrs(attrs))));
  });
}

hypc_status hypc_fdset_fold(const hypc_fdset* s, hypc_fdset** out) {
  return guard([&] {
    need(s, "fdset");
    need(out, "out");
    if (!hypc::is_parsimonious(s->sigma)) hypc::fail(hypc::ErrorKind::Precondition, "folding needs a parsimonious FD set");
    *out = new hypc_fdset{hypc::folding(s->sigma).folded};
  });
}

hypc_status hypc_schema_synthesize(const hypc_fdset* s, const hypc_options* o, hypc_schema** out) {
  return guard([&] {
    need(s, "fdset");
    need(out, "out");
    *out = new hypc_schema{hypc::synthesize(s->sigma, hypc::SynthOptions{options(o).force_lossless})};
  });
}

void hypc_schema_free(hypc_schema* s) { delete s; }

size_t hypc_schema_size(const hypc_schema* s) { return s ? s->schema.schemes.size() : 0; }

hypc_status hypc_schema_to_json(const hypc_schema* s, char** out) {
  return guard([&] {
    need(s, "schema");
    need(out, "out");
    *out = dup(s->schema.to_json());
  });
}

hypc_status hypc_schema_is_bcnf(const hypc_schema* s, const hypc_options* o, int* ok, char** witness) {
  return guard([&] {
    need(s, "schema");
    need(ok, "ok");
    auto v = hypc::is_bcnf(s->schema, s->schema.source, options(o).cap_attrs);
    *ok = v.ok ? 1 : 0;
    if (witness) *witness = v.ok ? nullptr : dup(v.describe(s->schema));
  });
}

hypc_status hypc_schema_preserves(const hypc_schema* s, int* ok) {
  return guard([&] {
    need(s, "schema");
    need(ok, "ok");
    *ok = hypc::preserves(s->schema, s->schema.source) ? 1 : 0;
  });
}

hypc_status hypc_schema_lossless(const hypc_schema* s, int* ok) {
  return guard([&] {
    need(s, "schema");
    need(ok, "ok");
    *ok = hypc::lossless_join(s->schema, s->schema.source) ? 1 : 0;
  });
}

hypc_status hypc_schema_chase(const hypc_schema* s, const hypc_options* o, int* ok) {
  return guard([&] {
    need(s, "schema");
    need(ok, "ok");
    *ok = hypc::chase_oracle(s->schema, s->schema.source, options(o).cap_attrs) ? 1 : 0;
  });
}

hypc_status hypc_encode(const hypc_options* o, const char* structure_path, const char* out_dir) {
  return guard([&] {
    need(structure_path, "structure path");
    need(out_dir, "output directory");
    hypc::stage_encode(structure_path, out_dir, options(o));
  });
}

hypc_status hypc_fold(const hypc_options* o, const char* fd_path, const char* out_dir) {
  return guard([&] {
    need(fd_path, "FD path");
    need(out_dir, "output directory");
    hypc::stage_fold(fd_path, out_dir, options(o));
  });
}

hypc_status hypc_synth(const hypc_options* o, const char* fd_path, const char* out_dir) {
  return guard([&] {
    need(fd_path, "FD path");
    need(out_dir, "output directory");
    hypc::stage_synth(fd_path, out_dir, options(o));
  });
}

hypc_status hypc_load(const hypc_options* o, const char* schema_path, const char* upsilon,
                      const char* const* trial_paths, size_t n_trials, const char* out_dir) {
  return guard([&] {
    need(schema_path, "schema path");
    need(upsilon, "hypothesis id");
    need(out_dir, "output directory");
    hypc::stage_load(schema_path, upsilon, paths(trial_paths, n_trials), out_dir, options(o));
  });
}

hypc_status hypc_u_intro(const hypc_options* o, const char* h0_path, const char* const* hypothesis_dirs,
                         size_t n_hypotheses, const char* out_dir) {
  return guard([&] {
    need(h0_path, "H0 path");
    need(out_dir, "output directory");
    hypc::stage_u_intro(h0_path, paths(hypothesis_dirs, n_hypotheses), out_dir, options(o));
  });
}

hypc_status hypc_run(const hypc_options* o, const char* config_path, const char* out_dir) {
  return guard([&] {
    need(config_path, "config path");
    need(out_dir, "output directory");
    hypc::run_pipeline(config_path, out_dir, options(o));
  });
}

hypc_status hypc_query(const hypc_options* o, const char* db_dir, const char* query, hypc_query_mode mode,
                       char** csv_out) {
  return guard([&] {
    need(db_dir, "database directory");
    need(query, "query");
    need(csv_out, "out");
    hypc::QueryOutput m;
    switch (mode) {
      case HYPC_QUERY_RELATION: m = hypc::QueryOutput::Relation; break;
      case HYPC_QUERY_CONFIDENCE: m = hypc::QueryOutput::Confidence; break;
      case HYPC_QUERY_WORLDS: m = hypc::QueryOutput::Worlds; break;
      default: hypc::fail(hypc::ErrorKind::Domain, "unknown query mode");
    }
    *csv_out = dup(hypc::run_query(db_dir, query, m, options(o)));
  });
}

hypc_status hypc_check(const hypc_options* o, const char* dir, char** warnings) {
  return guard([&] {
    need(dir, "directory");
    auto report = hypc::stage_check(dir, options(o));
    if (warnings) {
      std::string text;
      for (auto& w : report.warnings) text += w + "\n";
      *warnings = dup(text);
    }
  });
}

}  // extern "C"
