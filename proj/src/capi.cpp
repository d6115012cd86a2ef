// Copyright 2026 The parreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "parreg/parreg.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <thread>

#include "config.hpp"
#include "parreg/certifier.hpp"
#include "parreg/coverdim.hpp"
#include "parreg/error.hpp"
#include "parreg/field.hpp"
#include "parreg/functionals.hpp"
#include "parreg/lab.hpp"
#include "parreg/nsst_io.hpp"
#include "parreg/spectral.hpp"
#include "report_json.hpp"

struct parreg_field {
  explicit parreg_field(parreg::SpaceTimeField f)
      : field(std::move(f)), engine(std::make_unique<parreg::FunctionalEngine>(field)) {}
  parreg::SpaceTimeField field;
  // Densities are cached per handle.
  std::unique_ptr<parreg::FunctionalEngine> engine;
};

struct parreg_points {
  parreg::PointSet4D set;
};

namespace {

using parreg::ErrorCode;
using parreg::fail;
namespace cfg = parreg::config;
namespace rep = parreg::report;

thread_local std::string g_last_error;

parreg_status status_of(ErrorCode code) {
  return static_cast<parreg_status>(static_cast<int>(code));
}

template <typename Fn>
parreg_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PARREG_OK;
  } catch (const parreg::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PARREG_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PARREG_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return PARREG_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

cfg::Json parse(const char* text) {
  need(text, "config_json");
  return cfg::parse_text(text);
}

parreg::SpacetimePoint point(const double x[3], double t) {
  need(x, "x");
  return {{x[0], x[1], x[2]}, t};
}

parreg::TimeWindowMode mode_of(parreg_window w) {
  if (w == PARREG_WINDOW_PAPER_LITERAL) return parreg::TimeWindowMode::PaperLiteral;
  if (w == PARREG_WINDOW_CYLINDER) return parreg::TimeWindowMode::Cylinder;
  fail(ErrorCode::InvalidArgument, "unknown time window mode");
}

// Runs fn(i) for i in [0, n) on up to `threads` workers with static chunks,
// rethrowing the first failure in index order.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    for (std::size_t q = 0; q < n; ++q) fn(q);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t q = n * w / workers; q < n * (w + 1) / workers; ++q) fn(q);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

extern "C" {

const char* parreg_version(void) { return PARREG_VERSION_STRING; }

const char* parreg_status_string(parreg_status status) {
  if (status == PARREG_OK) return "OK";
  if (status < PARREG_E_INVALID_ARGUMENT || status > PARREG_E_INTERNAL) return "E_UNKNOWN";
  return parreg::to_string(static_cast<ErrorCode>(status));
}

const char* parreg_last_error(void) { return g_last_error.c_str(); }

void parreg_string_free(char* s) { std::free(s); }

parreg_status parreg_crc64_file(const char* path, uint64_t* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = parreg::crc64_file(path);
  });
}

parreg_status parreg_config_validate(const char* subcommand, const char* config_json) {
  return guarded([&] {
    need(subcommand, "subcommand");
    cfg::validate_run_config(subcommand, parse(config_json));
  });
}

// ---- fields ---------------------------------------------------------------

parreg_status parreg_field_load(const char* dir, parreg_field** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    *out = new parreg_field(parreg::load(dir));
  });
}

parreg_status parreg_field_store(const parreg_field* field, const char* dir) {
  return guarded([&] {
    need(field, "field");
    need(dir, "dir");
    parreg::store(field->field, dir);
  });
}

parreg_status parreg_field_generate(const char* config_json, parreg_field** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = cfg::parse_generate(parse(config_json));
    *out = new parreg_field(cfg::run_generate(c));
  });
}

parreg_status parreg_field_solve(const char* config_json, parreg_field** out,
                                 char** diagnostics_json) {
  return guarded([&] {
    need(out, "out");
    const auto c = cfg::parse_solve(parse(config_json));
    parreg::SolverDiagnostics diag;
    auto f = std::make_unique<parreg_field>(parreg::solve(c.solver, &diag));
    emit(diagnostics_json, rep::dump(rep::to_json(diag)));
    *out = f.release();
  });
}

parreg_status parreg_field_rescale(const parreg_field* field, double lambda, parreg_field** out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = new parreg_field(parreg::rescale(field->field, lambda));
  });
}

parreg_status parreg_field_grid(const parreg_field* field, int dims[4], double lengths[3],
                                double* t0, double* dt) {
  return guarded([&] {
    need(field, "field");
    const auto& g = field->field.grid();
    if (dims) {
      dims[0] = g.nx;
      dims[1] = g.ny;
      dims[2] = g.nz;
      dims[3] = g.nt;
    }
    if (lengths) {
      lengths[0] = g.lx;
      lengths[1] = g.ly;
      lengths[2] = g.lz;
    }
    if (t0) *t0 = g.t0;
    if (dt) *dt = g.dt;
  });
}

int parreg_field_has_magnetic(const parreg_field* field) {
  return field && field->field.has_b() ? 1 : 0;
}

void parreg_field_free(parreg_field* field) { delete field; }

// ---- functionals ----------------------------------------------------------

parreg_status parreg_functionals(const parreg_field* field, const double x[3], double t, double r,
                                 parreg_window mode, int mhd, parreg_functional_values* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    const auto z = point(x, t);
    const auto v = mhd ? field->engine->evaluate_mhd(z, r, mode_of(mode))
                       : field->engine->evaluate(z, r, mode_of(mode));
    *out = {v.a, v.e, v.c, v.d, v.estimated_quadrature_error};
  });
}

parreg_status parreg_theorem1_lhs(const parreg_field* field, const double x[3], double t,
                                  double rho, double* value, double* error) {
  return guarded([&] {
    need(field, "field");
    const auto q = field->engine->theorem1_lhs(point(x, t), rho);
    if (value) *value = q.value;
    if (error) *error = q.error;
  });
}

parreg_status parreg_energy_residual(const parreg_field* field, const double x[3], double t,
                                     double rho, double* residual) {
  return guarded([&] {
    need(field, "field");
    need(residual, "residual");
    const auto z = point(x, t);
    const auto phi = parreg::TestFunction::build(z, rho);
    *residual = field->engine->energy_residual(phi, t);
  });
}

parreg_status parreg_functionals_batch(const parreg_field* field, const char* config_json,
                                       char** csv, char** json) {
  return guarded([&] {
    need(field, "field");
    const auto c = cfg::parse_functionals(parse(config_json));
    std::vector<parreg::FunctionalValues> rows(c.queries.size());
    parallel_for(rows.size(), c.threads, [&](std::size_t q) {
      const auto& fq = c.queries[q];
      rows[q] = c.mhd ? field->engine->evaluate_mhd(fq.z, fq.r, c.mode)
                      : field->engine->evaluate(fq.z, fq.r, c.mode);
    });
    if (json) {
      rep::Json a = rep::Json::array();
      for (const auto& r : rows) a.push_back(rep::to_json(r));
      *json = dup(rep::dump({{"mode", parreg::to_string(c.mode)},
                             {"mhd", c.mhd},
                             {"grid", rep::to_json(field->field.grid())},
                             {"rows", a}}));
    }
    emit(csv, rep::functionals_csv(rows));
  });
}

// ---- schedule and lemmas --------------------------------------------------

parreg_status parreg_schedule(double gamma, const char* constants_json, double eps_fraction,
                              char** json) {
  return guarded([&] {
    need(json, "json");
    parreg::CriteriaConstants k;
    if (constants_json) k = cfg::parse_constants(cfg::parse_text(constants_json));
    const auto s = parreg::make_schedule(gamma, k, eps_fraction);
    *json = dup(rep::dump(rep::to_json(s)));
  });
}

parreg_status parreg_check_identities(const char* gamma, int* passed, char** json) {
  return guarded([&] {
    need(gamma, "gamma");
    const auto r = parreg::check_schedule_identities(std::string(gamma));
    if (passed) *passed = r.passed ? 1 : 0;
    emit(json, rep::dump(rep::to_json(r)));
  });
}

parreg_status parreg_verify_lemmas(const parreg_field* field, const char* config_json,
                                   char** json, char** csv) {
  return guarded([&] {
    need(field, "field");
    const auto c = cfg::parse_lemmas(parse(config_json));
    std::vector<parreg::LemmaReport> reports;
    if (c.interpolation)
      reports.push_back(parreg::verify_interpolation(*field->engine, c.query, c.constants.k1));
    if (c.pressure)
      reports.push_back(parreg::verify_pressure(*field->engine, c.query, c.constants.k2));
    if (json) {
      rep::Json a = rep::Json::array();
      for (const auto& r : reports) a.push_back(rep::to_json(r));
      *json = dup(rep::dump({{"mode", parreg::to_string(c.query.mode)}, {"lemmas", a}}));
    }
    emit(csv, rep::lemmas_csv(reports));
  });
}

// ---- criteria -------------------------------------------------------------

parreg_status parreg_check_eps1(const parreg_field* field, const double x[3], double t, double r,
                                double eps1, double* value, int* passes) {
  return guarded([&] {
    need(field, "field");
    const auto res = parreg::check_ckn_eps1(*field->engine, point(x, t), r, eps1);
    if (value) *value = res.value;
    if (passes) *passes = res.passes ? 1 : 0;
  });
}

parreg_status parreg_gradient_criterion(const parreg_field* field, const double x[3], double t,
                                        double r_min, double eps2, char** json) {
  return guarded([&] {
    need(field, "field");
    need(json, "json");
    const auto res = parreg::check_gradient_criterion(*field->engine, point(x, t), r_min, eps2);
    *json = dup(rep::dump(rep::to_json(res)));
  });
}

parreg_status parreg_certify(const parreg_field* field, const char* config_json, char** json) {
  return guarded([&] {
    need(field, "field");
    need(json, "json");
    const auto c = cfg::parse_certify(parse(config_json));
    const auto sched = parreg::make_schedule(c.gamma, c.constants, c.eps_fraction);
    std::vector<parreg::CertificateReport> certs(c.points.size());
    parallel_for(certs.size(), c.threads, [&](std::size_t q) {
      certs[q] = parreg::certify_theorem1(*field->engine, c.points[q], c.rho, sched, c.mode);
    });
    rep::Json a = rep::Json::array();
    int certified = 0;
    for (const auto& cert : certs) {
      a.push_back(rep::to_json(cert));
      if (cert.verdict == parreg::Verdict::RegularCertified) ++certified;
    }
    *json = dup(rep::dump({{"mode", parreg::to_string(c.mode)},
                           {"schedule", rep::to_json(sched)},
                           {"identities", rep::to_json(parreg::check_schedule_identities(sched))},
                           {"certificates", a},
                           {"regular_certified", certified}}));
  });
}

parreg_status parreg_scan(const parreg_field* field, const char* config_json, char** csv,
                          char** json) {
  return guarded([&] {
    need(field, "field");
    const auto c = cfg::parse_scan(parse(config_json), &field->field.grid());
    const auto r = parreg::scan_candidates(*field->engine, c.points, c.criteria);
    emit(json, rep::dump(rep::to_json(r)));
    emit(csv, rep::scan_csv(r));
  });
}

// ---- point sets -----------------------------------------------------------

parreg_status parreg_points_create(const double* xyzt, size_t n, parreg_points** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(xyzt, "xyzt");
    std::vector<parreg::Point4> pts(n);
    for (size_t q = 0; q < n; ++q)
      pts[q] = {xyzt[4 * q], xyzt[4 * q + 1], xyzt[4 * q + 2], xyzt[4 * q + 3]};
    *out = new parreg_points{parreg::PointSet4D(std::move(pts))};
  });
}

parreg_status parreg_points_load_csv(const char* path, parreg_points** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new parreg_points{parreg::PointSet4D::load_csv(path)};
  });
}

parreg_status parreg_points_save_csv(const parreg_points* points, const char* path) {
  return guarded([&] {
    need(points, "points");
    need(path, "path");
    points->set.save_csv(path);
  });
}

parreg_status parreg_points_fixture(const char* name, parreg_points** out, char** ladder_json) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    auto f = parreg::named_fixture(name);
    rep::Json ladder = rep::Json::array();
    for (double r : f.ladder) ladder.push_back(r);
    emit(ladder_json,
         rep::dump({{"ladder", ladder}, {"expected_dimension", f.expected_dimension}}));
    *out = new parreg_points{std::move(f.points)};
  });
}

size_t parreg_points_size(const parreg_points* points) { return points ? points->set.size() : 0; }

void parreg_points_free(parreg_points* points) { delete points; }

parreg_status parreg_box_count(const parreg_points* points, double r, int with_cover, int threads,
                               uint64_t* count, char** json) {
  return guarded([&] {
    need(points, "points");
    const auto res = parreg::box_count(points->set, r, with_cover != 0, threads);
    if (count) *count = res.count;
    emit(json, rep::dump(rep::to_json(res)));
  });
}

parreg_status parreg_dimension(const parreg_points* points, const double* ladder, size_t n,
                               int threads, char** json, char** csv) {
  return guarded([&] {
    need(points, "points");
    if (n > 0) need(ladder, "ladder");
    const auto d =
        parreg::estimate_minkowski(points->set, std::vector<double>(ladder, ladder + n), threads);
    emit(json, rep::dump(rep::to_json(d)));
    emit(csv, rep::dimension_csv(d));
  });
}

parreg_status parreg_hausdorff(const parreg_points* points, double alpha, const double* deltas,
                               size_t n, int depth, char** json, char** csv) {
  return guarded([&] {
    need(points, "points");
    if (n > 0) need(deltas, "deltas");
    const auto h = parreg::hausdorff_upper(points->set, alpha,
                                           std::vector<double>(deltas, deltas + n), depth);
    emit(json, rep::dump(rep::to_json(h)));
    emit(csv, rep::hausdorff_csv(h));
  });
}

parreg_status parreg_vitali(const parreg_points* points, double r, char** json) {
  return guarded([&] {
    need(points, "points");
    need(json, "json");
    *json = dup(rep::dump(rep::to_json(parreg::vitali_disjoint(points->set, r, true))));
  });
}

parreg_status parreg_budget(const parreg_field* field, const parreg_points* points, double r,
                            double gamma, double eps, char** json) {
  return guarded([&] {
    need(field, "field");
    need(points, "points");
    need(json, "json");
    if (!(eps > 0.0)) eps = parreg::make_schedule(gamma).eps;
    const auto b = parreg::theorem2_budget(*field->engine, points->set, r, gamma, eps);
    *json = dup(rep::dump(rep::to_json(b)));
  });
}

}  // extern "C"
