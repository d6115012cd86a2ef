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

#include "config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "parreg/error.hpp"

namespace parreg::config {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  fail(ErrorCode::Configuration, where + ": " + msg);
}

// Reads an object and remembers which keys were consumed; finish() rejects
// the rest.
class Obj {
 public:
  Obj(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) bad(where_, "expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const Json& at(const std::string& key) {
    if (!has(key)) bad(where_, "missing required key '" + key + "'");
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  double num(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) bad(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(path(key), "expected a finite number");
    return d;
  }
  double num(const std::string& key, double def) { return has(key) ? num(key) : def; }
  std::optional<double> opt_num(const std::string& key) {
    return has(key) ? std::optional<double>(num(key)) : std::nullopt;
  }

  std::int64_t integer(const std::string& key) {
    const Json& v = at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    bad(path(key), "expected an integer");
  }
  int int32(const std::string& key) {
    const auto v = integer(key);
    if (v < -2147483647 || v > 2147483647) bad(path(key), "integer out of range");
    return static_cast<int>(v);
  }
  int int32(const std::string& key, int def) { return has(key) ? int32(key) : def; }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) bad(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) bad(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& def) {
    return has(key) ? str(key) : def;
  }

  std::vector<double> nums(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) bad(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        bad(path(key), "expected an array of finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Vec3 vec3(const std::string& key) {
    const auto v = nums(key);
    if (v.size() != 3) bad(path(key), "expected three numbers");
    return {v[0], v[1], v[2]};
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) bad(where_, "unknown key '" + it.key() + "'");
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

int threads_of(Obj& o) {
  const int t = o.int32("threads", 1);
  if (t < 1 || t > 256) bad(o.path("threads"), "must lie in [1, 256]");
  return t;
}

TimeWindowMode mode_of(Obj& o) {
  const std::string m = o.str("mode", "paper_literal");
  if (m == "paper_literal") return TimeWindowMode::PaperLiteral;
  if (m == "cylinder") return TimeWindowMode::Cylinder;
  bad(o.path("mode"), "expected 'paper_literal' or 'cylinder'");
}

SpacetimePoint point_of(const Json& j, const std::string& where) {
  Obj o(j, where);
  SpacetimePoint z;
  z.x = o.vec3("x");
  z.t = o.num("t");
  o.finish();
  return z;
}

PointSource source_of(Obj& o) {
  PointSource s;
  const bool p = o.has("points"), f = o.has("fixture");
  if (p == f) bad(o.path("points"), "exactly one of 'points' (CSV path) or 'fixture' is required");
  if (p) {
    s.path = o.str("points");
  } else {
    s.fixture = o.str("fixture");
    bool known = false;
    for (const auto& n : fixture_names()) known = known || n == s.fixture;
    if (!known) bad(o.path("fixture"), "unknown fixture '" + s.fixture + "'");
  }
  return s;
}

void positive(const std::string& where, double v) {
  if (!(v > 0.0)) bad(where, "must be positive");
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Configuration, std::string("invalid JSON: ") + e.what());
  }
}

Grid parse_grid(const Json& j, const std::string& where) {
  Obj o(j, where);
  Grid g;
  const double two_pi = 2.0 * std::numbers::pi;
  g.nx = o.int32("nx");
  g.ny = o.int32("ny");
  g.nz = o.int32("nz");
  g.lx = o.num("lx", two_pi);
  g.ly = o.num("ly", two_pi);
  g.lz = o.num("lz", two_pi);
  g.nt = o.int32("nt");
  g.t0 = o.num("t0", 0.0);
  g.dt = o.num("dt");
  o.finish();
  g.validate();
  return g;
}

SolverConfig parse_solver(const Json& j) {
  Obj o(j, "solver");
  SolverConfig c;
  {
    Obj g(o.at("grid"), "solver.grid");
    const double two_pi = 2.0 * std::numbers::pi;
    c.nx = g.int32("nx");
    c.ny = g.int32("ny");
    c.nz = g.int32("nz");
    c.lx = g.num("lx", two_pi);
    c.ly = g.num("ly", two_pi);
    c.lz = g.num("lz", two_pi);
    c.t0 = g.num("t0", 0.0);
    g.finish();
  }
  c.t_end = o.num("t_end");
  c.cfl_safety = o.num("cfl_safety", c.cfl_safety);
  c.dealias = o.num("dealias", c.dealias);
  c.output_stride = o.int32("output_stride", 1);
  c.max_dt = o.opt_num("max_dt");
  {
    Obj ic(o.at("initial_condition"), "solver.initial_condition");
    const std::string type = ic.str("type");
    if (type == "beltrami") {
      c.initial.kind = InitialCondition::Kind::Beltrami;
      c.initial.a = ic.num("a", 1.0);
      c.initial.b = ic.num("b", 1.0);
      c.initial.c = ic.num("c", 1.0);
    } else if (type == "random_solenoidal") {
      c.initial.kind = InitialCondition::Kind::RandomSolenoidal;
      const auto seed = ic.integer("seed");
      if (seed < 0) bad("solver.initial_condition.seed", "must be non-negative");
      c.initial.seed = static_cast<std::uint64_t>(seed);
      c.initial.energy_spectrum_slope = ic.num("energy_spectrum_slope", -5.0 / 3.0);
      c.initial.rms_velocity = ic.num("rms_velocity", 1.0);
    } else if (type == "from_file") {
      c.initial.kind = InitialCondition::Kind::FromFile;
      c.initial.path = ic.str("path");
    } else {
      bad("solver.initial_condition.type",
          "expected 'beltrami', 'random_solenoidal' or 'from_file'");
    }
    ic.finish();
  }
  o.finish();
  c.validate();
  return c;
}

CriteriaConstants parse_constants(const Json& j) {
  Obj o(j, "constants");
  CriteriaConstants c;
  c.eps1 = o.num("eps1", c.eps1);
  c.eps2 = o.num("eps2", c.eps2);
  c.zeta = o.num("zeta", c.zeta);
  c.k1 = o.num("k1", c.k1);
  c.k2 = o.num("k2", c.k2);
  o.finish();
  try {
    c.validate();
  } catch (const Error& e) {
    bad("constants", e.what());
  }
  return c;
}

std::vector<SpacetimePoint> parse_points(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of {x, t} objects");
  std::vector<SpacetimePoint> out;
  for (std::size_t q = 0; q < j.size(); ++q)
    out.push_back(point_of(j[q], where + "[" + std::to_string(q) + "]"));
  return out;
}

GenerateConfig parse_generate(const Json& j) {
  Obj o(j, "generate");
  GenerateConfig c;
  c.generator = o.str("generator");
  c.grid = parse_grid(o.at("grid"), "generate.grid");
  c.output = o.str("output", c.output);
  if (o.has("rescale")) {
    Obj r(o.at("rescale"), "generate.rescale");
    c.rescale_lambda = r.num("lambda");
    positive("generate.rescale.lambda", *c.rescale_lambda);
    r.finish();
  }
  threads_of(o);
  const Json empty = Json::object();
  Obj p(o.has("params") ? o.at("params") : empty, "generate.params");
  if (c.generator == "beltrami" || c.generator == "beltrami_mhd") {
    c.a = p.num("a", 1.0);
    c.b = p.num("b", 1.0);
    c.c = p.num("c", 1.0);
    if (c.generator == "beltrami_mhd") c.b_scale = p.num("b_scale", c.b_scale);
  } else if (c.generator == "constant") {
    c.u0 = p.vec3("u0");
    c.p0 = p.num("p0", 0.0);
  } else if (c.generator == "zero") {
  } else if (c.generator == "near_singular") {
    c.exponent = p.num("exponent");
    c.center = point_of(p.at("center"), "generate.params.center");
    c.cap = p.opt_num("cap");
  } else {
    bad("generate.generator",
        "expected beltrami, beltrami_mhd, constant, zero or near_singular");
  }
  p.finish();
  o.finish();
  return c;
}

SpaceTimeField run_generate(const GenerateConfig& c) {
  SpaceTimeField f = [&] {
    if (c.generator == "beltrami") return generate_beltrami(c.grid, c.a, c.b, c.c);
    if (c.generator == "beltrami_mhd")
      return generate_beltrami_mhd(c.grid, c.a, c.b, c.c, c.b_scale);
    if (c.generator == "constant") return generate_constant(c.grid, c.u0, c.p0);
    if (c.generator == "zero") return generate_constant(c.grid, {0.0, 0.0, 0.0}, 0.0);
    return generate_near_singular(c.grid, c.exponent, c.center, c.cap);
  }();
  if (c.rescale_lambda) return rescale(f, *c.rescale_lambda);
  return f;
}

SolveConfig parse_solve(const Json& j) {
  if (!j.is_object()) bad("solve", "expected an object");
  Json solver = j;
  SolveConfig c;
  if (solver.contains("output")) {
    if (!solver["output"].is_string()) bad("solve.output", "expected a string");
    c.output = solver["output"].get<std::string>();
    solver.erase("output");
  }
  if (solver.contains("threads")) {
    Obj t(Json{{"threads", solver["threads"]}}, "solve");
    threads_of(t);
    solver.erase("threads");
  }
  c.solver = parse_solver(solver);
  return c;
}

std::vector<FunctionalQuery> parse_queries(const Json& j) {
  if (!j.is_array()) bad("queries", "expected an array of {x, t, r} objects");
  std::vector<FunctionalQuery> out;
  for (std::size_t q = 0; q < j.size(); ++q) {
    const std::string where = "queries[" + std::to_string(q) + "]";
    Obj o(j[q], where);
    FunctionalQuery fq;
    fq.z.x = o.vec3("x");
    fq.z.t = o.num("t");
    fq.r = o.num("r");
    positive(where + ".r", fq.r);
    o.finish();
    out.push_back(fq);
  }
  return out;
}

FunctionalsConfig parse_functionals(const Json& j) {
  Obj o(j, "functionals");
  FunctionalsConfig c;
  c.field = o.str("field");
  c.queries = parse_queries(o.at("queries"));
  c.mode = mode_of(o);
  c.mhd = o.boolean("mhd", false);
  c.threads = threads_of(o);
  o.finish();
  return c;
}

CertifyConfig parse_certify(const Json& j) {
  Obj o(j, "certify");
  CertifyConfig c;
  c.field = o.str("field");
  c.points = parse_points(o.at("points"), "certify.points");
  if (c.points.empty()) bad("certify.points", "at least one point is required");
  c.rho = o.num("rho", c.rho);
  c.gamma = o.num("gamma", c.gamma);
  c.eps_fraction = o.num("eps_fraction", c.eps_fraction);
  if (!(c.eps_fraction > 0.0 && c.eps_fraction < 1.0))
    bad("certify.eps_fraction", "must lie in (0, 1)");
  if (o.has("constants")) c.constants = parse_constants(o.at("constants"));
  c.mode = mode_of(o);
  c.threads = threads_of(o);
  o.finish();
  return c;
}

ScanConfig parse_scan(const Json& j, const Grid* grid) {
  Obj o(j, "scan");
  ScanConfig c;
  c.field = o.str("field");
  const bool has_points = o.has("points"), has_lattice = o.has("lattice");
  if (has_points == has_lattice) bad("scan", "exactly one of 'points' or 'lattice' is required");
  if (has_points) {
    c.points = parse_points(o.at("points"), "scan.points");
  } else {
    Obj l(o.at("lattice"), "scan.lattice");
    const int nx = l.int32("nx"), ny = l.int32("ny"), nz = l.int32("nz");
    const auto times = l.nums("times");
    l.finish();
    if (nx < 1 || ny < 1 || nz < 1 || times.empty())
      bad("scan.lattice", "counts must be positive and times non-empty");
    if (static_cast<double>(nx) * ny * nz * times.size() > 1e7)
      bad("scan.lattice", "more than 1e7 points");
    if (grid) {
      for (int i = 0; i < nx; ++i)
        for (int jj = 0; jj < ny; ++jj)
          for (int k = 0; k < nz; ++k)
            for (double t : times)
              c.points.push_back({{(i + 0.5) * grid->lx / nx, (jj + 0.5) * grid->ly / ny,
                                   (k + 0.5) * grid->lz / nz},
                                  t});
    }
  }
  {
    const Json& cr = o.at("criteria");
    if (!cr.is_array() || cr.empty()) bad("scan.criteria", "expected a non-empty array");
    c.criteria.eps1 = c.criteria.gradient = c.criteria.theorem1 = false;
    for (const auto& e : cr) {
      const std::string s = e.is_string() ? e.get<std::string>() : "";
      if (s == "eps1") c.criteria.eps1 = true;
      else if (s == "gradient") c.criteria.gradient = true;
      else if (s == "theorem1") c.criteria.theorem1 = true;
      else bad("scan.criteria", "expected entries 'eps1', 'gradient' or 'theorem1'");
    }
  }
  c.criteria.radii = o.has("radii") ? o.nums("radii") : std::vector<double>{};
  for (double r : c.criteria.radii) positive("scan.radii", r);
  if ((c.criteria.eps1 || c.criteria.theorem1) && c.criteria.radii.empty())
    bad("scan.radii", "required for the eps1 and theorem1 criteria");
  c.criteria.gradient_r_min = o.num("gradient_r_min", 0.0);
  c.criteria.gamma = o.num("gamma", 0.1);
  if (o.has("constants")) c.criteria.constants = parse_constants(o.at("constants"));
  c.criteria.mode = mode_of(o);
  c.criteria.threads = threads_of(o);
  o.finish();
  return c;
}

LemmasConfig parse_lemmas(const Json& j) {
  Obj o(j, "verify-lemmas");
  LemmasConfig c;
  c.field = o.str("field");
  c.query.points = parse_points(o.at("points"), "verify-lemmas.points");
  c.query.radii = o.nums("radii");
  c.query.thetas = o.nums("thetas");
  c.query.mode = mode_of(o);
  if (o.has("constants")) c.constants = parse_constants(o.at("constants"));
  if (o.has("lemmas")) {
    const Json& l = o.at("lemmas");
    if (!l.is_array() || l.empty()) bad("verify-lemmas.lemmas", "expected a non-empty array");
    c.interpolation = c.pressure = false;
    for (const auto& e : l) {
      const std::string s = e.is_string() ? e.get<std::string>() : "";
      if (s == "interpolation") c.interpolation = true;
      else if (s == "pressure") c.pressure = true;
      else bad("verify-lemmas.lemmas", "expected 'interpolation' or 'pressure'");
    }
  }
  threads_of(o);
  o.finish();
  return c;
}

CoverConfig parse_cover(const Json& j) {
  Obj o(j, "cover");
  CoverConfig c;
  c.source = source_of(o);
  c.r = o.num("r");
  positive("cover.r", c.r);
  c.with_cover = o.boolean("with_cover", false);
  c.vitali = o.boolean("vitali", true);
  if (o.has("budget")) {
    Obj b(o.at("budget"), "cover.budget");
    c.budget_field = b.str("field");
    c.budget_gamma = b.num("gamma", 0.1);
    c.budget_eps = b.opt_num("eps");
    if (c.budget_eps) positive("cover.budget.eps", *c.budget_eps);
    b.finish();
  }
  c.threads = threads_of(o);
  o.finish();
  return c;
}

DimensionConfig parse_dimension(const Json& j) {
  Obj o(j, "dimension");
  DimensionConfig c;
  c.source = source_of(o);
  if (o.has("ladder")) c.ladder = o.nums("ladder");
  if (c.ladder.empty() && c.source.fixture.empty())
    bad("dimension.ladder", "required for CSV point sets");
  for (double r : c.ladder) positive("dimension.ladder", r);
  if (o.has("hausdorff")) {
    Obj h(o.at("hausdorff"), "dimension.hausdorff");
    HausdorffConfig hc;
    hc.alpha = h.num("alpha");
    hc.deltas = h.nums("deltas");
    hc.depth = h.int32("depth", hc.depth);
    h.finish();
    if (hc.alpha < 0.0) bad("dimension.hausdorff.alpha", "must be non-negative");
    if (hc.deltas.empty()) bad("dimension.hausdorff.deltas", "must not be empty");
    for (double d : hc.deltas) positive("dimension.hausdorff.deltas", d);
    if (hc.depth < 0 || hc.depth > 20) bad("dimension.hausdorff.depth", "must lie in [0, 20]");
    c.hausdorff = hc;
  }
  c.threads = threads_of(o);
  o.finish();
  return c;
}

void validate_run_config(const std::string& sub, const Json& j) {
  if (sub == "generate") parse_generate(j);
  else if (sub == "solve") parse_solve(j);
  else if (sub == "functionals") parse_functionals(j);
  else if (sub == "certify") parse_certify(j);
  else if (sub == "scan") parse_scan(j, nullptr);
  else if (sub == "cover") parse_cover(j);
  else if (sub == "dimension") parse_dimension(j);
  else if (sub == "verify-lemmas") parse_lemmas(j);
  else fail(ErrorCode::InvalidArgument, "unknown subcommand '" + sub + "'");
}

}  // namespace parreg::config
