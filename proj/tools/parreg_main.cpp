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

// parreg <subcommand> --config <file.json> [--out <dir>]
//
// Exit status: 0 on success, 1 on validation, domain and input errors, 2 on
// internal errors. Errors are printed to stderr as a JSON object.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parreg/parreg.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

// Carries a C API status out of a subcommand.
struct Failure {
  parreg_status status;
  std::string message;
};

void check(parreg_status s) {
  if (s != PARREG_OK) throw Failure{s, parreg_last_error()};
}

[[noreturn]] void fail_with(parreg_status s, const std::string& msg) { throw Failure{s, msg}; }

// Owns a malloc'd string from the C API.
class CString {
 public:
  CString() = default;
  ~CString() { parreg_string_free(p_); }
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

struct FieldHandle {
  parreg_field* p = nullptr;
  ~FieldHandle() { parreg_field_free(p); }
};

struct PointsHandle {
  parreg_points* p = nullptr;
  ~PointsHandle() { parreg_points_free(p); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail_with(PARREG_E_IO, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

class Run {
 public:
  Run(std::string sub, fs::path config_path, fs::path out)
      : sub_(std::move(sub)), config_path_(std::move(config_path)), out_(std::move(out)) {}

  int execute();

 private:
  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : config_path_.parent_path() / path;
  }

  void record_input(const fs::path& p) {
    std::uint64_t crc = 0;
    check(parreg_crc64_file(p.string().c_str(), &crc));
    inputs_.push_back({{"path", p.string()}, {"crc64", hex64(crc)}});
  }

  void record_field_inputs(const fs::path& dir) {
    for (const char* name : {"header.json", "u.bin", "p.bin", "b.bin"})
      if (fs::exists(dir / name)) record_input(dir / name);
  }

  void write(const std::string& name, const std::string& text) {
    const fs::path p = out_ / name;
    std::ofstream o(p, std::ios::binary);
    if (!o || !(o << text)) fail_with(PARREG_E_IO, "cannot write " + p.string());
    outputs_.push_back(name);
  }

  void load_field(const std::string& rel, FieldHandle& h) {
    const fs::path dir = resolve(rel);
    record_field_inputs(dir);
    check(parreg_field_load(dir.string().c_str(), &h.p));
  }

  void load_points(const Json& cfg, PointsHandle& h, std::vector<double>* fixture_ladder) {
    if (cfg.contains("points")) {
      const fs::path p = resolve(cfg["points"].get<std::string>());
      record_input(p);
      check(parreg_points_load_csv(p.string().c_str(), &h.p));
    } else {
      CString meta;
      check(parreg_points_fixture(cfg["fixture"].get<std::string>().c_str(), &h.p, meta.out()));
      if (fixture_ladder) *fixture_ladder = Json::parse(meta.str())["ladder"].get<std::vector<double>>();
    }
  }

  void generate();
  void solve();
  void functionals();
  void certify();
  void scan();
  void cover();
  void dimension();
  void lemmas();

  std::string sub_;
  fs::path config_path_;
  fs::path out_;
  Json cfg_;
  std::string config_text_;
  Json inputs_ = Json::array();
  std::vector<std::string> outputs_;
};

void Run::generate() {
  FieldHandle f;
  check(parreg_field_generate(config_text_.c_str(), &f.p));
  const std::string name = cfg_.value("output", "field");
  check(parreg_field_store(f.p, (out_ / name).string().c_str()));
  outputs_.push_back(name);
}

void Run::solve() {
  Json c = cfg_;
  auto& ic = c["initial_condition"];
  if (ic.is_object() && ic.value("type", "") == "from_file") {
    const fs::path p = resolve(ic["path"].get<std::string>());
    record_field_inputs(p);
    ic["path"] = p.string();
  }
  FieldHandle f;
  CString diag;
  check(parreg_field_solve(c.dump().c_str(), &f.p, diag.out()));
  const std::string name = cfg_.value("output", "field");
  check(parreg_field_store(f.p, (out_ / name).string().c_str()));
  outputs_.push_back(name);
  write("solve_diagnostics.json", diag.str());
}

void Run::functionals() {
  FieldHandle f;
  load_field(cfg_["field"], f);
  CString csv, json;
  check(parreg_functionals_batch(f.p, config_text_.c_str(), csv.out(), json.out()));
  write("functionals.csv", csv.str());
  write("functionals.json", json.str());
}

void Run::certify() {
  FieldHandle f;
  load_field(cfg_["field"], f);
  CString json;
  check(parreg_certify(f.p, config_text_.c_str(), json.out()));
  write("certificate.json", json.str());
}

void Run::scan() {
  FieldHandle f;
  load_field(cfg_["field"], f);
  CString csv, json;
  check(parreg_scan(f.p, config_text_.c_str(), csv.out(), json.out()));
  write("scan.csv", csv.str());
  write("scan.json", json.str());
  std::string cands = "x,y,z,t\n";
  char buf[128];
  for (const auto& c : Json::parse(json.str())["candidates"]) {
    const auto& x = c["x"];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[0].get<double>(),
                  x[1].get<double>(), x[2].get<double>(), c["t"].get<double>());
    cands += buf;
  }
  write("candidates.csv", cands);
}

void Run::cover() {
  PointsHandle pts;
  load_points(cfg_, pts, nullptr);
  const double r = cfg_["r"];
  const int threads = cfg_.value("threads", 1);
  Json report;
  {
    CString json;
    check(parreg_box_count(pts.p, r, cfg_.value("with_cover", false) ? 1 : 0, threads, nullptr,
                           json.out()));
    report["box_count"] = Json::parse(json.str());
  }
  if (cfg_.value("vitali", true)) {
    CString json;
    check(parreg_vitali(pts.p, r, json.out()));
    report["vitali"] = Json::parse(json.str());
  }
  if (cfg_.contains("budget")) {
    const auto& b = cfg_["budget"];
    FieldHandle f;
    load_field(b["field"], f);
    CString json;
    check(parreg_budget(f.p, pts.p, r, b.value("gamma", 0.1), b.value("eps", 0.0), json.out()));
    report["budget"] = Json::parse(json.str());
  }
  write("cover.json", report.dump(2) + "\n");
}

void Run::dimension() {
  PointsHandle pts;
  std::vector<double> ladder;
  load_points(cfg_, pts, &ladder);
  if (cfg_.contains("ladder")) ladder = cfg_["ladder"].get<std::vector<double>>();
  const int threads = cfg_.value("threads", 1);
  Json report;
  {
    CString json, csv;
    check(parreg_dimension(pts.p, ladder.data(), ladder.size(), threads, json.out(), csv.out()));
    report["minkowski"] = Json::parse(json.str());
    write("dimension.csv", csv.str());
  }
  if (cfg_.contains("hausdorff")) {
    const auto& h = cfg_["hausdorff"];
    const auto deltas = h["deltas"].get<std::vector<double>>();
    CString json, csv;
    check(parreg_hausdorff(pts.p, h["alpha"].get<double>(), deltas.data(), deltas.size(),
                           h.value("depth", 12), json.out(), csv.out()));
    report["hausdorff"] = Json::parse(json.str());
    write("hausdorff.csv", csv.str());
  }
  report["points"] = parreg_points_size(pts.p);
  write("dimension.json", report.dump(2) + "\n");
}

void Run::lemmas() {
  FieldHandle f;
  load_field(cfg_["field"], f);
  CString json, csv;
  check(parreg_verify_lemmas(f.p, config_text_.c_str(), json.out(), csv.out()));
  write("lemmas.json", json.str());
  write("lemmas.csv", csv.str());
}

int Run::execute() {
  const auto start = std::chrono::steady_clock::now();
  config_text_ = read_file(config_path_);
  check(parreg_config_validate(sub_.c_str(), config_text_.c_str()));
  cfg_ = Json::parse(config_text_);
  std::error_code ec;
  fs::create_directories(out_, ec);
  if (ec) fail_with(PARREG_E_IO, "cannot create " + out_.string() + ": " + ec.message());
  record_input(config_path_);

  if (sub_ == "generate") generate();
  else if (sub_ == "solve") solve();
  else if (sub_ == "functionals") functionals();
  else if (sub_ == "certify") certify();
  else if (sub_ == "scan") scan();
  else if (sub_ == "cover") cover();
  else if (sub_ == "dimension") dimension();
  else lemmas();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::uint64_t config_crc = 0;
  check(parreg_crc64_file(config_path_.string().c_str(), &config_crc));
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json manifest = {{"subcommand", sub_},
                   {"config", config_path_.string()},
                   {"config_crc64", hex64(config_crc)},
                   {"inputs", inputs_},
                   {"outputs", outputs_},
                   {"versions", {{"parreg", parreg_version()}, {"container", "NSST v1"}}},
                   {"finished_at", stamp},
                   {"wall_time_seconds", wall}};
  write("run_manifest.json", manifest.dump(2) + "\n");
  return 0;
}

int report_failure(const Failure& f) {
  Json err = {{"error", {{"code", parreg_status_string(f.status)}, {"message", f.message}}}};
  std::cerr << err.dump() << "\n";
  return f.status == PARREG_E_INTERNAL ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-regularity diagnostics for space-time velocity fields"};
  app.set_version_flag("--version", std::string(parreg_version()));
  app.require_subcommand(1);
  std::string config, out = ".";
  const std::vector<std::pair<const char*, const char*>> subs = {
      {"generate", "Write an analytic or synthetic field"},
      {"solve", "Integrate the periodic Navier-Stokes equations"},
      {"functionals", "Evaluate scaled functionals at (x, t, r) queries"},
      {"certify", "Run the iteration certificate at given points"},
      {"scan", "Scan points for joint failure of the regularity criteria"},
      {"cover", "Box counts, Vitali families and covering budgets"},
      {"dimension", "Box-counting and Hausdorff-content estimates"},
      {"verify-lemmas", "Empirical constants of the interpolation and pressure lemmas"},
  };
  for (const auto& [name, desc] : subs) {
    auto* sc = app.add_subcommand(name, desc);
    sc->add_option("--config", config, "JSON run configuration")->required();
    sc->add_option("--out", out, "Output directory (default: current directory)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return Run(sub, fs::path(config), fs::path(out)).execute();
  } catch (const Failure& f) {
    return report_failure(f);
  } catch (const std::exception& e) {
    return report_failure({PARREG_E_INTERNAL, e.what()});
  }
}
