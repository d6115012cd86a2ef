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

#include "parreg/nsst_io.hpp"

#include <bit>
#include <boost/crc.hpp>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include "json.hpp"

#include "parreg/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "NSST payloads are little-endian; big-endian hosts are unsupported");

namespace parreg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Crc64Xz = boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true>;

constexpr const char* kLayout = "t,c,x,y,z;z-fastest";
constexpr const char* kDtype = "f64le";

void write_payload(const fs::path& path, std::span<const double> data,
                   std::uint64_t& crc_out) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  const auto* bytes = reinterpret_cast<const char*>(data.data());
  const std::size_t n = data.size() * sizeof(double);
  out.write(bytes, static_cast<std::streamsize>(n));
  if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
  Crc64Xz crc;
  crc.process_bytes(bytes, n);
  crc_out = crc.checksum();
}

std::vector<double> read_payload(const fs::path& path, std::size_t count,
                                 const std::string& expected_crc) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) fail(ErrorCode::TruncatedPayload, "missing payload " + path.filename().string());
  const auto size = static_cast<std::size_t>(in.tellg());
  const std::size_t want = count * sizeof(double);
  if (size < want)
    fail(ErrorCode::TruncatedPayload, path.filename().string() + ": " +
                                          std::to_string(size) + " bytes, expected " +
                                          std::to_string(want));
  if (size > want)
    fail(ErrorCode::MalformedHeader, path.filename().string() +
                                         ": payload longer than the header declares");
  in.seekg(0);
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(want));
  if (!in) fail(ErrorCode::TruncatedPayload, "short read: " + path.string());
  Crc64Xz crc;
  crc.process_bytes(data.data(), want);
  if (crc64_hex(crc.checksum()) != expected_crc)
    fail(ErrorCode::ChecksumMismatch, path.filename().string() + ": checksum mismatch");
  return data;
}

template <typename T>
T require(const json& h, const char* key) {
  if (!h.contains(key)) fail(ErrorCode::MalformedHeader, std::string("header lacks '") + key + "'");
  try {
    return h.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::MalformedHeader, std::string("header key '") + key + "' has wrong type");
  }
}

int require_count(const json& h, const char* key) {
  const json& v = h.contains(key) ? h.at(key) : json();
  if (!v.is_number_integer())
    fail(ErrorCode::MalformedHeader, std::string("header key '") + key + "' must be an integer");
  const auto n = v.get<std::int64_t>();
  if (n <= 0 || n > (1 << 20))
    fail(ErrorCode::MalformedHeader, std::string("header key '") + key + "' out of range");
  return static_cast<int>(n);
}

}  // namespace

std::uint64_t crc64(std::span<const unsigned char> bytes) {
  Crc64Xz crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::uint64_t crc64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  Crc64Xz crc;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    crc.process_bytes(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return crc.checksum();
}

std::string crc64_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, value);
  return buf;
}

void store(const SpaceTimeField& field, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  const Grid& g = field.grid();
  std::uint64_t cu = 0, cp = 0, cb = 0;
  write_payload(dir / "u.bin", field.u(), cu);
  write_payload(dir / "p.bin", field.p(), cp);
  json checksums = {{"u.bin", crc64_hex(cu)}, {"p.bin", crc64_hex(cp)}};
  if (field.has_b()) {
    write_payload(dir / "b.bin", field.b(), cb);
    checksums["b.bin"] = crc64_hex(cb);
  }
  json h;
  h["version"] = 1;
  h["nx"] = g.nx;
  h["ny"] = g.ny;
  h["nz"] = g.nz;
  h["nt"] = g.nt;
  h["lx"] = g.lx;
  h["ly"] = g.ly;
  h["lz"] = g.lz;
  h["t0"] = g.t0;
  h["dt"] = g.dt;
  h["has_b"] = field.has_b();
  h["layout"] = kLayout;
  h["dtype"] = kDtype;
  h["checksums"] = checksums;
  if (!field.metadata().empty()) h["metadata"] = field.metadata();
  std::ofstream out(dir / "header.json", std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write header in " + dir.string());
  out << h.dump(2) << "\n";
  if (!out) fail(ErrorCode::Io, "header write failed");
}

SpaceTimeField load(const fs::path& dir) {
  const fs::path header_path = dir / "header.json";
  std::ifstream in(header_path);
  if (!in) fail(ErrorCode::Io, "cannot open " + header_path.string());
  json h;
  try {
    h = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedHeader, std::string("header.json: ") + e.what());
  }
  if (!h.is_object()) fail(ErrorCode::MalformedHeader, "header.json is not an object");
  static const std::set<std::string> known = {
      "version", "nx", "ny", "nz", "nt", "lx", "ly", "lz", "t0", "dt",
      "has_b", "layout", "dtype", "checksums", "metadata"};
  for (const auto& [key, _] : h.items())
    if (!known.count(key)) fail(ErrorCode::MalformedHeader, "unknown header key '" + key + "'");

  if (require<int>(h, "version") != 1) fail(ErrorCode::MalformedHeader, "unsupported version");
  if (require<std::string>(h, "layout") != kLayout)
    fail(ErrorCode::MalformedHeader, "unsupported layout");
  if (require<std::string>(h, "dtype") != kDtype)
    fail(ErrorCode::MalformedHeader, "unsupported dtype");

  Grid g;
  g.nx = require_count(h, "nx");
  g.ny = require_count(h, "ny");
  g.nz = require_count(h, "nz");
  g.nt = require_count(h, "nt");
  g.lx = require<double>(h, "lx");
  g.ly = require<double>(h, "ly");
  g.lz = require<double>(h, "lz");
  g.t0 = require<double>(h, "t0");
  g.dt = require<double>(h, "dt");
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorCode::MalformedHeader, e.what());
  }
  const bool has_b = require<bool>(h, "has_b");
  const json checksums = require<json>(h, "checksums");
  if (!checksums.is_object()) fail(ErrorCode::MalformedHeader, "checksums must be an object");
  auto checksum_of = [&](const char* name) {
    if (!checksums.contains(name) || !checksums.at(name).is_string())
      fail(ErrorCode::MalformedHeader, std::string("missing checksum for ") + name);
    return checksums.at(name).get<std::string>();
  };
  Metadata meta;
  if (h.contains("metadata")) {
    try {
      meta = h.at("metadata").get<Metadata>();
    } catch (const json::exception&) {
      fail(ErrorCode::MalformedHeader, "metadata must map strings to strings");
    }
  }

  const std::size_t s = g.spatial_size();
  const std::size_t nt = static_cast<std::size_t>(g.nt);
  auto u = read_payload(dir / "u.bin", nt * 3 * s, checksum_of("u.bin"));
  auto p = read_payload(dir / "p.bin", nt * s, checksum_of("p.bin"));
  std::optional<std::vector<double>> b;
  if (has_b) b = read_payload(dir / "b.bin", nt * 3 * s, checksum_of("b.bin"));
  try {
    return SpaceTimeField(g, std::move(u), std::move(p), std::move(b), std::move(meta));
  } catch (const Error& e) {
    fail(ErrorCode::MalformedHeader, std::string("payload rejected: ") + e.what());
  }
}

}  // namespace parreg
