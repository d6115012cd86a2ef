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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "parreg/field.hpp"

namespace parreg {

// NSST v1 container: a directory holding header.json plus u.bin, p.bin and
// optionally b.bin (raw little-endian f64, layout "t,c,x,y,z;z-fastest").
// header.json carries per-payload CRC-64/XZ checksums as 16-digit hex.

/// CRC-64/XZ (ECMA-182 polynomial, reflected, all-ones init and xorout).
std::uint64_t crc64(std::span<const unsigned char> bytes);
std::uint64_t crc64_file(const std::filesystem::path& path);
std::string crc64_hex(std::uint64_t value);

void store(const SpaceTimeField& field, const std::filesystem::path& dir);

/// Throws MalformedHeader, TruncatedPayload or ChecksumMismatch; no partially
/// read field is ever returned.
SpaceTimeField load(const std::filesystem::path& dir);

}  // namespace parreg
