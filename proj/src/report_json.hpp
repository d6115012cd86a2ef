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

// JSON and CSV renderings of every report. Non-finite doubles are written as
// the strings "inf", "-inf" and "nan"; CSV numbers use %.17g.

#include <string>
#include <vector>

#include "json.hpp"
#include "parreg/certifier.hpp"
#include "parreg/coverdim.hpp"
#include "parreg/lab.hpp"
#include "parreg/spectral.hpp"

namespace parreg::report {

using Json = nlohmann::json;

Json number(double v);
std::string fmt(double v);
/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

Json to_json(const Grid& g);
Json to_json(const SpacetimePoint& z);
Json to_json(const FunctionalValues& v);
Json to_json(const CriteriaConstants& c);
Json to_json(const ParameterSchedule& s);
Json to_json(const IdentityReport& r);
Json to_json(const Eps1Result& r);
Json to_json(const GradientReport& r);
Json to_json(const CertificateReport& r);
Json to_json(const ScanReport& r);
Json to_json(const LemmaReport& r);
Json to_json(const CoverResult& r);
Json to_json(const DimensionEstimate& d);
Json to_json(const HausdorffEstimate& h);
Json to_json(const VitaliResult& v);
Json to_json(const BudgetReport& b);
Json to_json(const SolverDiagnostics& d);

/// x,y,z,t,r,A,E,C,D,err
std::string functionals_csv(const std::vector<FunctionalValues>& rows);
/// One row per scanned point.
std::string scan_csv(const ScanReport& r);
/// One row per lemma sample.
std::string lemmas_csv(const std::vector<LemmaReport>& reports);
/// r,neg_log_r,count,log_count,ratio
std::string dimension_csv(const DimensionEstimate& d);
/// delta,bound,cylinders,finest_radius
std::string hausdorff_csv(const HausdorffEstimate& h);
/// x,y,z,t
std::string points_csv(const std::vector<Point4>& pts);

}  // namespace parreg::report
