// Copyright 2026 povmtool authors
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

// File formats: measurement descriptions, density states, decomposition
// certificates and sample records. All JSON documents are written in a
// canonical form (sorted members, no whitespace, floats with 17 significant
// digits so they round-trip bit-exactly) and fingerprinted with an FNV-1a
// digest of the canonical bytes. Unknown members are rejected.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "povm/povm.hpp"
#include "povm/realize.hpp"

namespace povm {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical byte form of a JSON document.
std::string canonical_dump(const nlohmann::json& j);

// FNV-1a 64-bit digest, 16 hex characters.
std::string digest_hex(const std::string& bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

struct LoadedPovm {
  int dim = 0;
  std::optional<FinitePOVM> finite;
  std::optional<ContinuousPOVM> continuous;
  std::string digest;  // of the canonicalized document
};

LoadedPovm parse_povm_json(const nlohmann::json& doc);
LoadedPovm load_povm_file(const std::string& path);

nlohmann::json finite_povm_to_json(const FinitePOVM& p);   // bare outcomes/effects object
nlohmann::json povm_file_json(const FinitePOVM& p);        // full document with header

DensityState load_state_file(const std::string& path);
nlohmann::json state_file_json(const DensityState& rho);

nlohmann::json outcome_space_to_json(const OutcomeSpace& space);
OutcomeSpace outcome_space_from_json(const nlohmann::json& doc,
                                     const std::vector<OutcomePoint>& reference_points);

struct Certificate {
  std::string kind;  // "decomposition" or "realization"
  int dim = 0;
  std::string input_digest;
  FinitePOVM input_povm;
  OutcomeSpace outcome_space;
  MixtureDecomposition decomposition;
  double reconstruction_error = 0.0;
  bool partial = false;
  std::string tool_version;
  // realization extras, absent for plain decompositions
  std::optional<int> discretization_nodes;
  std::optional<double> normalization_correction;
  std::optional<double> truncation_mass;
};

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate parse_certificate_json(const nlohmann::json& doc);
Certificate load_certificate_file(const std::string& path);

// One record per line: component_index <TAB> outcome_index <TAB>
// comma-separated coordinates, floats with 17 significant digits.
std::string samples_to_text(const std::vector<SampleRecord>& records);
std::vector<SampleRecord> parse_samples_text(const std::string& text);

}  // namespace povm
