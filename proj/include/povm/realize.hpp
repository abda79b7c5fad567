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

// End-to-end realization of continuous-outcome measurements: discretize the
// quadrature into a finite POVM with exact normalization, decompose it into
// extremal components, and simulate the two-stage protocol (draw a classical
// component index, then measure that finite POVM).

#pragma once

#include <cstdint>
#include <vector>

#include "povm/extremal.hpp"
#include "povm/povm.hpp"

namespace povm {

// Raised when the quadrature leaves part of the Hilbert space unreached
// (the raw effect sum is singular, so no renormalization exists).
class CoverageError : public std::runtime_error {
 public:
  CoverageError(std::string message, int deficient_dim)
      : std::runtime_error(std::move(message)), deficient_dimension(deficient_dim) {}

  int deficient_dimension;
};

struct DiscretizationResult {
  FinitePOVM povm;
  double normalization_correction;  // |N - 1|_F for the raw effect sum N
};

// Raw effects Q_j = weight_j * density(node_j) renormalized symmetrically
// to N^{-1/2} Q_j N^{-1/2}, which preserves positivity and Hermiticity and
// makes the output sum to the identity exactly.
DiscretizationResult discretize(const ContinuousPOVM& c);

struct RealizationResult {
  MixtureDecomposition decomposition;
  int discretization_nodes = 0;
  double normalization_correction = 0.0;
  double truncation_mass = 0.0;  // measure mass outside the truncation window
};

RealizationResult realize_continuous(const ContinuousPOVM& c, int max_leaves = 0);

struct SampleRecord {
  int component_index = 0;
  int outcome_index = 0;
  OutcomePoint outcome;
};

// Draws the component index from the mixture weights, then the outcome from
// the Born probabilities of that component, using the pinned generator (see
// rng.hpp). Identical inputs and seed give identical output sequences.
std::vector<SampleRecord> sample_two_stage(const DensityState& rho,
                                           const MixtureDecomposition& mixture,
                                           long long count, std::uint64_t seed);
std::vector<SampleRecord> sample_two_stage(const DensityState& rho,
                                           const RealizationResult& realization,
                                           long long count, std::uint64_t seed);

struct DistributionComparison {
  double total_variation = 0.0;
  bool empty_samples = false;  // empty input is reported as distance 1 with this flag
};

// Total-variation distance between the empirical outcome-point frequencies
// of the samples (pooled across components) and the Born probabilities of
// the reference POVM.
DistributionComparison compare_distributions(const DensityState& rho, const FinitePOVM& p,
                                             const std::vector<SampleRecord>& samples);

}  // namespace povm
