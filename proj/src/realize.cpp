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

#include "povm/realize.hpp"

#include <cmath>

#include "povm/rng.hpp"

namespace povm {

DiscretizationResult discretize(const ContinuousPOVM& c) {
  c.require_valid();
  const int dim = c.dim();

  std::vector<Matrix> raw;
  raw.reserve(c.quadrature().size());
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& node : c.quadrature()) {
    raw.push_back(node.weight * c.density(node.point).matrix());
    sum += raw.back();
  }

  const HermitianOperator total(sum);
  EigenSystem es = eig_hermitian(total);
  const double top = es.eigenvalues.maxCoeff();
  int deficient = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    if (es.eigenvalues[k] <= tol::rank_cut * std::max(top, 0.0)) ++deficient;
  }
  if (deficient > 0) {
    throw CoverageError("discretize: quadrature does not cover the Hilbert space (" +
                            std::to_string(deficient) + " deficient directions)",
                        deficient);
  }

  Eigen::VectorXd inv = es.eigenvalues;
  for (Eigen::Index k = 0; k < inv.size(); ++k) inv[k] = 1.0 / std::sqrt(inv[k]);
  const Matrix correction = es.eigenvectors * inv.asDiagonal() * es.eigenvectors.adjoint();

  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  outcomes.reserve(raw.size());
  effects.reserve(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    outcomes.push_back(c.quadrature()[j].point);
    effects.emplace_back(correction * raw[j] * correction);
  }
  return DiscretizationResult{
      FinitePOVM(dim, std::move(outcomes), std::move(effects)),
      (sum - Matrix::Identity(dim, dim)).norm()};
}

RealizationResult realize_continuous(const ContinuousPOVM& c, int max_leaves) {
  DiscretizationResult discretized = discretize(c);
  const int nodes = static_cast<int>(c.quadrature().size());
  MixtureDecomposition mixture = decompose_extremal(discretized.povm, max_leaves);
  return RealizationResult{std::move(mixture), nodes, discretized.normalization_correction,
                           c.truncation_mass()};
}

std::vector<SampleRecord> sample_two_stage(const DensityState& rho,
                                           const MixtureDecomposition& mixture,
                                           long long count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample_two_stage: count must be >= 0");
  if (mixture.components.empty()) {
    throw std::invalid_argument("sample_two_stage: empty decomposition");
  }
  for (const auto& component : mixture.components) {
    if (component.dim() != rho.dim()) {
      throw std::invalid_argument("sample_two_stage: dimension mismatch");
    }
  }

  const std::vector<double> component_cdf = Rng::cumulative(mixture.weights);
  std::vector<std::vector<double>> outcome_cdf(mixture.components.size());
  for (std::size_t x = 0; x < mixture.components.size(); ++x) {
    outcome_cdf[x] = Rng::cumulative(born_probabilities(rho, mixture.components[x]));
  }

  Rng rng(seed);
  std::vector<SampleRecord> records;
  records.reserve(static_cast<std::size_t>(count));
  for (long long shot = 0; shot < count; ++shot) {
    const int x = rng.categorical(component_cdf);
    const int i = rng.categorical(outcome_cdf[x]);
    records.push_back({x, i, mixture.components[x].outcomes()[i]});
  }
  return records;
}

std::vector<SampleRecord> sample_two_stage(const DensityState& rho,
                                           const RealizationResult& realization,
                                           long long count, std::uint64_t seed) {
  return sample_two_stage(rho, realization.decomposition, count, seed);
}

DistributionComparison compare_distributions(const DensityState& rho, const FinitePOVM& p,
                                             const std::vector<SampleRecord>& samples) {
  if (samples.empty()) return {1.0, true};

  // pool reference outcomes that share a point
  std::vector<int> group(p.size());
  std::vector<int> canonical;
  for (int i = 0; i < p.size(); ++i) {
    group[i] = -1;
    for (int c = 0; c < static_cast<int>(canonical.size()); ++c) {
      if (point_distance(p.outcomes()[i], p.outcomes()[canonical[c]]) <= tol::point) {
        group[i] = c;
        break;
      }
    }
    if (group[i] < 0) {
      group[i] = static_cast<int>(canonical.size());
      canonical.push_back(i);
    }
  }

  const std::vector<double> born = born_probabilities(rho, p);
  std::vector<double> expected(canonical.size(), 0.0);
  for (int i = 0; i < p.size(); ++i) expected[group[i]] += born[i];

  std::vector<double> observed(canonical.size(), 0.0);
  for (const auto& record : samples) {
    int slot = -1;
    for (int c = 0; c < static_cast<int>(canonical.size()); ++c) {
      if (point_distance(record.outcome, p.outcomes()[canonical[c]]) <= tol::point) {
        slot = c;
        break;
      }
    }
    if (slot < 0) {
      throw std::invalid_argument(
          "compare_distributions: sample outcome point does not occur in the POVM");
    }
    observed[slot] += 1.0;
  }
  const double total = static_cast<double>(samples.size());
  double tv = 0.0;
  for (std::size_t c = 0; c < canonical.size(); ++c) {
    tv += std::abs(observed[c] / total - expected[c]);
  }
  return {0.5 * tv, false};
}

}  // namespace povm
