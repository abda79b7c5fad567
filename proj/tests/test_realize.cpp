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

#include <numbers>

#include "doctest.h"
#include "povm/families.hpp"
#include "povm/io.hpp"
#include "povm/realize.hpp"
#include "test_support.hpp"

using namespace povm;

namespace {

constexpr double kPi = std::numbers::pi;

DensityState plus_state() {
  Eigen::Vector2cd v;
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return DensityState(HermitianOperator(v * v.adjoint()));
}

DensityState zero_state() {
  Eigen::Vector2cd v;
  v << 1.0, 0.0;
  return DensityState(HermitianOperator(v * v.adjoint()));
}

double cos_theta(const OutcomePoint& p) { return std::cos(p.coordinates[0]); }

}  // namespace

TEST_CASE("discretize") {
  SUBCASE("equally spaced phase nodes need no correction") {
    ContinuousPOVM family = phase_family(16);
    DiscretizationResult result = discretize(family);
    CHECK(result.normalization_correction <= 1e-12);
    REQUIRE(result.povm.size() == 16);
    // direct summation: effects stay weight * density
    for (int j = 0; j < result.povm.size(); ++j) {
      const auto& node = family.quadrature()[j];
      HermitianOperator expected(node.weight * family.density(node.point).matrix());
      CHECK(frobenius_distance(result.povm.effects()[j], expected) <= 1e-12);
    }
    CHECK(result.povm.validate().ok());
  }
  SUBCASE("single-node trivial family becomes the identity POVM") {
    DiscretizationResult result = discretize(trivial_family(3));
    REQUIRE(result.povm.size() == 1);
    CHECK(frobenius_distance(result.povm.effects()[0], HermitianOperator::identity(3)) <= 1e-12);
    CHECK(result.normalization_correction <= 1e-12);
  }
  SUBCASE("random sphere nodes renormalize with a reported correction") {
    DiscretizationResult result = discretize(sphere_family(100, 7));
    CHECK(result.normalization_correction > 0.0);
    CHECK(result.povm.validate().ok());
  }
  SUBCASE("quadrature missing a direction raises a coverage error") {
    std::vector<QuadratureNode> nodes{{{{0.0}, {}}, 1.0}, {{{1.0}, {}}, 1.0}};
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    std::vector<HermitianOperator> densities{HermitianOperator(m), HermitianOperator(m)};
    ContinuousPOVM family = tabulated_family(2, std::move(nodes), std::move(densities));
    try {
      discretize(family);
      FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
      CHECK(e.deficient_dimension == 1);
    }
  }
}

TEST_CASE("realize_continuous") {
  SUBCASE("phase family with 16 nodes") {
    RealizationResult result = realize_continuous(phase_family(16));
    CHECK(result.discretization_nodes == 16);
    CHECK(result.normalization_correction <= 1e-12);
    CHECK(result.truncation_mass == 0.0);
    CHECK(result.decomposition.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
    const auto& mix = result.decomposition;
    for (std::size_t x = 0; x < mix.components.size(); ++x) {
      CHECK(mix.components[x].validate().ok());
      CHECK(mix.certificates[x].extremal);
      CHECK(mix.components[x].size() <= 4);
      // every outcome point is one of the quadrature nodes
      for (const auto& point : mix.components[x].outcomes()) {
        bool at_node = false;
        for (int j = 0; j < 16; ++j) {
          if (std::abs(point.coordinates[0] - 2.0 * kPi * j / 16.0) <= tol::point) {
            at_node = true;
          }
        }
        CHECK(at_node);
      }
    }
  }
  SUBCASE("one-node trivial family gives a single identity component") {
    RealizationResult result = realize_continuous(trivial_family(2));
    REQUIRE(result.decomposition.components.size() == 1);
    CHECK(result.decomposition.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frobenius_distance(result.decomposition.components[0].effects()[0],
                             HermitianOperator::identity(2)) <= 1e-12);
  }
  SUBCASE("truncated line family stays inside the window") {
    ContinuousPOVM family = gaussian_line_family(64, 1.0, 6.0);
    RealizationResult result = realize_continuous(family);
    CHECK(result.truncation_mass < 1e-6 * 2.0);
    CHECK(result.truncation_mass > 0.0);
    for (const auto& component : result.decomposition.components) {
      for (const auto& point : component.outcomes()) {
        CHECK(std::abs(point.coordinates[0]) <= 6.0);
      }
    }
    CHECK(reconstruction_residual(result.decomposition, discretize(family).povm) <=
          tol::reconstruction);
  }
}

TEST_CASE("realization equivalence for every shipped family") {
  // both sides of the mixture identity under a test function: expectation
  // over the discretized POVM versus the decomposition double sum
  struct Case {
    ContinuousPOVM family;
    OutcomeFunction f;
    double f_sup;
  };
  std::vector<Case> cases;
  cases.push_back({phase_family(16), cos_theta, 1.0});
  cases.push_back({sphere_family(100, 7),
                   [](const OutcomePoint& p) { return p.coordinates[2]; }, 1.0});
  cases.push_back({gaussian_line_family(64, 1.0),
                   [](const OutcomePoint& p) { return p.coordinates[0]; }, 6.0});
  cases.push_back({trivial_family(2), [](const OutcomePoint&) { return 1.0; }, 1.0});

  Rng rng(41);
  for (const auto& test_case : cases) {
    DiscretizationResult discretized = discretize(test_case.family);
    RealizationResult realized = realize_continuous(test_case.family);
    for (int trial = 0; trial < 20; ++trial) {
      DensityState rho = povm::testing::random_state(rng, 2);
      const double direct = expectation(rho, test_case.f, discretized.povm);
      double double_sum = 0.0;
      for (std::size_t x = 0; x < realized.decomposition.components.size(); ++x) {
        double_sum += realized.decomposition.weights[x] *
                      expectation(rho, test_case.f, realized.decomposition.components[x]);
      }
      CHECK(std::abs(direct - double_sum) <= 1e-8 * (1.0 + test_case.f_sup));
    }
  }
}

TEST_CASE("quadrature refinement is converged for the phase family") {
  DensityState rho = plus_state();
  const double coarse = expectation(rho, cos_theta, phase_family(16));
  const double fine = expectation(rho, cos_theta, phase_family(32));
  CHECK(std::abs(coarse - fine) <= 1e-10);
}

TEST_CASE("two-stage sampling") {
  SUBCASE("count zero gives an empty list") {
    RealizationResult r = realize_continuous(trivial_family(2));
    CHECK(sample_two_stage(zero_state(), r, 0, 1).empty());
  }
  SUBCASE("negative count is rejected") {
    RealizationResult r = realize_continuous(trivial_family(2));
    CHECK_THROWS_AS(sample_two_stage(zero_state(), r, -1, 1), std::invalid_argument);
  }
  SUBCASE("projective certificate on |0> hits one outcome") {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    FinitePOVM p(2, {{{0.0}, {}}, {{1.0}, {}}},
                 {HermitianOperator(p0), HermitianOperator(p1)});
    MixtureDecomposition mix = decompose_extremal(p);
    std::vector<SampleRecord> records = sample_two_stage(zero_state(), mix, 300, 5);
    REQUIRE(records.size() == 300);
    for (const auto& record : records) {
      CHECK(record.component_index == 0);
      CHECK(record.outcome_index == 0);
    }
  }
  SUBCASE("fixed seed reproduces the byte stream, new seed changes it") {
    RealizationResult r = realize_continuous(phase_family(16));
    DensityState rho = plus_state();
    std::vector<SampleRecord> a = sample_two_stage(rho, r, 2000, 99);
    std::vector<SampleRecord> b = sample_two_stage(rho, r, 2000, 99);
    std::vector<SampleRecord> c = sample_two_stage(rho, r, 2000, 100);
    CHECK(samples_to_text(a) == samples_to_text(b));
    CHECK(samples_to_text(a) != samples_to_text(c));
  }
  SUBCASE("empirical mean of cos(theta) approaches 1/2 for |+>") {
    RealizationResult r = realize_continuous(phase_family(16));
    const long long shots = 100000;
    std::vector<SampleRecord> records = sample_two_stage(plus_state(), r, shots, 7);
    double mean = 0.0, second = 0.0;
    for (const auto& record : records) {
      const double value = std::cos(record.outcome.coordinates[0]);
      mean += value;
      second += value * value;
    }
    mean /= static_cast<double>(shots);
    second /= static_cast<double>(shots);
    const double stderr_est = std::sqrt((second - mean * mean) / static_cast<double>(shots));
    CHECK(std::abs(mean - 0.5) <= 4.0 * stderr_est);
  }
}

TEST_CASE("compare_distributions") {
  RealizationResult r = realize_continuous(phase_family(16));
  DiscretizationResult discretized = discretize(phase_family(16));
  DensityState rho = plus_state();

  SUBCASE("empty samples report distance 1 with the warning flag") {
    DistributionComparison result = compare_distributions(rho, discretized.povm, {});
    CHECK(result.total_variation == 1.0);
    CHECK(result.empty_samples);
  }
  SUBCASE("two-stage samples match the discretized Born distribution") {
    std::vector<SampleRecord> records = sample_two_stage(rho, r, 100000, 13);
    DistributionComparison result = compare_distributions(rho, discretized.povm, records);
    CHECK_FALSE(result.empty_samples);
    CHECK(result.total_variation <= 0.02);
  }
  SUBCASE("direct multinomial samples stay under the concentration bound") {
    // oracle sampler: inverse-CDF draws straight from the Born probabilities
    const std::vector<double> born = born_probabilities(rho, discretized.povm);
    const std::vector<double> cdf = Rng::cumulative(born);
    const double bound = 3.0 * std::sqrt(discretized.povm.size() / 20000.0);
    int passes = 0;
    for (int rep = 0; rep < 10; ++rep) {
      Rng rng(500 + rep);
      std::vector<SampleRecord> records;
      for (int shot = 0; shot < 20000; ++shot) {
        const int i = rng.categorical(cdf);
        records.push_back({0, i, discretized.povm.outcomes()[i]});
      }
      DistributionComparison result = compare_distributions(rho, discretized.povm, records);
      if (result.total_variation <= bound) ++passes;
    }
    CHECK(passes >= 9);
  }
  SUBCASE("unmappable outcome point is an error") {
    std::vector<SampleRecord> records{{0, 0, {{123.0}, {}}}};
    CHECK_THROWS_AS(compare_distributions(rho, discretized.povm, records),
                    std::invalid_argument);
  }
}
