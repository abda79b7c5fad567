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

#include "povm/families.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "povm/rng.hpp"

namespace povm {

namespace {

constexpr double kPi = std::numbers::pi;

HermitianOperator phase_density(double theta) {
  Matrix m(2, 2);
  const Complex phase(std::cos(theta), std::sin(theta));
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = 0.5 * std::conj(phase);
  m(1, 0) = 0.5 * phase;
  return HermitianOperator(m);
}

HermitianOperator bloch_density(double x, double y, double z) {
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * Complex(x, -y);
  m(1, 0) = 0.5 * Complex(x, y);
  return HermitianOperator(m);
}

}  // namespace

ContinuousPOVM phase_family(int node_count) {
  if (node_count < 1) throw std::invalid_argument("phase_family: node count must be >= 1");
  std::vector<QuadratureNode> nodes;
  nodes.reserve(node_count);
  for (int j = 0; j < node_count; ++j) {
    const double theta = 2.0 * kPi * j / node_count;
    nodes.push_back({OutcomePoint{{theta}, {}}, 2.0 / node_count});
  }
  return ContinuousPOVM(
      2, OutcomeSpace::periodic(0.0, 2.0 * kPi), std::move(nodes),
      [](const OutcomePoint& p) { return phase_density(p.coordinates[0]); }, 0.0, "phase");
}

ContinuousPOVM sphere_family(int node_count, std::uint64_t seed) {
  if (node_count < 1) throw std::invalid_argument("sphere_family: node count must be >= 1");
  Rng rng(seed);
  std::vector<QuadratureNode> nodes;
  nodes.reserve(node_count);
  for (int j = 0; j < node_count; ++j) {
    double x, y, z, norm;
    do {
      x = rng.gaussian();
      y = rng.gaussian();
      z = rng.gaussian();
      norm = std::sqrt(x * x + y * y + z * z);
    } while (!(norm > 1e-12));
    nodes.push_back({OutcomePoint{{x / norm, y / norm, z / norm}, {}}, 2.0 / node_count});
  }
  return ContinuousPOVM(
      2, OutcomeSpace::box({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}), std::move(nodes),
      [](const OutcomePoint& p) {
        return bloch_density(p.coordinates[0], p.coordinates[1], p.coordinates[2]);
      },
      0.0, "sphere");
}

ContinuousPOVM gaussian_line_family(int node_count, double sigma, double half_width_sigmas) {
  if (node_count < 1) throw std::invalid_argument("gaussian_line_family: node count must be >= 1");
  if (!(sigma > 0)) throw std::invalid_argument("gaussian_line_family: sigma must be positive");
  if (!(half_width_sigmas > 0)) {
    throw std::invalid_argument("gaussian_line_family: half width must be positive");
  }
  const double limit = half_width_sigmas * sigma;
  const double mass_inside = std::erf(half_width_sigmas / std::sqrt(2.0));
  const double truncated = 2.0 * (1.0 - mass_inside);

  std::vector<QuadratureNode> nodes;
  nodes.reserve(node_count);
  for (const auto& [t, w] : gauss_legendre(node_count)) {
    const double x = limit * t;
    const double gaussian =
        std::exp(-0.5 * (x / sigma) * (x / sigma)) / (sigma * std::sqrt(2.0 * kPi));
    nodes.push_back({OutcomePoint{{x}, {}}, 2.0 * gaussian * limit * w});
  }
  return ContinuousPOVM(
      2, OutcomeSpace::box({-limit}, {limit}), std::move(nodes),
      [sigma](const OutcomePoint& p) {
        const double alpha = p.coordinates[0] / (4.0 * sigma);
        const double c = std::cos(alpha);
        const double s = std::sin(alpha);
        Matrix m(2, 2);
        m(0, 0) = c * c;
        m(1, 1) = s * s;
        m(0, 1) = c * s;
        m(1, 0) = c * s;
        return HermitianOperator(m);
      },
      truncated, "line");
}

ContinuousPOVM trivial_family(int dim) {
  if (dim < 1) throw std::invalid_argument("trivial_family: dim must be >= 1");
  std::vector<QuadratureNode> nodes{
      {OutcomePoint{{0.0}, {}}, static_cast<double>(dim)}};
  return ContinuousPOVM(
      dim, OutcomeSpace::box({0.0}, {0.0}), std::move(nodes),
      [dim](const OutcomePoint&) {
        return HermitianOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
      },
      0.0, "trivial");
}

ContinuousPOVM tabulated_family(int dim, std::vector<QuadratureNode> nodes,
                                std::vector<HermitianOperator> densities) {
  if (nodes.size() != densities.size() || nodes.empty()) {
    throw std::invalid_argument("tabulated_family: node/density count mismatch");
  }
  const std::size_t ambient = nodes.front().point.coordinates.size();
  std::vector<double> lower(ambient, std::numeric_limits<double>::infinity());
  std::vector<double> upper(ambient, -std::numeric_limits<double>::infinity());
  for (const auto& node : nodes) {
    if (node.point.coordinates.size() != ambient) {
      throw std::invalid_argument("tabulated_family: inconsistent point dimensions");
    }
    for (std::size_t k = 0; k < ambient; ++k) {
      lower[k] = std::min(lower[k], node.point.coordinates[k]);
      upper[k] = std::max(upper[k], node.point.coordinates[k]);
    }
  }
  auto points = std::make_shared<std::vector<OutcomePoint>>();
  points->reserve(nodes.size());
  for (const auto& node : nodes) points->push_back(node.point);
  auto table = std::make_shared<std::vector<HermitianOperator>>(std::move(densities));
  return ContinuousPOVM(
      dim, OutcomeSpace::box(std::move(lower), std::move(upper)), std::move(nodes),
      [points, table](const OutcomePoint& p) {
        for (std::size_t k = 0; k < points->size(); ++k) {
          if (point_distance(p, (*points)[k]) <= tol::point) return (*table)[k];
        }
        throw std::invalid_argument("tabulated density: point is not a quadrature node");
      },
      0.0, "tabulated");
}

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  std::vector<std::pair<double, double>> rule(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Chebyshev-based initial guess, then Newton on P_n
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[k] = {-x, w};
    rule[n - 1 - k] = {x, w};
  }
  if (n % 2 == 1) rule[n / 2].first = 0.0;
  return rule;
}

}  // namespace povm
