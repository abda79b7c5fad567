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

// Shipped continuous measurement families: one periodic 1-D family, one
// compact 2-D family on the sphere, one truncated family on the line, the
// trivial single-node family and tabulated user data.

#pragma once

#include <cstdint>
#include <vector>

#include "povm/povm.hpp"

namespace povm {

// Qubit phase measurement: density M(theta) = |e(theta)><e(theta)| with
// |e(theta)> = (|0> + e^{i theta} |1>)/sqrt(2), measure d(theta)/pi on
// [0, 2 pi), discretized on equally spaced nodes (each weight 2/node_count).
ContinuousPOVM phase_family(int node_count);

// Qubit spin-coherent measurement M(n) = |n><n| over the unit sphere with
// uniform measure of total mass 2, discretized on seeded uniform random
// unit vectors (each weight 2/node_count).
ContinuousPOVM sphere_family(int node_count, std::uint64_t seed);

// Qubit family on the real line with Gaussian N(0, sigma^2) base measure of
// mass 2, truncated to [-L, L] with L = half_width_sigmas * sigma and
// discretized by Gauss-Legendre quadrature. The discarded measure mass is
// recorded as the truncation mass. Density is the rank-one projector onto
// (cos(x / (4 sigma)), sin(x / (4 sigma))).
ContinuousPOVM gaussian_line_family(int node_count, double sigma,
                                    double half_width_sigmas = 6.0);

// Single node of weight dim with density identity/dim.
ContinuousPOVM trivial_family(int dim);

// User-supplied nodes with per-node density matrices; the outcome space is
// the bounding box of the node points.
ContinuousPOVM tabulated_family(int dim, std::vector<QuadratureNode> nodes,
                                std::vector<HermitianOperator> densities);

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
std::vector<std::pair<double, double>> gauss_legendre(int n);

}  // namespace povm
