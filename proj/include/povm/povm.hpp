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

// Domain types for quantum measurements: finite POVMs (outcome points plus
// effects summing to the identity), continuous-outcome POVMs represented by
// a quadrature against their scalar measure together with a unit-trace
// density evaluator, density states, and convex mixtures of finite POVMs.
//
// Construction enforces only structural invariants (shapes, Hermiticity,
// pruning of negligible effects) so that files describing *broken*
// measurements can still be represented and reported on; semantic
// invariants (positivity, normalization, measure mass) are checked by the
// report-returning validate operations, and operations whose preconditions
// need a valid POVM call require_valid().

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "povm/matops.hpp"

namespace povm {

struct OutcomePoint {
  std::vector<double> coordinates;
  std::string label;  // optional, purely descriptive
};

// Max-norm distance between coordinate vectors; infinity on dimension
// mismatch so mismatched points never match.
double point_distance(const OutcomePoint& a, const OutcomePoint& b);

// Descriptor of the outcome space an experiment draws from. Points is the
// degenerate case used for decompositions of finite POVMs (membership =
// coincidence with one of the listed points), Box a compact axis-aligned
// window, Periodic a 1-D circle of given period.
struct OutcomeSpace {
  enum class Kind { Points, Box, Periodic };

  Kind kind = Kind::Points;
  int ambient_dim = 1;
  std::vector<double> lower, upper;          // Box
  double period_start = 0.0, period = 0.0;   // Periodic
  std::vector<OutcomePoint> points;          // Points

  static OutcomeSpace box(std::vector<double> lower, std::vector<double> upper);
  static OutcomeSpace periodic(double start, double period);
  static OutcomeSpace point_set(std::vector<OutcomePoint> pts);

  bool contains(const OutcomePoint& p, double tau = tol::point) const;
  // point matching; periodic coordinates are compared modulo the period
  bool matches(const OutcomePoint& a, const OutcomePoint& b, double tau = tol::point) const;
};

struct Violation {
  std::string message;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Finite-outcome POVM {omega_i, P_i}. Effects with trace below tol::drop
// are pruned at construction (together with their outcome points) so the
// outcome list stays canonical; their mass is not redistributed.
class FinitePOVM {
 public:
  FinitePOVM(int dim, std::vector<OutcomePoint> outcomes,
             std::vector<HermitianOperator> effects);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(effects_.size()); }
  const std::vector<OutcomePoint>& outcomes() const { return outcomes_; }
  const std::vector<HermitianOperator>& effects() const { return effects_; }

  ValidationReport validate() const;
  void require_valid() const;  // throws std::domain_error with the report

 private:
  int dim_;
  std::vector<OutcomePoint> outcomes_;
  std::vector<HermitianOperator> effects_;
};

ValidationReport validate_finite(const FinitePOVM& p);

// Unit-trace PSD state; invariants enforced at construction.
class DensityState {
 public:
  explicit DensityState(const HermitianOperator& matrix);
  int dim() const { return matrix_.dim(); }
  const HermitianOperator& matrix() const { return matrix_; }

 private:
  HermitianOperator matrix_;
};

struct QuadratureNode {
  OutcomePoint point;
  double weight = 0.0;  // positive
};

// Continuous-outcome POVM: the scalar measure mu(dw) (total mass d) is
// carried only through a finite quadrature, and the operator part through a
// pure density evaluator with Tr[M(w)] = 1 at every node. The evaluator
// must return the same matrix for the same node.
class ContinuousPOVM {
 public:
  using DensityFn = std::function<HermitianOperator(const OutcomePoint&)>;

  ContinuousPOVM(int dim, OutcomeSpace space, std::vector<QuadratureNode> nodes,
                 DensityFn density, double truncation_mass = 0.0,
                 std::string family_name = {});

  int dim() const { return dim_; }
  const OutcomeSpace& outcome_space() const { return space_; }
  const std::vector<QuadratureNode>& quadrature() const { return nodes_; }
  HermitianOperator density(const OutcomePoint& p) const { return density_(p); }
  double truncation_mass() const { return truncation_mass_; }
  const std::string& family_name() const { return family_name_; }

  ValidationReport validate() const;
  void require_valid() const;

 private:
  int dim_;
  OutcomeSpace space_;
  std::vector<QuadratureNode> nodes_;
  DensityFn density_;
  double truncation_mass_;
  std::string family_name_;
};

struct ComponentCertificate {
  bool extremal = false;
  int kernel_dimension = 0;
  bool max_outcomes_check = false;  // outcome count <= dim^2
  double clipping_residual = 0.0;   // accumulated Frobenius size of eigenvalue clips
};

// Convex mixture sum_x weights[x] * components[x] with one certificate per
// component. Certified-extremal components satisfy size() <= dim^2.
struct MixtureDecomposition {
  std::vector<double> weights;
  std::vector<FinitePOVM> components;
  std::vector<ComponentCertificate> certificates;

  int dim() const;
  double weight_sum() const;
};

// Born rule p_i = Tr[rho P_i], clamped to [0, 1].
std::vector<double> born_probabilities(const DensityState& rho, const FinitePOVM& p);

using OutcomeFunction = std::function<double(const OutcomePoint&)>;

// Quadrature form of the expectation of f under the measurement statistics
// of rho: sum_j weight_j f(node_j) Tr[rho M(node_j)].
double expectation(const DensityState& rho, const OutcomeFunction& f,
                   const ContinuousPOVM& p);

// Finite counterpart sum_i f(omega_i) Tr[rho P_i].
double expectation(const DensityState& rho, const OutcomeFunction& f,
                   const FinitePOVM& p);

// Evaluates the mixture on point events: effect at reference point omega is
// sum_x weight_x * (component-x effect at omega, or 0). Every component
// outcome point must occur in the reference list (within tol::point).
FinitePOVM mixture_reconstruct(const MixtureDecomposition& d,
                               const std::vector<OutcomePoint>& reference_outcomes);

// Largest per-effect Frobenius residual between the reconstructed mixture
// and a reference POVM, matching effects by outcome point.
double reconstruction_residual(const MixtureDecomposition& d, const FinitePOVM& reference);

}  // namespace povm
