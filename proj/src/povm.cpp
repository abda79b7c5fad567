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

#include "povm/povm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace povm {

double point_distance(const OutcomePoint& a, const OutcomePoint& b) {
  if (a.coordinates.size() != b.coordinates.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double dist = 0.0;
  for (std::size_t k = 0; k < a.coordinates.size(); ++k) {
    dist = std::max(dist, std::abs(a.coordinates[k] - b.coordinates[k]));
  }
  return dist;
}

OutcomeSpace OutcomeSpace::box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("OutcomeSpace::box: bounds must be nonempty and equal length");
  }
  OutcomeSpace s;
  s.kind = Kind::Box;
  s.ambient_dim = static_cast<int>(lower.size());
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

OutcomeSpace OutcomeSpace::periodic(double start, double period) {
  if (!(period > 0)) throw std::invalid_argument("OutcomeSpace::periodic: period must be positive");
  OutcomeSpace s;
  s.kind = Kind::Periodic;
  s.ambient_dim = 1;
  s.period_start = start;
  s.period = period;
  return s;
}

OutcomeSpace OutcomeSpace::point_set(std::vector<OutcomePoint> pts) {
  OutcomeSpace s;
  s.kind = Kind::Points;
  s.ambient_dim = pts.empty() ? 1 : static_cast<int>(pts.front().coordinates.size());
  s.points = std::move(pts);
  return s;
}

bool OutcomeSpace::contains(const OutcomePoint& p, double tau) const {
  if (static_cast<int>(p.coordinates.size()) != ambient_dim) return false;
  switch (kind) {
    case Kind::Periodic:
      // every finite angle wraps into the interval
      return std::isfinite(p.coordinates[0]);
    case Kind::Box:
      for (int k = 0; k < ambient_dim; ++k) {
        if (p.coordinates[k] < lower[k] - tau || p.coordinates[k] > upper[k] + tau) return false;
      }
      return true;
    case Kind::Points:
      for (const auto& q : points) {
        if (matches(p, q, tau)) return true;
      }
      return false;
  }
  return false;
}

bool OutcomeSpace::matches(const OutcomePoint& a, const OutcomePoint& b, double tau) const {
  if (a.coordinates.size() != b.coordinates.size()) return false;
  if (kind == Kind::Periodic) {
    const double delta = std::remainder(a.coordinates[0] - b.coordinates[0], period);
    return std::abs(delta) <= tau;
  }
  return point_distance(a, b) <= tau;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.message << " (residual " << v.residual << ")\n";
  }
  return os.str();
}

FinitePOVM::FinitePOVM(int dim, std::vector<OutcomePoint> outcomes,
                       std::vector<HermitianOperator> effects)
    : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("FinitePOVM: dim must be >= 1");
  if (outcomes.size() != effects.size()) {
    throw std::invalid_argument("FinitePOVM: outcome/effect count mismatch");
  }
  if (effects.empty()) throw std::invalid_argument("FinitePOVM: at least one effect required");
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].dim() != dim) {
      throw std::invalid_argument("FinitePOVM: effect dimension mismatch");
    }
  }
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].trace() < tol::drop) continue;  // pruned, mass not redistributed
    outcomes_.push_back(std::move(outcomes[i]));
    effects_.push_back(std::move(effects[i]));
  }
  if (effects_.empty()) {
    throw std::invalid_argument("FinitePOVM: all effects below the trace cutoff");
  }
}

ValidationReport FinitePOVM::validate() const {
  ValidationReport report;
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < size(); ++i) {
    sum += effects_[i].matrix();
    EigenSystem es = eig_hermitian(effects_[i]);
    const double lo = es.eigenvalues.minCoeff();
    const double sup = es.eigenvalues.cwiseAbs().maxCoeff();
    if (lo < -tol::psd * std::max(1.0, sup)) {
      report.violations.push_back(
          {"effect " + std::to_string(i) + " is not positive semidefinite", -lo});
    }
  }
  const double norm_residual = (sum - Matrix::Identity(dim_, dim_)).norm();
  if (norm_residual > tol::povm_norm(dim_)) {
    report.violations.push_back({"effects do not sum to the identity (normalization)",
                                 norm_residual});
  }
  return report;
}

void FinitePOVM::require_valid() const {
  ValidationReport report = validate();
  if (!report.ok()) {
    throw std::domain_error("invalid POVM:\n" + report.to_string());
  }
}

ValidationReport validate_finite(const FinitePOVM& p) { return p.validate(); }

DensityState::DensityState(const HermitianOperator& matrix) : matrix_(matrix) {
  if (std::abs(matrix.trace() - 1.0) > 1e-12) {
    throw std::invalid_argument("DensityState: trace must equal 1 within 1e-12");
  }
  if (!psd_check(matrix)) {
    throw std::invalid_argument("DensityState: matrix must be positive semidefinite");
  }
}

ContinuousPOVM::ContinuousPOVM(int dim, OutcomeSpace space, std::vector<QuadratureNode> nodes,
                               DensityFn density, double truncation_mass,
                               std::string family_name)
    : dim_(dim),
      space_(std::move(space)),
      nodes_(std::move(nodes)),
      density_(std::move(density)),
      truncation_mass_(truncation_mass),
      family_name_(std::move(family_name)) {
  if (dim < 1) throw std::invalid_argument("ContinuousPOVM: dim must be >= 1");
  if (nodes_.empty()) throw std::invalid_argument("ContinuousPOVM: quadrature must be nonempty");
  if (!density_) throw std::invalid_argument("ContinuousPOVM: density evaluator required");
  for (const auto& node : nodes_) {
    if (!(node.weight > 0)) {
      throw std::invalid_argument("ContinuousPOVM: quadrature weights must be positive");
    }
    if (static_cast<int>(node.point.coordinates.size()) != space_.ambient_dim) {
      throw std::invalid_argument("ContinuousPOVM: node dimension mismatch");
    }
  }
  if (truncation_mass_ < 0 || truncation_mass_ >= dim) {
    throw std::invalid_argument("ContinuousPOVM: truncation mass must lie in [0, dim)");
  }
}

ValidationReport ContinuousPOVM::validate() const {
  ValidationReport report;
  double mass = 0.0;
  for (const auto& node : nodes_) mass += node.weight;
  if (std::abs(mass - dim_) > tol::measure_mass(dim_)) {
    report.violations.push_back(
        {"quadrature mass differs from dim", std::abs(mass - dim_)});
  }
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    HermitianOperator m = density_(nodes_[j].point);
    if (m.dim() != dim_) {
      report.violations.push_back({"density at node " + std::to_string(j) +
                                   " has wrong dimension",
                                   std::abs(static_cast<double>(m.dim() - dim_))});
      continue;
    }
    const double trace_residual = std::abs(m.trace() - 1.0);
    if (trace_residual > tol::density) {
      report.violations.push_back(
          {"density at node " + std::to_string(j) + " is not unit trace", trace_residual});
    }
    if (!psd_check(m, tol::density)) {
      EigenSystem es = eig_hermitian(m);
      report.violations.push_back({"density at node " + std::to_string(j) +
                                   " is not positive semidefinite",
                                   -es.eigenvalues.minCoeff()});
    }
  }
  return report;
}

void ContinuousPOVM::require_valid() const {
  ValidationReport report = validate();
  if (!report.ok()) {
    throw std::domain_error("invalid continuous POVM:\n" + report.to_string());
  }
}

int MixtureDecomposition::dim() const {
  return components.empty() ? 0 : components.front().dim();
}

double MixtureDecomposition::weight_sum() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

std::vector<double> born_probabilities(const DensityState& rho, const FinitePOVM& p) {
  if (rho.dim() != p.dim()) {
    throw std::invalid_argument("born_probabilities: dimension mismatch");
  }
  std::vector<double> probs(p.size());
  for (int i = 0; i < p.size(); ++i) {
    const double raw = (rho.matrix().matrix() * p.effects()[i].matrix()).trace().real();
    probs[i] = std::clamp(raw, 0.0, 1.0);
  }
  return probs;
}

double expectation(const DensityState& rho, const OutcomeFunction& f,
                   const ContinuousPOVM& p) {
  if (rho.dim() != p.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  double acc = 0.0;
  for (const auto& node : p.quadrature()) {
    const double value = f(node.point);
    if (!std::isfinite(value)) {
      throw std::invalid_argument("expectation: test function is not finite at a node");
    }
    const double prob = (rho.matrix().matrix() * p.density(node.point).matrix()).trace().real();
    acc += node.weight * value * prob;
  }
  return acc;
}

double expectation(const DensityState& rho, const OutcomeFunction& f,
                   const FinitePOVM& p) {
  if (rho.dim() != p.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double value = f(p.outcomes()[i]);
    if (!std::isfinite(value)) {
      throw std::invalid_argument("expectation: test function is not finite at an outcome");
    }
    acc += value * (rho.matrix().matrix() * p.effects()[i].matrix()).trace().real();
  }
  return acc;
}

namespace {

int match_reference(const OutcomePoint& p, const std::vector<OutcomePoint>& reference) {
  for (std::size_t k = 0; k < reference.size(); ++k) {
    if (point_distance(p, reference[k]) <= tol::point) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

FinitePOVM mixture_reconstruct(const MixtureDecomposition& d,
                               const std::vector<OutcomePoint>& reference_outcomes) {
  if (d.components.empty()) {
    throw std::invalid_argument("mixture_reconstruct: empty decomposition");
  }
  if (d.weights.size() != d.components.size()) {
    throw std::invalid_argument("mixture_reconstruct: weight/component count mismatch");
  }
  const int dim = d.dim();
  std::vector<Matrix> acc(reference_outcomes.size(), Matrix::Zero(dim, dim));
  for (std::size_t x = 0; x < d.components.size(); ++x) {
    const FinitePOVM& comp = d.components[x];
    if (comp.dim() != dim) {
      throw std::invalid_argument("mixture_reconstruct: component dimension mismatch");
    }
    for (int i = 0; i < comp.size(); ++i) {
      const int k = match_reference(comp.outcomes()[i], reference_outcomes);
      if (k < 0) {
        throw std::invalid_argument(
            "mixture_reconstruct: component outcome point missing from reference list");
      }
      acc[k] += d.weights[x] * comp.effects()[i].matrix();
    }
  }
  std::vector<HermitianOperator> effects;
  effects.reserve(acc.size());
  for (const auto& m : acc) effects.emplace_back(m);
  return FinitePOVM(dim, reference_outcomes, std::move(effects));
}

double reconstruction_residual(const MixtureDecomposition& d, const FinitePOVM& reference) {
  FinitePOVM rebuilt = mixture_reconstruct(d, reference.outcomes());
  double worst = 0.0;
  for (int i = 0; i < reference.size(); ++i) {
    const int k = match_reference(reference.outcomes()[i], rebuilt.outcomes());
    const Matrix rebuilt_effect =
        k < 0 ? Matrix::Zero(reference.dim(), reference.dim()) : rebuilt.effects()[k].matrix();
    worst = std::max(worst, (rebuilt_effect - reference.effects()[i].matrix()).norm());
  }
  return worst;
}

}  // namespace povm
