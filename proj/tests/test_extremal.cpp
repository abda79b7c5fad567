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
#include "test_support.hpp"

using namespace povm;
using namespace povm::testing;

namespace {

constexpr double kPi = std::numbers::pi;

HermitianOperator basis_projector(int dim, int k) {
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return HermitianOperator(m);
}

FinitePOVM projective_basis(int dim) {
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < dim; ++k) {
    outcomes.push_back({{static_cast<double>(k)}, {}});
    effects.push_back(basis_projector(dim, k));
  }
  return FinitePOVM(dim, std::move(outcomes), std::move(effects));
}

FinitePOVM smeared_two_outcome() {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 0.75;
  a(1, 1) = 0.25;
  b(0, 0) = 0.25;
  b(1, 1) = 0.75;
  return FinitePOVM(2, {{{0.0}, {}}, {{1.0}, {}}},
                    {HermitianOperator(a), HermitianOperator(b)});
}

FinitePOVM qubit_sic() {
  const double s = 1.0 / std::sqrt(3.0);
  const double bloch[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < 4; ++k) {
    outcomes.push_back({{static_cast<double>(k)}, {}});
    Matrix m(2, 2);
    m(0, 0) = 0.25 * (1.0 + bloch[k][2]);
    m(1, 1) = 0.25 * (1.0 - bloch[k][2]);
    m(0, 1) = 0.25 * Complex(bloch[k][0], -bloch[k][1]);
    m(1, 0) = 0.25 * Complex(bloch[k][0], bloch[k][1]);
    effects.emplace_back(m);
  }
  return FinitePOVM(2, std::move(outcomes), std::move(effects));
}

FinitePOVM trine() {
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * kPi * k / 3.0;
    Eigen::Vector2cd psi;
    psi << std::cos(angle), std::sin(angle);
    outcomes.push_back({{angle}, {}});
    effects.emplace_back((2.0 / 3.0) * psi * psi.adjoint());
  }
  return FinitePOVM(2, std::move(outcomes), std::move(effects));
}

FinitePOVM depolarized_trine(double eps) {
  FinitePOVM base = trine();
  std::vector<HermitianOperator> effects;
  for (const auto& effect : base.effects()) {
    effects.emplace_back((1.0 - eps) * effect.matrix() + (eps / 3.0) * Matrix::Identity(2, 2));
  }
  return FinitePOVM(2, base.outcomes(), std::move(effects));
}

// the canonical witness for the smeared two-outcome POVM, normalized to
// total Frobenius norm 1
PerturbationDirection diagonal_witness() {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.5;
  return PerturbationDirection{{HermitianOperator(d), HermitianOperator(-d)}};
}

bool is_rank_one_pair(const FinitePOVM& p) {
  if (p.size() != 2) return false;
  for (const auto& effect : p.effects()) {
    if (support_basis(effect).rank != 1) return false;
  }
  return true;
}

int total_rank(const FinitePOVM& p) {
  int acc = 0;
  for (const auto& effect : p.effects()) acc += support_basis(effect).rank;
  return acc;
}

MixtureDecomposition decompose_or_fail(const FinitePOVM& p, int max_leaves = 0) {
  return decompose_extremal(p, max_leaves);
}

}  // namespace

TEST_CASE("extremality of reference measurements") {
  SUBCASE("single identity outcome") {
    FinitePOVM p(2, {{{0.0}, {}}}, {HermitianOperator::identity(2)});
    ExtremalityReport report = extremality_check(p);
    CHECK(report.extremal);
    CHECK(report.kernel_dimension == 0);
    CHECK_FALSE(report.witness.has_value());
  }
  SUBCASE("projective basis, kernel oracle by Gaussian elimination") {
    FinitePOVM p = projective_basis(2);
    CHECK(oracle_kernel_dimension(p) == 0);
    ExtremalityReport report = extremality_check(p);
    CHECK(report.extremal);
    CHECK(report.kernel_dimension == 0);
  }
  SUBCASE("smeared two-outcome POVM is not extremal") {
    FinitePOVM p = smeared_two_outcome();
    // full-rank effects: 8 free parameters, 4 constraints
    CHECK(oracle_kernel_dimension(p) == 4);
    ExtremalityReport report = extremality_check(p);
    CHECK_FALSE(report.extremal);
    CHECK(report.kernel_dimension == 4);
    REQUIRE(report.witness.has_value());

    const PerturbationDirection& w = *report.witness;
    Matrix sum = Matrix::Zero(2, 2);
    double norm_sq = 0.0;
    for (const auto& op : w.operators) {
      sum += op.matrix();
      norm_sq += op.frobenius_norm() * op.frobenius_norm();
    }
    CHECK(sum.norm() <= 1e-10 * std::sqrt(2.0));
    CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));
    // two-sided feasibility of the witness for small steps
    for (double sign : {1.0, -1.0}) {
      for (int i = 0; i < p.size(); ++i) {
        CHECK(psd_check(HermitianOperator(p.effects()[i].matrix() +
                                          sign * 1e-3 * w.operators[i].matrix())));
      }
    }
  }
  SUBCASE("qubit SIC is extremal") {
    FinitePOVM p = qubit_sic();
    CHECK(oracle_kernel_dimension(p) == 0);
    ExtremalityReport report = extremality_check(p);
    CHECK(report.extremal);
  }
  SUBCASE("trine is extremal") {
    CHECK(oracle_kernel_dimension(trine()) == 0);
    CHECK(extremality_check(trine()).extremal);
  }
  SUBCASE("invalid POVM is a domain error") {
    FinitePOVM broken(2, {{{0.0}, {}}}, {basis_projector(2, 0)});
    CHECK_THROWS_AS(extremality_check(broken), std::domain_error);
  }
}

TEST_CASE("max_steps") {
  FinitePOVM p = smeared_two_outcome();
  PerturbationDirection d = diagonal_witness();

  SUBCASE("boundary values match the line-search oracle") {
    const double plus_oracle = boundary_step_oracle(p, d, +1.0);
    const double minus_oracle = boundary_step_oracle(p, d, -1.0);
    const auto [t_plus, t_minus] = max_steps(p, d);
    CHECK(t_plus == doctest::Approx(plus_oracle).epsilon(1e-6));
    CHECK(t_minus == doctest::Approx(minus_oracle).epsilon(1e-6));
    // frozen from the oracle: the binding eigenvalues sit at 1/4 +- t/2
    // and 3/4 -+ t/2
    CHECK(t_plus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t_minus == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("negating the direction swaps the steps") {
    PerturbationDirection negated{
        {HermitianOperator(-d.operators[0].matrix()),
         HermitianOperator(-d.operators[1].matrix())}};
    const auto [t_plus, t_minus] = max_steps(p, d);
    const auto [n_plus, n_minus] = max_steps(p, negated);
    CHECK(n_plus == doctest::Approx(t_minus).epsilon(1e-12));
    CHECK(n_minus == doctest::Approx(t_plus).epsilon(1e-12));
  }
  SUBCASE("zero direction is rejected") {
    PerturbationDirection zero{{HermitianOperator::zero(2), HermitianOperator::zero(2)}};
    CHECK_THROWS_AS(max_steps(p, zero), std::domain_error);
  }
  SUBCASE("support-violating direction is rejected") {
    FinitePOVM rank_deficient = projective_basis(2);
    Matrix off = Matrix::Zero(2, 2);
    off(0, 1) = 1.0;
    off(1, 0) = 1.0;
    PerturbationDirection bad{{HermitianOperator(off), HermitianOperator(-off)}};
    CHECK_THROWS_AS(max_steps(rank_deficient, bad), std::domain_error);
  }
  SUBCASE("random witnesses agree with the line-search oracle") {
    Rng rng(31);
    int tested = 0;
    while (tested < 20) {
      FinitePOVM q = random_povm(rng, 2 + tested % 2, 2 + tested % 3);
      ExtremalityReport report = extremality_check(q);
      if (!report.witness) continue;
      const auto [t_plus, t_minus] = max_steps(q, *report.witness);
      CHECK(t_plus ==
            doctest::Approx(boundary_step_oracle(q, *report.witness, +1.0)).epsilon(1e-5));
      CHECK(t_minus ==
            doctest::Approx(boundary_step_oracle(q, *report.witness, -1.0)).epsilon(1e-5));
      ++tested;
    }
  }
}

TEST_CASE("split") {
  FinitePOVM p = smeared_two_outcome();
  PerturbationDirection d = diagonal_witness();

  SUBCASE("the smeared POVM splits into projective bases") {
    SplitResult s = split(p, d);
    // direct matrix arithmetic: P_i + (1/2) D_i and P_i - (3/2) D_i are the
    // two projective bases, with weights 3/4 and 1/4
    CHECK(s.weight_plus == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.weight_minus == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(frobenius_distance(s.plus.effects()[0], basis_projector(2, 0)) <= 1e-12);
    CHECK(frobenius_distance(s.plus.effects()[1], basis_projector(2, 1)) <= 1e-12);
    CHECK(frobenius_distance(s.minus.effects()[0], basis_projector(2, 1)) <= 1e-12);
    CHECK(frobenius_distance(s.minus.effects()[1], basis_projector(2, 0)) <= 1e-12);
    CHECK(s.plus.validate().ok());
    CHECK(s.minus.validate().ok());
  }
  SUBCASE("defining identity and rank drop on random non-extremal POVMs") {
    Rng rng(32);
    int tested = 0;
    while (tested < 100) {
      const int dim = 2 + tested % 3;
      FinitePOVM q = random_povm(rng, dim, 2 + tested % 4);
      ExtremalityReport report = extremality_check(q);
      if (!report.witness) continue;
      SplitResult s = split(q, *report.witness);
      CHECK(s.weight_plus + s.weight_minus == doctest::Approx(1.0).epsilon(1e-12));
      for (int i = 0; i < q.size(); ++i) {
        const OutcomePoint& point = q.outcomes()[i];
        Matrix mixture = Matrix::Zero(dim, dim);
        for (int j = 0; j < s.plus.size(); ++j) {
          if (point_distance(s.plus.outcomes()[j], point) <= tol::point) {
            mixture += s.weight_plus * s.plus.effects()[j].matrix();
          }
        }
        for (int j = 0; j < s.minus.size(); ++j) {
          if (point_distance(s.minus.outcomes()[j], point) <= tol::point) {
            mixture += s.weight_minus * s.minus.effects()[j].matrix();
          }
        }
        CHECK((mixture - q.effects()[i].matrix()).norm() <= 1e-12);
      }
      CHECK(total_rank(s.plus) < total_rank(q));
      CHECK(total_rank(s.minus) < total_rank(q));
      ++tested;
    }
  }
}

TEST_CASE("decompose_extremal") {
  SUBCASE("projective input returns itself with weight 1") {
    FinitePOVM p = projective_basis(2);
    MixtureDecomposition mix = decompose_or_fail(p);
    REQUIRE(mix.components.size() == 1);
    CHECK(mix.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mix.certificates[0].extremal);
    CHECK(reconstruction_residual(mix, p) <= 1e-14);
  }
  SUBCASE("smeared two-outcome POVM yields projective components") {
    FinitePOVM p = smeared_two_outcome();
    MixtureDecomposition mix = decompose_or_fail(p);
    CHECK(mix.components.size() == 2);
    CHECK(mix.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t x = 0; x < mix.components.size(); ++x) {
      CHECK(mix.certificates[x].extremal);
      CHECK(is_rank_one_pair(mix.components[x]));
      CHECK(mix.components[x].validate().ok());
    }
    CHECK(reconstruction_residual(mix, p) <= tol::reconstruction);
  }
  SUBCASE("depolarized trine") {
    FinitePOVM p = depolarized_trine(0.2);
    MixtureDecomposition mix = decompose_or_fail(p);
    CHECK(reconstruction_residual(mix, p) <= tol::reconstruction);
    CHECK(static_cast<int>(mix.components.size()) <= default_leaf_budget(p));
    for (std::size_t x = 0; x < mix.components.size(); ++x) {
      CHECK(mix.certificates[x].extremal);
      CHECK(mix.components[x].size() <= 4);
      CHECK(mix.components[x].validate().ok());
    }
  }
  SUBCASE("random corpus reconstructs, respects budgets, and is deterministic") {
    Rng rng(33);
    for (int trial = 0; trial < 40; ++trial) {
      const int dim = 2 + trial % 2;
      const int outcomes = 2 + trial % 5;
      FinitePOVM p = random_povm(rng, dim, outcomes);
      MixtureDecomposition mix = decompose_or_fail(p);
      CHECK(reconstruction_residual(mix, p) <= tol::reconstruction);
      CHECK(mix.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(static_cast<int>(mix.components.size()) <= default_leaf_budget(p));
      for (std::size_t x = 0; x < mix.components.size(); ++x) {
        if (mix.certificates[x].extremal) {
          CHECK(mix.components[x].size() <= dim * dim);
          CHECK(mix.certificates[x].kernel_dimension == 0);
        }
      }

      MixtureDecomposition again = decompose_or_fail(p);
      REQUIRE(again.components.size() == mix.components.size());
      for (std::size_t x = 0; x < mix.components.size(); ++x) {
        CHECK(again.weights[x] == mix.weights[x]);
        REQUIRE(again.components[x].size() == mix.components[x].size());
        for (int i = 0; i < mix.components[x].size(); ++i) {
          CHECK((again.components[x].effects()[i].matrix() -
                 mix.components[x].effects()[i].matrix())
                    .norm() == 0.0);
        }
      }
    }
  }
  SUBCASE("soundness spot check via randomized perturbation search") {
    Rng rng(34);
    for (const FinitePOVM& p : {projective_basis(2), trine(), qubit_sic()}) {
      CHECK_FALSE(perturbation_counterexample(p, rng, 1000, 1e-3));
    }
    // and the search does find the known non-extremal case
    CHECK(perturbation_counterexample(smeared_two_outcome(), rng, 1000, 1e-3));
  }
  SUBCASE("leaf budget overflow carries a partial tree") {
    FinitePOVM p = smeared_two_outcome();
    try {
      decompose_extremal(p, 1);
      FAIL("expected DecompositionOverflow");
    } catch (const DecompositionOverflow& overflow) {
      CHECK(overflow.partial.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(reconstruction_residual(overflow.partial, p) <= tol::reconstruction);
      bool any_uncertified = false;
      for (const auto& cert : overflow.partial.certificates) {
        if (!cert.extremal) any_uncertified = true;
      }
      CHECK(any_uncertified);
    }
  }
  SUBCASE("near-degenerate kernel is kept whole and flagged") {
    // four rank-one effects whose Bloch vectors are almost coplanar: the
    // zero-sum constraint has one singular value proportional to the height
    // h, which is placed inside the marginal band between the tight and the
    // standard cutoff by bisection on the analysis itself.
    auto squashed = [](double h) {
      const double a = std::sqrt(1.0 - h * h);
      const double bloch[4][3] = {{a, 0, h}, {-a, 0, h}, {0, a, -h}, {0, -a, -h}};
      std::vector<OutcomePoint> outcomes;
      std::vector<HermitianOperator> effects;
      for (int k = 0; k < 4; ++k) {
        outcomes.push_back({{static_cast<double>(k)}, {}});
        Matrix m(2, 2);
        m(0, 0) = 0.25 * (1.0 + bloch[k][2]);
        m(1, 1) = 0.25 * (1.0 - bloch[k][2]);
        m(0, 1) = 0.25 * Complex(bloch[k][0], -bloch[k][1]);
        m(1, 0) = 0.25 * Complex(bloch[k][0], bloch[k][1]);
        effects.emplace_back(m);
      }
      return FinitePOVM(2, std::move(outcomes), std::move(effects));
    };
    double h = 1e-10;
    bool marginal_found = false;
    for (int iter = 0; iter < 60 && !marginal_found; ++iter) {
      KernelAnalysis analysis(squashed(h));
      const int kd_std = analysis.kernel_dimension(tol::kernel_cut);
      const int kd_tight = analysis.kernel_dimension(tol::kernel_cut * 0.1);
      if (kd_std > 0 && kd_tight == 0) {
        marginal_found = true;
        break;
      }
      h *= (kd_std == 0) ? 0.5 : 4.0;
    }
    REQUIRE(marginal_found);
    FinitePOVM p = squashed(h);
    MixtureDecomposition mix = decompose_or_fail(p);
    REQUIRE(mix.components.size() == 1);
    CHECK_FALSE(mix.certificates[0].extremal);
    CHECK(mix.certificates[0].kernel_dimension > 0);
    CHECK(reconstruction_residual(mix, p) <= tol::reconstruction);
  }
}
