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

// Regenerates the shipped fixture corpus (finite POVMs, continuous family
// descriptions, density states) in canonical form.

#include <filesystem>
#include <iostream>
#include <numbers>

#include "povm/io.hpp"

using namespace povm;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

HermitianOperator projector2(double re0, double im0, double re1, double im1) {
  Eigen::Vector2cd v;
  v << Complex(re0, im0), Complex(re1, im1);
  return HermitianOperator(v * v.adjoint());
}

FinitePOVM projective_d2() {
  return FinitePOVM(2, {{{0.0}, "0"}, {{1.0}, "1"}},
                    {projector2(1, 0, 0, 0), projector2(0, 0, 1, 0)});
}

FinitePOVM projective_d3() {
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < 3; ++k) {
    outcomes.push_back({{static_cast<double>(k)}, std::to_string(k)});
    Matrix m = Matrix::Zero(3, 3);
    m(k, k) = 1.0;
    effects.emplace_back(m);
  }
  return FinitePOVM(3, std::move(outcomes), std::move(effects));
}

FinitePOVM trine() {
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * kPi * k / 3.0;
    outcomes.push_back({{angle}, {}});
    effects.push_back(HermitianOperator(
        (2.0 / 3.0) * projector2(std::cos(angle), 0, std::sin(angle), 0).matrix()));
  }
  return FinitePOVM(2, std::move(outcomes), std::move(effects));
}

FinitePOVM qubit_sic() {
  const double s = 1.0 / std::sqrt(3.0);
  const double bloch[4][3] = {
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
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

FinitePOVM smeared_two_outcome() {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 0.75;
  a(1, 1) = 0.25;
  b(0, 0) = 0.25;
  b(1, 1) = 0.75;
  return FinitePOVM(2, {{{0.0}, {}}, {{1.0}, {}}},
                    {HermitianOperator(a), HermitianOperator(b)});
}

FinitePOVM depolarized_trine(double eps) {
  FinitePOVM base = trine();
  std::vector<HermitianOperator> effects;
  for (const auto& effect : base.effects()) {
    effects.emplace_back((1.0 - eps) * effect.matrix() +
                         (eps / 3.0) * Matrix::Identity(2, 2));
  }
  return FinitePOVM(2, base.outcomes(), std::move(effects));
}

json continuous_doc(int dim, json family) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = dim;
  doc["kind"] = "continuous";
  doc["family"] = std::move(family);
  return doc;
}

json tabulated_singular_doc() {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = 2;
  doc["kind"] = "continuous";
  json nodes = json::array();
  for (int j = 0; j < 2; ++j) {
    json node;
    node["point"] = json::array({static_cast<double>(j)});
    node["weight"] = 1.0;
    // both nodes project on |0>, so the |1> direction is never reached
    node["density_matrix"] =
        json::array({json::array({json::array({1.0, 0.0}), json::array({0.0, 0.0})}),
                     json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0})})});
    nodes.push_back(std::move(node));
  }
  doc["tabulated"] = json{{"nodes", std::move(nodes)}};
  return doc;
}

DensityState state_zero() { return DensityState(projector2(1, 0, 0, 0)); }

DensityState state_plus() {
  const double r = 1.0 / std::sqrt(2.0);
  return DensityState(projector2(r, 0, r, 0));
}

DensityState state_mixed() {
  return DensityState(HermitianOperator(0.5 * Matrix::Identity(2, 2)));
}

void emit(const std::filesystem::path& dir, const std::string& name, const json& doc) {
  write_text_file((dir / name).string(), canonical_dump(doc) + "\n");
  std::cout << "wrote " << (dir / name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);

  emit(dir, "projective_d2.json", povm_file_json(projective_d2()));
  emit(dir, "projective_d3.json", povm_file_json(projective_d3()));
  emit(dir, "trine.json", povm_file_json(trine()));
  emit(dir, "sic.json", povm_file_json(qubit_sic()));
  emit(dir, "smeared_two_outcome.json", povm_file_json(smeared_two_outcome()));
  emit(dir, "depolarized_trine.json", povm_file_json(depolarized_trine(0.2)));

  emit(dir, "phase16.json", continuous_doc(2, json{{"name", "phase"}, {"nodes", 16}}));
  emit(dir, "sphere100.json",
       continuous_doc(2, json{{"name", "sphere"}, {"nodes", 100}, {"seed", 7}}));
  emit(dir, "line64.json",
       continuous_doc(2, json{{"name", "line"},
                              {"nodes", 64},
                              {"sigma", 1.0},
                              {"half_width_sigmas", 6.0}}));
  emit(dir, "trivial_d2.json", continuous_doc(2, json{{"name", "trivial"}}));
  emit(dir, "tabulated_singular.json", tabulated_singular_doc());

  emit(dir, "state_zero_d2.json", state_file_json(state_zero()));
  emit(dir, "state_plus_d2.json", state_file_json(state_plus()));
  emit(dir, "state_mixed_d2.json", state_file_json(state_mixed()));
  return 0;
}
