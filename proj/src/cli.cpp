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

#include "povm/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "povm/families.hpp"
#include "povm/io.hpp"

namespace povm::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitParse = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitCoverage = 4;

void write_certificate(const std::string& path, const Certificate& cert) {
  write_text_file(path, canonical_dump(certificate_to_json(cert)) + "\n");
}

int cmd_validate(const std::string& path, std::ostream& out) {
  LoadedPovm loaded = load_povm_file(path);
  ValidationReport report =
      loaded.finite ? loaded.finite->validate() : loaded.continuous->validate();
  if (report.ok()) {
    out << "valid\n";
    return kExitOk;
  }
  out << report.to_string();
  return kExitVerification;
}

int cmd_check_extremal(const std::string& path, std::ostream& out) {
  LoadedPovm loaded = load_povm_file(path);
  if (!loaded.finite) throw ParseError("check-extremal: expected a finite POVM file");
  const FinitePOVM& p = *loaded.finite;
  ExtremalityReport report = extremality_check(p);
  if (report.extremal) {
    out << "extremal\n";
  } else {
    out << "not extremal (kernel dimension " << report.kernel_dimension << ")\n";
  }
  const int bound = p.dim() * p.dim();
  out << "outcomes " << p.size() << (p.size() <= bound ? " <= " : " > ") << "d^2 = " << bound
      << "\n";
  return kExitOk;
}

Certificate make_certificate(std::string kind, const FinitePOVM& input, OutcomeSpace space,
                             MixtureDecomposition mixture, const std::string& digest,
                             bool partial) {
  const double residual = reconstruction_residual(mixture, input);
  return Certificate{std::move(kind), input.dim(),   digest,       input,
                     std::move(space), std::move(mixture), residual, partial,
                     kToolVersion,     std::nullopt, std::nullopt, std::nullopt};
}

int cmd_decompose(const std::string& path, int max_leaves, const std::string& cert_path,
                  std::ostream& out) {
  LoadedPovm loaded = load_povm_file(path);
  if (!loaded.finite) throw ParseError("decompose: expected a finite POVM file");
  const FinitePOVM& input = *loaded.finite;
  const OutcomeSpace space = OutcomeSpace::point_set(input.outcomes());
  try {
    MixtureDecomposition mixture = decompose_extremal(input, max_leaves);
    Certificate cert = make_certificate("decomposition", input, space, std::move(mixture),
                                        loaded.digest, false);
    write_certificate(cert_path, cert);
    out << "components " << cert.decomposition.components.size() << ", reconstruction error "
        << cert.reconstruction_error << "\n";
    return kExitOk;
  } catch (const DecompositionOverflow& overflow) {
    Certificate cert = make_certificate("decomposition", input, space, overflow.partial,
                                        loaded.digest, true);
    write_certificate(cert_path, cert);
    out << "leaf budget exceeded; partial certificate written\n";
    return kExitOverflow;
  }
}

ContinuousPOVM resolve_family(const std::string& name_or_path, int nodes, std::uint64_t seed,
                              double sigma, double half_width, int dim) {
  if (name_or_path == "phase") return phase_family(nodes);
  if (name_or_path == "sphere") return sphere_family(nodes, seed);
  if (name_or_path == "line") return gaussian_line_family(nodes, sigma, half_width);
  if (name_or_path == "trivial") return trivial_family(dim);
  LoadedPovm loaded = load_povm_file(name_or_path);
  if (!loaded.continuous) throw ParseError("realize: expected a continuous POVM");
  return *loaded.continuous;
}

int cmd_realize(const ContinuousPOVM& family, int max_leaves, const std::string& cert_path,
                std::ostream& out) {
  DiscretizationResult discretized = discretize(family);
  const std::string digest = digest_hex(canonical_dump(povm_file_json(discretized.povm)));
  auto fill_extras = [&](Certificate& cert) {
    cert.discretization_nodes = static_cast<int>(family.quadrature().size());
    cert.normalization_correction = discretized.normalization_correction;
    cert.truncation_mass = family.truncation_mass();
  };
  try {
    MixtureDecomposition mixture = decompose_extremal(discretized.povm, max_leaves);
    Certificate cert = make_certificate("realization", discretized.povm, family.outcome_space(),
                                        std::move(mixture), digest, false);
    fill_extras(cert);
    write_certificate(cert_path, cert);
    out << "components " << cert.decomposition.components.size() << ", normalization correction "
        << discretized.normalization_correction << ", truncation mass "
        << family.truncation_mass() << "\n";
    return kExitOk;
  } catch (const DecompositionOverflow& overflow) {
    Certificate cert = make_certificate("realization", discretized.povm, family.outcome_space(),
                                        overflow.partial, digest, true);
    fill_extras(cert);
    write_certificate(cert_path, cert);
    out << "leaf budget exceeded; partial certificate written\n";
    return kExitOverflow;
  }
}

int cmd_sample(const std::string& cert_path, const std::string& state_path, long long shots,
               std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  Certificate cert = load_certificate_file(cert_path);
  DensityState rho = load_state_file(state_path);
  std::vector<SampleRecord> records = sample_two_stage(rho, cert.decomposition, shots, seed);
  write_text_file(out_path, samples_to_text(records));
  out << "wrote " << records.size() << " samples\n";
  return kExitOk;
}

int cmd_verify(const std::string& cert_path, const std::string& samples_path,
               const std::string& state_path, std::ostream& out) {
  Certificate cert = load_certificate_file(cert_path);
  bool ok = true;
  auto check = [&](bool condition, const std::string& name, double value) {
    out << (condition ? "ok   " : "FAIL ") << name << " (" << value << ")\n";
    ok = ok && condition;
  };

  const double weight_gap = std::abs(cert.decomposition.weight_sum() - 1.0);
  check(weight_gap <= 1e-12, "weights sum to 1", weight_gap);

  const double recomputed = reconstruction_residual(cert.decomposition, cert.input_povm);
  check(std::abs(recomputed - cert.reconstruction_error) <= 1e-12,
        "reconstruction error matches recomputation", recomputed);
  check(recomputed <= tol::reconstruction, "mixture reconstructs the input", recomputed);

  int flag_mismatches = 0;
  int bound_violations = 0;
  int outside_points = 0;
  for (std::size_t x = 0; x < cert.decomposition.components.size(); ++x) {
    const FinitePOVM& component = cert.decomposition.components[x];
    const ComponentCertificate& entry = cert.decomposition.certificates[x];
    ExtremalityReport report = extremality_check(component);
    if (report.extremal != entry.extremal) ++flag_mismatches;
    if (entry.extremal && component.size() > cert.dim * cert.dim) ++bound_violations;
    for (const auto& point : component.outcomes()) {
      if (!cert.outcome_space.contains(point)) ++outside_points;
    }
  }
  check(flag_mismatches == 0, "extremality flags match re-check", flag_mismatches);
  check(bound_violations == 0, "certified components obey the d^2 bound", bound_violations);
  check(outside_points == 0, "outcome points lie in the outcome space", outside_points);

  if (!samples_path.empty()) {
    if (state_path.empty()) throw ParseError("verify: --samples requires --state");
    DensityState rho = load_state_file(state_path);
    std::vector<SampleRecord> samples = parse_samples_text(read_text_file(samples_path));
    DistributionComparison comparison =
        compare_distributions(rho, cert.input_povm, samples);
    const double bound =
        3.0 * std::sqrt(static_cast<double>(cert.input_povm.size()) /
                        std::max<std::size_t>(samples.size(), 1));
    if (comparison.empty_samples) out << "warning: empty sample list\n";
    check(!comparison.empty_samples && comparison.total_variation <= bound,
          "sample distribution matches Born probabilities", comparison.total_variation);
  }
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite realizations of quantum measurements"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string path, cert_path, out_path, state_path, samples_path;
  int max_leaves = 0;
  int nodes = 16;
  std::uint64_t seed = 7;
  double sigma = 1.0, half_width = 6.0;
  int dim = 2;
  long long shots = 0;

  CLI::App* validate = app.add_subcommand("validate", "check a POVM file against its invariants");
  validate->add_option("path", path)->required();

  CLI::App* check_ext = app.add_subcommand("check-extremal", "test a finite POVM for extremality");
  check_ext->add_option("path", path)->required();

  CLI::App* decompose =
      app.add_subcommand("decompose", "decompose a finite POVM into extremal components");
  decompose->add_option("path", path)->required();
  decompose->add_option("--max-leaves", max_leaves);
  decompose->add_option("-o,--output", cert_path)->required();

  CLI::App* realize =
      app.add_subcommand("realize", "discretize and decompose a continuous POVM");
  realize->add_option("family", path, "family name (phase|sphere|line|trivial) or file path")
      ->required();
  realize->add_option("--nodes", nodes);
  realize->add_option("--seed", seed);
  realize->add_option("--sigma", sigma);
  realize->add_option("--half-width", half_width);
  realize->add_option("--dim", dim);
  realize->add_option("--max-leaves", max_leaves);
  realize->add_option("-o,--output", cert_path)->required();

  CLI::App* sample = app.add_subcommand("sample", "draw two-stage samples from a certificate");
  sample->add_option("certificate", cert_path)->required();
  sample->add_option("--state", state_path)->required();
  sample->add_option("--shots", shots)->required();
  sample->add_option("--seed", seed)->required();
  sample->add_option("-o,--output", out_path)->required();

  CLI::App* verify = app.add_subcommand("verify", "re-check a certificate");
  verify->add_option("certificate", cert_path)->required();
  verify->add_option("--samples", samples_path);
  verify->add_option("--state", state_path);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("povmtool");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& help) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(path, out);
    if (check_ext->parsed()) return cmd_check_extremal(path, out);
    if (decompose->parsed()) return cmd_decompose(path, max_leaves, cert_path, out);
    if (realize->parsed()) {
      ContinuousPOVM family = resolve_family(path, nodes, seed, sigma, half_width, dim);
      return cmd_realize(family, max_leaves, cert_path, out);
    }
    if (sample->parsed()) return cmd_sample(cert_path, state_path, shots, seed, out_path, out);
    if (verify->parsed()) return cmd_verify(cert_path, samples_path, state_path, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitParse;
  } catch (const CoverageError& e) {
    err << e.what() << "\n";
    return kExitCoverage;
  } catch (const DecompositionOverflow& e) {
    err << e.what() << "\n";
    return kExitOverflow;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitVerification;
  }
  err << "no subcommand given\n";
  return kExitParse;
}

}  // namespace povm::cli
