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

#include "povm/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "povm/families.hpp"

namespace povm {

using nlohmann::json;

namespace {

std::string format_double(double value) {
  if (!std::isfinite(value)) throw ParseError("cannot serialize a non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string s(buf);
  // keep the float type visible so parse(serialize(x)) preserves types
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump_canonical(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::null:
      out += "null";
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case json::value_t::string:
      out += json(j.get<std::string>()).dump();
      return;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_canonical(item, out);
      }
      out += ']';
      return;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // object keys are sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      return;
    }
    default:
      throw ParseError("cannot serialize binary JSON values");
  }
}

void expect_object(const json& j, const char* where) {
  if (!j.is_object()) throw ParseError(std::string(where) + ": expected an object");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ParseError(std::string(where) + ": unknown member \"" + it.key() + "\"");
    }
  }
}

const json& require(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(where) + ": missing member \"" + key + "\"");
  }
  return *it;
}

double as_number(const json& j, const char* where) {
  if (!j.is_number()) throw ParseError(std::string(where) + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const char* where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ParseError(std::string(where) + ": expected an integer");
  }
  return j.get<int>();
}

HermitianOperator parse_matrix(const json& j, int dim, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError(std::string(where) + ": matrix must have dim rows");
  }
  Matrix raw(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError(std::string(where) + ": matrix row has wrong length");
    }
    for (int c = 0; c < dim; ++c) {
      const json& entry = row[c];
      if (!entry.is_array() || entry.size() != 2) {
        throw ParseError(std::string(where) + ": matrix entry must be [re, im]");
      }
      raw(r, c) = Complex(as_number(entry[0], where), as_number(entry[1], where));
    }
  }
  const double asym = (raw - raw.adjoint()).norm();
  if (asym > 1e-9 * std::max(1.0, raw.norm())) {
    throw ParseError(std::string(where) + ": matrix is not Hermitian");
  }
  return HermitianOperator(raw);
}

json matrix_to_json(const HermitianOperator& op) {
  json rows = json::array();
  for (int r = 0; r < op.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < op.dim(); ++c) {
      row.push_back(json::array({op.matrix()(r, c).real(), op.matrix()(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

OutcomePoint parse_outcome(const json& j, const char* where) {
  expect_object(j, where);
  reject_unknown(j, {"label", "point"}, where);
  OutcomePoint p;
  const json& point = require(j, "point", where);
  if (!point.is_array() || point.empty()) {
    throw ParseError(std::string(where) + ": point must be a nonempty array");
  }
  for (const auto& coord : point) p.coordinates.push_back(as_number(coord, where));
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) throw ParseError(std::string(where) + ": label must be a string");
    p.label = it->get<std::string>();
  }
  return p;
}

json outcome_to_json(const OutcomePoint& p) {
  json out;
  out["point"] = p.coordinates;
  if (!p.label.empty()) out["label"] = p.label;
  return out;
}

FinitePOVM parse_finite_body(const json& doc, int dim, const char* where) {
  const json& outcomes_json = require(doc, "outcomes", where);
  const json& effects_json = require(doc, "effects", where);
  if (!outcomes_json.is_array() || !effects_json.is_array() ||
      outcomes_json.size() != effects_json.size() || outcomes_json.empty()) {
    throw ParseError(std::string(where) +
                     ": outcomes and effects must be nonempty arrays of equal length");
  }
  std::vector<OutcomePoint> outcomes;
  std::vector<HermitianOperator> effects;
  for (std::size_t i = 0; i < outcomes_json.size(); ++i) {
    outcomes.push_back(parse_outcome(outcomes_json[i], where));
    effects.push_back(parse_matrix(effects_json[i], dim, where));
  }
  try {
    return FinitePOVM(dim, std::move(outcomes), std::move(effects));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(where) + ": " + e.what());
  }
}

ContinuousPOVM parse_family(const json& family, int dim) {
  expect_object(family, "family");
  const json& name_json = require(family, "name", "family");
  if (!name_json.is_string()) throw ParseError("family: name must be a string");
  const std::string name = name_json.get<std::string>();
  try {
    if (name == "phase") {
      reject_unknown(family, {"name", "nodes"}, "family");
      int nodes = 16;
      if (auto it = family.find("nodes"); it != family.end()) nodes = as_int(*it, "family");
      if (dim != 2) throw ParseError("family phase: dim must be 2");
      return phase_family(nodes);
    }
    if (name == "sphere") {
      reject_unknown(family, {"name", "nodes", "seed"}, "family");
      int nodes = 100;
      std::uint64_t seed = 7;
      if (auto it = family.find("nodes"); it != family.end()) nodes = as_int(*it, "family");
      if (auto it = family.find("seed"); it != family.end()) {
        seed = static_cast<std::uint64_t>(as_int(*it, "family"));
      }
      if (dim != 2) throw ParseError("family sphere: dim must be 2");
      return sphere_family(nodes, seed);
    }
    if (name == "line") {
      reject_unknown(family, {"name", "nodes", "sigma", "half_width_sigmas"}, "family");
      int nodes = 64;
      double sigma = 1.0, half_width = 6.0;
      if (auto it = family.find("nodes"); it != family.end()) nodes = as_int(*it, "family");
      if (auto it = family.find("sigma"); it != family.end()) sigma = as_number(*it, "family");
      if (auto it = family.find("half_width_sigmas"); it != family.end()) {
        half_width = as_number(*it, "family");
      }
      if (dim != 2) throw ParseError("family line: dim must be 2");
      return gaussian_line_family(nodes, sigma, half_width);
    }
    if (name == "trivial") {
      reject_unknown(family, {"name"}, "family");
      return trivial_family(dim);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("family: ") + e.what());
  }
  throw ParseError("family: unknown family \"" + name + "\"");
}

ContinuousPOVM parse_tabulated(const json& tab, int dim) {
  expect_object(tab, "tabulated");
  reject_unknown(tab, {"nodes"}, "tabulated");
  const json& nodes_json = require(tab, "nodes", "tabulated");
  if (!nodes_json.is_array() || nodes_json.empty()) {
    throw ParseError("tabulated: nodes must be a nonempty array");
  }
  std::vector<QuadratureNode> nodes;
  std::vector<HermitianOperator> densities;
  for (const auto& node : nodes_json) {
    expect_object(node, "tabulated node");
    reject_unknown(node, {"point", "weight", "density_matrix"}, "tabulated node");
    QuadratureNode q;
    const json& point = require(node, "point", "tabulated node");
    if (!point.is_array() || point.empty()) {
      throw ParseError("tabulated node: point must be a nonempty array");
    }
    for (const auto& coord : point) q.point.coordinates.push_back(as_number(coord, "tabulated"));
    q.weight = as_number(require(node, "weight", "tabulated node"), "tabulated");
    densities.push_back(parse_matrix(require(node, "density_matrix", "tabulated node"), dim,
                                     "tabulated node"));
    nodes.push_back(std::move(q));
  }
  try {
    return tabulated_family(dim, std::move(nodes), std::move(densities));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("tabulated: ") + e.what());
  }
}

json parse_document(const std::string& text, const char* where) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError(std::string(where) + ": invalid JSON");
  return doc;
}

void check_header(const json& doc, const char* where) {
  expect_object(doc, where);
  if (as_int(require(doc, "format_version", where), where) != kFormatVersion) {
    throw ParseError(std::string(where) + ": unsupported format_version");
  }
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump_canonical(j, out);
  return out;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

LoadedPovm parse_povm_json(const json& doc) {
  check_header(doc, "povm file");
  const int dim = as_int(require(doc, "dim", "povm file"), "povm file");
  if (dim < 1) throw ParseError("povm file: dim must be >= 1");
  const json& kind = require(doc, "kind", "povm file");
  if (!kind.is_string()) throw ParseError("povm file: kind must be a string");

  LoadedPovm loaded;
  loaded.dim = dim;
  loaded.digest = digest_hex(canonical_dump(doc));
  if (kind == "finite") {
    reject_unknown(doc, {"format_version", "dim", "kind", "outcomes", "effects"}, "povm file");
    loaded.finite = parse_finite_body(doc, dim, "povm file");
    return loaded;
  }
  if (kind == "continuous") {
    reject_unknown(doc, {"format_version", "dim", "kind", "family", "tabulated"}, "povm file");
    const bool has_family = doc.contains("family");
    const bool has_table = doc.contains("tabulated");
    if (has_family == has_table) {
      throw ParseError("povm file: continuous kind needs exactly one of family/tabulated");
    }
    loaded.continuous =
        has_family ? parse_family(doc["family"], dim) : parse_tabulated(doc["tabulated"], dim);
    return loaded;
  }
  throw ParseError("povm file: kind must be \"finite\" or \"continuous\"");
}

LoadedPovm load_povm_file(const std::string& path) {
  return parse_povm_json(parse_document(read_text_file(path), "povm file"));
}

json finite_povm_to_json(const FinitePOVM& p) {
  json out;
  json outcomes = json::array();
  json effects = json::array();
  for (int i = 0; i < p.size(); ++i) {
    outcomes.push_back(outcome_to_json(p.outcomes()[i]));
    effects.push_back(matrix_to_json(p.effects()[i]));
  }
  out["outcomes"] = std::move(outcomes);
  out["effects"] = std::move(effects);
  return out;
}

json povm_file_json(const FinitePOVM& p) {
  json doc = finite_povm_to_json(p);
  doc["format_version"] = kFormatVersion;
  doc["dim"] = p.dim();
  doc["kind"] = "finite";
  return doc;
}

DensityState load_state_file(const std::string& path) {
  json doc = parse_document(read_text_file(path), "state file");
  check_header(doc, "state file");
  reject_unknown(doc, {"format_version", "dim", "matrix"}, "state file");
  const int dim = as_int(require(doc, "dim", "state file"), "state file");
  if (dim < 1) throw ParseError("state file: dim must be >= 1");
  HermitianOperator matrix = parse_matrix(require(doc, "matrix", "state file"), dim, "state file");
  try {
    return DensityState(matrix);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
}

json state_file_json(const DensityState& rho) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = rho.dim();
  doc["matrix"] = matrix_to_json(rho.matrix());
  return doc;
}

json outcome_space_to_json(const OutcomeSpace& space) {
  json doc;
  switch (space.kind) {
    case OutcomeSpace::Kind::Points:
      doc["type"] = "points";
      return doc;
    case OutcomeSpace::Kind::Box:
      doc["type"] = "box";
      doc["lower"] = space.lower;
      doc["upper"] = space.upper;
      return doc;
    case OutcomeSpace::Kind::Periodic:
      doc["type"] = "periodic";
      doc["start"] = space.period_start;
      doc["period"] = space.period;
      return doc;
  }
  throw std::logic_error("outcome_space_to_json: unreachable");
}

OutcomeSpace outcome_space_from_json(const json& doc,
                                     const std::vector<OutcomePoint>& reference_points) {
  expect_object(doc, "outcome_space");
  const json& type = require(doc, "type", "outcome_space");
  if (type == "points") {
    reject_unknown(doc, {"type"}, "outcome_space");
    return OutcomeSpace::point_set(reference_points);
  }
  if (type == "box") {
    reject_unknown(doc, {"type", "lower", "upper"}, "outcome_space");
    std::vector<double> lower, upper;
    for (const auto& v : require(doc, "lower", "outcome_space")) {
      lower.push_back(as_number(v, "outcome_space"));
    }
    for (const auto& v : require(doc, "upper", "outcome_space")) {
      upper.push_back(as_number(v, "outcome_space"));
    }
    try {
      return OutcomeSpace::box(std::move(lower), std::move(upper));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("outcome_space: ") + e.what());
    }
  }
  if (type == "periodic") {
    reject_unknown(doc, {"type", "start", "period"}, "outcome_space");
    try {
      return OutcomeSpace::periodic(as_number(require(doc, "start", "outcome_space"), "outcome_space"),
                                    as_number(require(doc, "period", "outcome_space"), "outcome_space"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("outcome_space: ") + e.what());
    }
  }
  throw ParseError("outcome_space: unknown type");
}

json certificate_to_json(const Certificate& cert) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["tool_version"] = cert.tool_version;
  doc["kind"] = cert.kind;
  doc["dim"] = cert.dim;
  doc["input_digest"] = cert.input_digest;
  doc["input_povm"] = finite_povm_to_json(cert.input_povm);
  doc["outcome_space"] = outcome_space_to_json(cert.outcome_space);
  doc["weights"] = cert.decomposition.weights;
  json components = json::array();
  for (const auto& component : cert.decomposition.components) {
    components.push_back(finite_povm_to_json(component));
  }
  doc["components"] = std::move(components);
  json certificates = json::array();
  for (const auto& c : cert.decomposition.certificates) {
    json entry;
    entry["extremal"] = c.extremal;
    entry["kernel_dimension"] = c.kernel_dimension;
    entry["max_outcomes_check"] = c.max_outcomes_check;
    entry["clipping_residual"] = c.clipping_residual;
    certificates.push_back(std::move(entry));
  }
  doc["certificates"] = std::move(certificates);
  doc["reconstruction_error"] = cert.reconstruction_error;
  doc["partial"] = cert.partial;
  if (cert.discretization_nodes) doc["discretization_nodes"] = *cert.discretization_nodes;
  if (cert.normalization_correction) {
    doc["normalization_correction"] = *cert.normalization_correction;
  }
  if (cert.truncation_mass) doc["truncation_mass"] = *cert.truncation_mass;
  return doc;
}

Certificate parse_certificate_json(const json& doc) {
  check_header(doc, "certificate");
  reject_unknown(doc,
                 {"format_version", "tool_version", "kind", "dim", "input_digest", "input_povm",
                  "outcome_space", "weights", "components", "certificates",
                  "reconstruction_error", "partial", "discretization_nodes",
                  "normalization_correction", "truncation_mass"},
                 "certificate");
  const char* where = "certificate";
  const json& kind = require(doc, "kind", where);
  if (kind != "decomposition" && kind != "realization") {
    throw ParseError("certificate: kind must be decomposition or realization");
  }
  const int dim = as_int(require(doc, "dim", where), where);
  if (dim < 1) throw ParseError("certificate: dim must be >= 1");

  const json& input = require(doc, "input_povm", where);
  expect_object(input, where);
  reject_unknown(input, {"outcomes", "effects"}, "certificate input_povm");
  FinitePOVM input_povm = parse_finite_body(input, dim, "certificate input_povm");

  MixtureDecomposition mixture;
  const json& weights = require(doc, "weights", where);
  const json& components = require(doc, "components", where);
  const json& certificates = require(doc, "certificates", where);
  if (!weights.is_array() || !components.is_array() || !certificates.is_array() ||
      weights.size() != components.size() || weights.size() != certificates.size() ||
      weights.empty()) {
    throw ParseError("certificate: weights/components/certificates must be equal-length arrays");
  }
  for (std::size_t x = 0; x < weights.size(); ++x) {
    mixture.weights.push_back(as_number(weights[x], where));
    expect_object(components[x], where);
    reject_unknown(components[x], {"outcomes", "effects"}, "certificate component");
    mixture.components.push_back(parse_finite_body(components[x], dim, "certificate component"));
    const json& c = certificates[x];
    expect_object(c, where);
    reject_unknown(c, {"extremal", "kernel_dimension", "max_outcomes_check", "clipping_residual"},
                   "certificate entry");
    ComponentCertificate entry;
    entry.extremal = require(c, "extremal", where).get<bool>();
    entry.kernel_dimension = as_int(require(c, "kernel_dimension", where), where);
    entry.max_outcomes_check = require(c, "max_outcomes_check", where).get<bool>();
    entry.clipping_residual = as_number(require(c, "clipping_residual", where), where);
    mixture.certificates.push_back(entry);
  }

  Certificate cert{kind.get<std::string>(),
                   dim,
                   require(doc, "input_digest", where).get<std::string>(),
                   std::move(input_povm),
                   outcome_space_from_json(require(doc, "outcome_space", where), {}),
                   std::move(mixture),
                   as_number(require(doc, "reconstruction_error", where), where),
                   require(doc, "partial", where).get<bool>(),
                   require(doc, "tool_version", where).get<std::string>(),
                   std::nullopt,
                   std::nullopt,
                   std::nullopt};
  if (cert.outcome_space.kind == OutcomeSpace::Kind::Points) {
    cert.outcome_space = OutcomeSpace::point_set(cert.input_povm.outcomes());
  }
  if (auto it = doc.find("discretization_nodes"); it != doc.end()) {
    cert.discretization_nodes = as_int(*it, where);
  }
  if (auto it = doc.find("normalization_correction"); it != doc.end()) {
    cert.normalization_correction = as_number(*it, where);
  }
  if (auto it = doc.find("truncation_mass"); it != doc.end()) {
    cert.truncation_mass = as_number(*it, where);
  }
  return cert;
}

Certificate load_certificate_file(const std::string& path) {
  return parse_certificate_json(parse_document(read_text_file(path), "certificate"));
}

std::string samples_to_text(const std::vector<SampleRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += std::to_string(record.component_index);
    out += '\t';
    out += std::to_string(record.outcome_index);
    out += '\t';
    for (std::size_t k = 0; k < record.outcome.coordinates.size(); ++k) {
      if (k > 0) out += ',';
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", record.outcome.coordinates[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<SampleRecord> parse_samples_text(const std::string& text) {
  std::vector<SampleRecord> records;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    SampleRecord record;
    std::string coords;
    if (!(fields >> record.component_index >> record.outcome_index >> coords)) {
      throw ParseError("samples: malformed record line");
    }
    std::istringstream coord_stream(coords);
    std::string token;
    while (std::getline(coord_stream, token, ',')) {
      try {
        record.outcome.coordinates.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw ParseError("samples: malformed coordinate");
      }
    }
    if (record.outcome.coordinates.empty()) {
      throw ParseError("samples: record has no coordinates");
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace povm
