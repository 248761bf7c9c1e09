#include "rqcm/gate_set_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

using nlohmann::json;

Gate parse_matrix(const json& m, std::size_t which) {
  const std::string where = "gate " + std::to_string(which) + ": ";
  if (!m.is_array() || m.size() != 4) throw FormatError(where + "matrix must have 4 rows");
  Gate g;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!m[i].is_array() || m[i].size() != 4) throw FormatError(where + "each row must have 4 entries");
    for (std::size_t j = 0; j < 4; ++j) {
      const json& e = m[i][j];
      if (e.is_number()) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw FormatError(where + "entries must be [re, im] pairs");
      }
    }
  }
  return g;
}

}  // namespace

GateDistribution parse_gate_set(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("gate-set file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("gate-set file must be a JSON object");
  if (!doc.contains("gates") || !doc["gates"].is_array()) throw FormatError("gate-set file needs a \"gates\" array");
  const std::string name = doc.value("name", std::string("unnamed"));
  const bool declared = doc.value("dagger_symmetric", false);

  std::vector<Gate> gates;
  std::vector<double> weights;
  std::size_t idx = 0;
  for (const auto& entry : doc["gates"]) {
    if (!entry.is_object() || !entry.contains("matrix")) {
      throw FormatError("gate " + std::to_string(idx) + ": expected an object with \"matrix\"");
    }
    if (!entry.contains("weight") || !entry["weight"].is_number()) {
      throw FormatError("gate " + std::to_string(idx) + ": missing numeric \"weight\"");
    }
    gates.push_back(parse_matrix(entry["matrix"], idx));
    weights.push_back(entry["weight"].get<double>());
    ++idx;
  }
  return GateDistribution::finite_set(name, std::move(gates), std::move(weights), declared);
}

GateDistribution load_gate_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read gate-set file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gate_set(buf.str());
}

std::string serialize_gate_set(const GateDistribution& dist) {
  if (dist.kind() != GateDistribution::Kind::finite_set) throw InvalidArgument("only finite sets serialize");
  json doc;
  doc["name"] = dist.name();
  doc["dagger_symmetric"] = true;
  json gates = json::array();
  for (std::size_t k = 0; k < dist.gates().size(); ++k) {
    json m = json::array();
    for (int i = 0; i < 4; ++i) {
      json row = json::array();
      for (int j = 0; j < 4; ++j) row.push_back({dist.gates()[k](i, j).real(), dist.gates()[k](i, j).imag()});
      m.push_back(row);
    }
    gates.push_back({{"weight", dist.weights()[k]}, {"matrix", m}});
  }
  doc["gates"] = gates;
  return doc.dump(1);
}

GateDistribution resolve_distribution(const std::string& source) {
  if (source == "haar-u4" || source == "haar_u4") return GateDistribution::haar_u4();
  return load_gate_set(source);
}

}  // namespace rqcm
