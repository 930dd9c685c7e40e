#include <fstream>

#include <json.hpp>

#include "memfem/mesh.hpp"

// Mesh JSON schema (version 1):
// {
//   "version": 1,
//   "closed": bool,
//   "prestretch": number,
//   "nodes": [[x,y,z], ...],
//   "node_sets": {"name": [ids...], ...},
//   "elements": [
//     {"kind": "lagrange_linear"|"lagrange_quadratic", "nodes": [ids...]},
//     {"kind": "bezier", "degree": p, "nodes": [ids...],
//      "extraction": [[row...], ...],   // n_ne x (p+1)^2, row-major
//      "weights": [w...]}
//   ]
// }
// Node ordering is tensor-product with xi^1 fastest for all kinds.

namespace memfem {

using nlohmann::json;

Mesh load_mesh_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  json j = json::parse(in);

  Mesh mesh;
  mesh.closed = j.value("closed", false);
  mesh.prestretch = j.value("prestretch", 1.0);
  for (const auto& node : j.at("nodes"))
    mesh.ref_coords.emplace_back(node.at(0).get<double>(), node.at(1).get<double>(),
                                 node.at(2).get<double>());
  if (j.contains("node_sets"))
    for (const auto& [name, ids] : j.at("node_sets").items())
      mesh.node_sets[name] = ids.get<std::vector<int>>();

  for (const auto& je : j.at("elements")) {
    Element e;
    const std::string kind = je.at("kind").get<std::string>();
    e.nodes = je.at("nodes").get<std::vector<int>>();
    if (kind == "lagrange_linear") {
      e.basis = ElementBasis::lagrange_linear();
    } else if (kind == "lagrange_quadratic") {
      e.basis = ElementBasis::lagrange_quadratic();
    } else if (kind == "bezier") {
      const int degree = je.at("degree").get<int>();
      const auto& jc = je.at("extraction");
      const int rows = static_cast<int>(jc.size());
      const int cols = (degree + 1) * (degree + 1);
      MatX C(rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) C(r, c) = jc.at(r).at(c).get<double>();
      VecX w(rows);
      const auto& jw = je.at("weights");
      for (int r = 0; r < rows; ++r) w(r) = jw.at(r).get<double>();
      e.basis = ElementBasis::bezier(degree, std::move(C), std::move(w));
    } else {
      throw std::runtime_error("unknown element kind in mesh file: " + kind);
    }
    mesh.elements.push_back(std::move(e));
  }
  mesh.validate();
  return mesh;
}

void save_mesh_json(const Mesh& mesh, const std::string& path) {
  json j;
  j["version"] = 1;
  j["closed"] = mesh.closed;
  j["prestretch"] = mesh.prestretch;
  json nodes = json::array();
  for (const auto& x : mesh.ref_coords) nodes.push_back({x(0), x(1), x(2)});
  j["nodes"] = std::move(nodes);
  json sets = json::object();
  for (const auto& [name, ids] : mesh.node_sets) sets[name] = ids;
  j["node_sets"] = std::move(sets);

  json elements = json::array();
  for (const auto& e : mesh.elements) {
    json je;
    je["nodes"] = e.nodes;
    switch (e.basis.kind) {
      case BasisKind::LagrangeLinear:
        je["kind"] = "lagrange_linear";
        break;
      case BasisKind::LagrangeQuadratic:
        je["kind"] = "lagrange_quadratic";
        break;
      case BasisKind::BezierExtracted: {
        je["kind"] = "bezier";
        je["degree"] = e.basis.degree;
        json rows = json::array();
        for (int r = 0; r < e.basis.extraction.rows(); ++r) {
          json row = json::array();
          for (int c = 0; c < e.basis.extraction.cols(); ++c) row.push_back(e.basis.extraction(r, c));
          rows.push_back(std::move(row));
        }
        je["extraction"] = std::move(rows);
        json w = json::array();
        for (int r = 0; r < e.basis.weights.size(); ++r) w.push_back(e.basis.weights(r));
        je["weights"] = std::move(w);
        break;
      }
    }
    elements.push_back(std::move(je));
  }
  j["elements"] = std::move(elements);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << j.dump(1) << "\n";
}

}  // namespace memfem
