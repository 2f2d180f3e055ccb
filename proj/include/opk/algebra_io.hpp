#pragma once

// JSON (de)serialization of algebra presentations. Matrices are stored as
// row-major arrays of exact rational strings; the loader refuses any document
// whose structure maps fail the axiom checker.

#include <fstream>

#include <json.hpp>

#include "opk/algebra.hpp"

namespace opk {

inline OperadKind kind_parse(const std::string& s) {
  if (s == "com") return OperadKind::Com;
  if (s == "ass") return OperadKind::Ass;
  if (s == "lie") return OperadKind::Lie;
  throw std::runtime_error("unknown operad kind: " + s);
}

namespace iodetail {

inline nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(rat_str(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat mat_from_json(const nlohmann::json& j) {
  int rows = int(j.size());
  int cols = rows ? int(j.at(0).size()) : 0;
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(j.at(r).size()) != cols) throw std::runtime_error("ragged matrix in document");
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = rat_parse(j.at(r).at(c).get<std::string>());
  }
  return m;
}

}  // namespace iodetail

struct LoadedAlgebra {
  std::string name;
  AlgebraPresentation alg;
};

inline nlohmann::json save_algebra(const std::string& name, const AlgebraPresentation& a,
                                   OperadKind kind, int arity_bound) {
  nlohmann::json j;
  j["name"] = name;
  j["operad"] = kind_name(kind);
  j["arity_bound"] = arity_bound;
  j["weight"] = a.weight;
  nlohmann::json dims = nlohmann::json::object();
  for (auto& [k, d] : a.carrier.space.dims) dims[std::to_string(k)] = d;
  j["carrier"]["dims"] = std::move(dims);
  nlohmann::json diffs = nlohmann::json::object();
  for (auto& [k, d] : a.carrier.space.dims) {
    if (a.carrier.dim(k - 1) == 0) continue;
    Mat dk = a.carrier.d(k);
    if (!dk.is_zero()) diffs[std::to_string(k)] = iodetail::mat_to_json(dk);
  }
  j["carrier"]["d"] = std::move(diffs);
  j["weights"] = a.weights;
  nlohmann::json mu = nlohmann::json::object();
  for (auto& [n, per_deg] : a.mu) {
    nlohmann::json inner = nlohmann::json::object();
    for (auto& [k, m] : per_deg) inner[std::to_string(k)] = iodetail::mat_to_json(m);
    mu[std::to_string(n)] = std::move(inner);
  }
  j["mu"] = std::move(mu);
  return j;
}

inline LoadedAlgebra load_algebra(const nlohmann::json& j, bool run_checks = true) {
  LoadedAlgebra out;
  out.name = j.value("name", "unnamed");
  OperadKind kind = kind_parse(j.at("operad").get<std::string>());
  int bound = j.at("arity_bound").get<int>();
  AlgebraPresentation& a = out.alg;
  a.op = standard_operad(kind, bound);
  a.weight = j.at("weight").get<int>();
  for (auto& [ks, d] : j.at("carrier").at("dims").items())
    a.carrier.space.set_dim(std::stoi(ks), d.get<int>());
  if (j.at("carrier").contains("d"))
    for (auto& [ks, m] : j.at("carrier").at("d").items())
      a.carrier.set_d(std::stoi(ks), iodetail::mat_from_json(m));
  if (j.contains("weights")) a.weights = j.at("weights").get<std::vector<int>>();
  if (j.contains("mu"))
    for (auto& [ns, per_deg] : j.at("mu").items())
      for (auto& [ks, m] : per_deg.items())
        a.mu[std::stoi(ns)][std::stoi(ks)] = iodetail::mat_from_json(m);
  if (run_checks)
    if (auto err = check_algebra_axioms(a))
      throw std::runtime_error("algebra '" + out.name + "' rejected: " + *err);
  return out;
}

inline LoadedAlgebra load_algebra_file(const std::string& path, bool run_checks = true) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return load_algebra(j, run_checks);
}

}  // namespace opk
