#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tropdiv/common.hpp"
#include "tropdiv/compress.hpp"
#include "tropdiv/division.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/network.hpp"
#include "tropdiv/tropical.hpp"

namespace tropdiv {

using json = nlohmann::json;

// Polynomial wire format: {"dim": d, "terms": [{"a": [..d..], "b": real}]}.
inline json poly_to_json(const TropicalPolynomial& p) {
  json terms = json::array();
  for (const Term& t : p.terms()) {
    json a = json::array();
    for (int k = 0; k < t.degree.size(); ++k) a.push_back(t.degree[k]);
    terms.push_back({{"a", a}, {"b", t.coeff}});
  }
  return {{"dim", p.dim()}, {"terms", terms}};
}

inline json poly_to_json(const LatticePolynomial& p) {
  return poly_to_json(p.to_polynomial());
}

inline TropicalPolynomial poly_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("polynomial: expected an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw parse_error("polynomial: missing or non-integer field 'dim'");
  if (!j.contains("terms") || !j["terms"].is_array())
    throw parse_error("polynomial: missing or non-array field 'terms'");
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw parse_error("polynomial: field 'dim' must be positive");
  std::vector<Term> terms;
  for (const auto& tj : j["terms"]) {
    if (!tj.is_object() || !tj.contains("a") || !tj.contains("b"))
      throw parse_error("polynomial: each term needs fields 'a' and 'b'");
    if (!tj["a"].is_array() || static_cast<int>(tj["a"].size()) != dim)
      throw parse_error("polynomial: field 'a' must be an array of length dim");
    if (!tj["b"].is_number())
      throw parse_error("polynomial: field 'b' must be a number");
    Eigen::VectorXd a(dim);
    for (int k = 0; k < dim; ++k) {
      if (!tj["a"][k].is_number())
        throw parse_error("polynomial: field 'a' must contain numbers");
      a[k] = tj["a"][k].get<double>();
    }
    terms.push_back({a, tj["b"].get<double>()});
  }
  try {
    return TropicalPolynomial(dim, std::move(terms));
  } catch (const input_error& e) {
    throw parse_error(std::string("polynomial: ") + e.what());
  }
}

inline json division_result_to_json(const DivisionResult& r) {
  return {{"quotient", poly_to_json(r.quotient)},
          {"remainder", poly_to_json(r.remainder)},
          {"exact", r.exact}};
}

// Model wire format: {"W1": [[..]], "b1": [..], "w2": [..], "b2": real}.
// Doubles are emitted shortest-round-trip, so reload is bit-exact.
inline json model_to_json(const TwoLayerNet& net) {
  json W1 = json::array();
  for (int i = 0; i < net.W1.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < net.W1.cols(); ++k) row.push_back(net.W1(i, k));
    W1.push_back(row);
  }
  json b1 = json::array(), w2 = json::array();
  for (int i = 0; i < net.b1.size(); ++i) b1.push_back(net.b1[i]);
  for (int i = 0; i < net.w2.size(); ++i) w2.push_back(net.w2[i]);
  return {{"W1", W1}, {"b1", b1}, {"w2", w2}, {"b2", net.b2}};
}

inline TwoLayerNet model_from_json(const json& j) {
  for (const char* key : {"W1", "b1", "w2"})
    if (!j.contains(key) || !j[key].is_array())
      throw parse_error(std::string("model: missing or non-array field '") +
                        key + "'");
  if (!j.contains("b2") || !j["b2"].is_number())
    throw parse_error("model: missing or non-number field 'b2'");
  const auto& W1 = j["W1"];
  const int n1 = static_cast<int>(W1.size());
  if (n1 < 1) throw parse_error("model: field 'W1' must be nonempty");
  if (!W1[0].is_array())
    throw parse_error("model: field 'W1' must be a matrix");
  const int d = static_cast<int>(W1[0].size());
  TwoLayerNet net;
  net.W1.resize(n1, d);
  for (int i = 0; i < n1; ++i) {
    if (!W1[i].is_array() || static_cast<int>(W1[i].size()) != d)
      throw parse_error("model: ragged row in field 'W1'");
    for (int k = 0; k < d; ++k) {
      if (!W1[i][k].is_number())
        throw parse_error("model: field 'W1' must contain numbers");
      net.W1(i, k) = W1[i][k].get<double>();
    }
  }
  if (static_cast<int>(j["b1"].size()) != n1 ||
      static_cast<int>(j["w2"].size()) != n1)
    throw parse_error("model: fields 'b1'/'w2' must match W1 row count");
  net.b1.resize(n1);
  net.w2.resize(n1);
  for (int i = 0; i < n1; ++i) {
    if (!j["b1"][i].is_number() || !j["w2"][i].is_number())
      throw parse_error("model: fields 'b1'/'w2' must contain numbers");
    net.b1[i] = j["b1"][i].get<double>();
    net.w2[i] = j["w2"][i].get<double>();
  }
  net.b2 = j["b2"].get<double>();
  net.validate();
  return net;
}

inline json report_to_json(const CompressionReport& r) {
  return {{"schema_version", r.schema_version},
          {"dataset", r.dataset},
          {"model", r.model},
          {"fraction", r.fraction},
          {"original_neurons", r.original_neurons},
          {"compressed_neurons", r.compressed_neurons},
          {"positive_neurons", r.positive_neurons},
          {"negative_neurons", r.negative_neurons},
          {"zero_filled", r.zero_filled},
          {"phase2_bias", r.phase2_bias},
          {"preactivation_rmse", r.preactivation_rmse},
          {"accuracy_before", r.accuracy_before},
          {"accuracy_after", r.accuracy_after},
          {"sample_count", r.sample_count},
          {"seed", r.seed}};
}

inline CompressionReport report_from_json(const json& j) {
  CompressionReport r;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw parse_error("report: missing field 'schema_version'");
  r.schema_version = j["schema_version"].get<int>();
  if (r.schema_version != 1)
    throw parse_error("report: unsupported schema_version");
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key))
      throw parse_error(std::string("report: missing field '") + key + "'");
    return j[key];
  };
  r.dataset = need("dataset").get<std::string>();
  r.model = need("model").get<std::string>();
  r.fraction = need("fraction").get<double>();
  r.original_neurons = need("original_neurons").get<int>();
  r.compressed_neurons = need("compressed_neurons").get<int>();
  r.positive_neurons = need("positive_neurons").get<int>();
  r.negative_neurons = need("negative_neurons").get<int>();
  r.zero_filled = need("zero_filled").get<int>();
  r.phase2_bias = need("phase2_bias").get<double>();
  r.preactivation_rmse = need("preactivation_rmse").get<double>();
  r.accuracy_before = need("accuracy_before").get<double>();
  r.accuracy_after = need("accuracy_after").get<double>();
  r.sample_count = need("sample_count").get<int>();
  r.seed = need("seed").get<std::uint64_t>();
  return r;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
}

// Writes via a temp file in the same directory plus rename, so a failed
// command never leaves a partial output behind.
inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw parse_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline void write_json_atomic(const std::string& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace tropdiv
