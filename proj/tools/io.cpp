// Copyright 2026 The qport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport::io {

namespace {

// A JSON node together with its path from the document root, so that every
// parse error can say where it happened.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool has(std::string_view key) const {
    return value_.is_object() && value_.contains(std::string(key));
  }

  Node operator[](std::string_view key) const {
    if (!value_.is_object()) fail("expected an object");
    const auto it = value_.find(std::string(key));
    const std::string child = path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    if (it == value_.end()) throw ParseError(child + ": missing field");
    return Node(*it, child);
  }

  Node operator[](std::size_t i) const {
    if (!value_.is_array()) fail("expected an array");
    if (i >= value_.size()) fail("index " + std::to_string(i) + " out of range");
    return Node(value_[i], path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  std::size_t size(std::size_t expected) const {
    if (size() != expected) {
      fail("expected " + std::to_string(expected) + " elements, got " +
           std::to_string(value_.size()));
    }
    return expected;
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  long long integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<long long>();
  }

  std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned() &&
        !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::uint64_t>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

 private:
  const json& value_;
  std::string path_;
};

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

bool close(double stored, double rebuilt) {
  return std::abs(stored - rebuilt) <= 1e-9 * (1.0 + std::abs(rebuilt));
}

void check_value(const Node& node, double rebuilt) {
  if (!close(node.number(), rebuilt)) {
    node.fail("stored value disagrees with the value rebuilt from prices");
  }
}

void check_vector(const Node& node, const Eigen::VectorXd& rebuilt) {
  node.size(static_cast<std::size_t>(rebuilt.size()));
  for (Eigen::Index i = 0; i < rebuilt.size(); ++i) {
    check_value(node[static_cast<std::size_t>(i)], rebuilt(i));
  }
}

void check_matrix(const Node& node, const Eigen::MatrixXd& rebuilt) {
  node.size(static_cast<std::size_t>(rebuilt.rows()));
  for (Eigen::Index r = 0; r < rebuilt.rows(); ++r) {
    check_vector(node[static_cast<std::size_t>(r)], rebuilt.row(r).transpose());
  }
}

BitOrder file_bit_order(const Node& root) {
  if (!root.has("bit_order")) return BitOrder::canonical;
  const Node n = root["bit_order"];
  try {
    return parse_bit_order(n.string());
  } catch (const ParameterError& e) {
    n.fail(e.what());
  }
}

Problem problem_from_json(const Node& node, const PortfolioParams& params,
                          std::uint64_t batch_seed, BitOrder order) {
  PortfolioInstance inst;
  inst.params = params;
  inst.id = static_cast<int>(node["id"].integer());
  inst.seed = node.has("seed") ? node["seed"].unsigned_integer()
                               : derive_seed(batch_seed, static_cast<std::uint64_t>(inst.id));
  const Node prices = node["prices"];
  const auto m = static_cast<std::size_t>(params.assets);
  const auto nf = static_cast<std::size_t>(params.history);
  prices.size(m);
  inst.prices.resize(params.assets, params.history);
  for (std::size_t u = 0; u < m; ++u) {
    const Node row = prices[u];
    row.size(nf);
    for (std::size_t l = 0; l < nf; ++l) {
      const double v = row[l].number();
      if (!(v > 0.0)) row[l].fail("price must be positive");
      inst.prices(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(l)) = v;
    }
  }

  Problem prob;
  try {
    prob = make_problem(std::move(inst));
  } catch (const Error& e) {
    node.fail(e.what());
  }

  if (node.has("r")) check_vector(node["r"], prob.summary.expected_return);
  if (node.has("c")) check_matrix(node["c"], prob.summary.covariance);
  if (node.has("qubo")) {
    const Node q = node["qubo"];
    check_vector(q["q"], prob.qubo.q);
    check_matrix(q["Q"], prob.qubo.Q);
    check_value(q["gamma"], prob.qubo.gamma);
  }
  if (node.has("ising")) {
    const Node s = node["ising"];
    check_vector(s["h"], prob.ising.h);
    check_matrix(s["J"], prob.ising.J);
    check_value(s["delta"], prob.ising.delta);
    check_value(s["E_g"], prob.ising.ground->energy);
    const Node g = s["ground_bitstring"];
    Bitstring stored;
    try {
      stored = parse_bitstring(g.string(), order);
    } catch (const Error& e) {
      g.fail(e.what());
    }
    if (stored.n != prob.ising.n || stored != prob.ising.ground->bits) {
      g.fail("stored ground bitstring disagrees with the brute-force ground state");
    }
  }
  return prob;
}

}  // namespace

const Problem& find_instance(const InstanceFile& file, int id) {
  for (const Problem& p : file.problems) {
    if (p.instance.id == id) return p;
  }
  throw ParameterError("instance id " + std::to_string(id) + " not found");
}

json to_json(const InstanceFile& file, BitOrder order) {
  const PortfolioParams& p = file.params;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["m"] = p.assets;
  doc["w"] = p.slices;
  doc["N_f"] = p.history;
  doc["b"] = p.budget;
  doc["theta"] = {p.theta.return_weight, p.theta.risk_weight, p.theta.budget_weight};
  doc["seed"] = file.seed;
  doc["timestamp"] = file.timestamp;
  doc["bit_order"] = order == BitOrder::canonical ? "canonical" : "reversed";
  json instances = json::array();
  for (const Problem& prob : file.problems) {
    json inst;
    inst["id"] = prob.instance.id;
    inst["seed"] = prob.instance.seed;
    inst["prices"] = matrix_json(prob.instance.prices);
    inst["r"] = vector_json(prob.summary.expected_return);
    inst["c"] = matrix_json(prob.summary.covariance);
    inst["qubo"] = {{"q", vector_json(prob.qubo.q)},
                    {"Q", matrix_json(prob.qubo.Q)},
                    {"gamma", prob.qubo.gamma}};
    json ising = {{"h", vector_json(prob.ising.h)},
                  {"J", matrix_json(prob.ising.J)},
                  {"delta", prob.ising.delta}};
    if (prob.ising.ground) {
      ising["E_g"] = prob.ising.ground->energy;
      ising["ground_bitstring"] = to_string(prob.ising.ground->bits, order);
    }
    inst["ising"] = std::move(ising);
    instances.push_back(std::move(inst));
  }
  doc["instances"] = std::move(instances);
  return doc;
}

InstanceFile instance_file_from_json(const json& doc) {
  const Node root(doc, "");
  const long long version = root["schema_version"].integer();
  if (version != kSchemaVersion) {
    root["schema_version"].fail("unsupported schema version " + std::to_string(version));
  }
  InstanceFile file;
  PortfolioParams& p = file.params;
  p.assets = static_cast<int>(root["m"].integer());
  p.slices = static_cast<int>(root["w"].integer());
  p.history = static_cast<int>(root["N_f"].integer());
  p.budget = root["b"].number();
  const Node theta = root["theta"];
  theta.size(3);
  p.theta = Theta{theta[0].number(), theta[1].number(), theta[2].number()};
  try {
    validate(p);
  } catch (const ParameterError& e) {
    root.fail(e.what());
  }
  file.seed = root["seed"].unsigned_integer();
  if (root.has("timestamp")) file.timestamp = root["timestamp"].string();
  const BitOrder order = file_bit_order(root);
  const Node instances = root["instances"];
  for (std::size_t i = 0; i < instances.size(); ++i) {
    file.problems.push_back(problem_from_json(instances[i], p, file.seed, order));
  }
  return file;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

InstanceFile read_instance_file(const std::filesystem::path& path) {
  const json doc = read_json(path);
  try {
    return instance_file_from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

void write_json_atomic(const std::filesystem::path& path, const json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

json to_json(const Histogram& histogram, BitOrder order) {
  json out = json::object();
  for (const auto& [x, count] : histogram.counts) {
    out[to_string(Bitstring{histogram.num_qubits, x}, order)] = count;
  }
  return out;
}

Histogram histogram_from_json(const json& doc, int num_qubits, BitOrder order) {
  const Node root(doc, "histogram");
  if (!doc.is_object()) root.fail("expected an object");
  Histogram h{num_qubits, {}};
  for (const auto& [key, value] : doc.items()) {
    const Node entry(value, "histogram." + key);
    Bitstring b;
    try {
      b = parse_bitstring(key, order);
    } catch (const Error& e) {
      entry.fail(e.what());
    }
    if (b.n != num_qubits) entry.fail("bitstring length differs from qubit count");
    h.add(b.bits, entry.unsigned_integer());
  }
  return h;
}

json to_json(const NoiseModel& noise) {
  return {{"kind", noise_kind_name(noise.kind)}, {"p", noise.error_rate}};
}

json to_json(const OptimizerConfig& config) {
  return {{"algorithm", algorithm_name(config.algorithm)},
          {"max_evals", config.max_evals},
          {"rho_begin", config.rho_begin},
          {"rho_end", config.rho_end}};
}

json to_json(const QaoaConfig& config) {
  json out = {{"layers", config.layers},
              {"mode", config.exact() ? "exact" : "sampled"},
              {"noise", to_json(config.noise)},
              {"optimizer", to_json(config.optimizer)},
              {"trajectories_per_eval", config.trajectories_per_eval},
              {"entangler", entangler_name(config.entangler)},
              {"cost_form", config.cost_form == QaoaCostForm::shifted ? "shifted" : "raw"},
              {"final_shots", config.final_shots},
              {"final_trajectories", config.final_trajectories}};
  out["shots"] = config.shots ? json(*config.shots) : json(nullptr);
  return out;
}

json trace_to_json(const OptTrace& trace) {
  json out = json::array();
  for (const Evaluation& e : trace.evaluations) {
    out.push_back({{"i", e.iteration}, {"cost", e.cost}});
  }
  return out;
}

json qaoa_result_json(int instance_id, const json& config, const QaoaResult& result,
                      BitOrder order) {
  return {{"schema_version", kSchemaVersion},
          {"instance_id", instance_id},
          {"config", config},
          {"trace", trace_to_json(result.trace)},
          {"min_energy_deviation", result.min_energy_deviation},
          {"best_cost", result.trace.best_value},
          {"histogram", to_json(result.histogram, order)},
          {"mode_bitstring", to_string(result.histogram.mode(), order)},
          {"best_params", result.best_params},
          {"initial_params", result.initial_params}};
}

json qite_result_json(int instance_id, const json& config, const QiteResult& result,
                      const OptTrace* compile_trace, BitOrder order) {
  json out = {{"schema_version", kSchemaVersion},
              {"instance_id", instance_id},
              {"config", config},
              {"mode", qite_mode_name(result.mode)},
              {"beta", result.beta},
              {"u", result.u},
              {"success_probability", result.success_probability},
              {"energy", result.energy},
              {"total_shots", result.total_shots},
              {"kept_shots", result.kept_shots},
              {"histogram", to_json(result.histogram, order)},
              {"mode_bitstring", to_string(result.histogram.mode(), order)}};
  out["compile_cost"] = result.compile_cost ? json(*result.compile_cost) : json(nullptr);
  out["trace"] = compile_trace ? trace_to_json(*compile_trace) : json::array();
  if (compile_trace) out["best_params"] = compile_trace->best_params;
  return out;
}

json bench_row_histogram_json(const BenchRow& row, BitOrder order) {
  return {{"schema_version", kSchemaVersion},
          {"instance_id", row.instance_id},
          {"solver", row.solver},
          {"mode", row.mode},
          {"noise", {{"kind", noise_kind_name(row.noise_kind)}, {"p", row.p}}},
          {"seed", row.seed},
          {"histogram", to_json(row.histogram, order)}};
}

}  // namespace qport::io
