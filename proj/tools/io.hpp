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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qport/bench.hpp"
#include "qport/encoding.hpp"
#include "qport/optimizer.hpp"
#include "qport/qaoa.hpp"
#include "qport/qite.hpp"

namespace qport::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A generated batch and everything derived from it.
struct InstanceFile {
  PortfolioParams params;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<Problem> problems;
};

/// Instance ids are looked up by value, not position.
const Problem& find_instance(const InstanceFile& file, int id);

json to_json(const InstanceFile& file, BitOrder order = BitOrder::canonical);

/// Rebuilds every problem from its stored prices; stored r, c, QUBO and
/// Ising data are checked against the rebuild. Throws ParseError naming the
/// offending JSON path.
InstanceFile instance_file_from_json(const json& doc);
InstanceFile read_instance_file(const std::filesystem::path& path);

/// Parses a file into JSON. Throws IoError or ParseError.
json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`, so readers
/// never observe a partial file. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const json& doc);

json to_json(const Histogram& histogram, BitOrder order = BitOrder::canonical);
Histogram histogram_from_json(const json& doc, int num_qubits,
                              BitOrder order = BitOrder::canonical);

json to_json(const NoiseModel& noise);
json to_json(const OptimizerConfig& config);
json to_json(const QaoaConfig& config);

/// Per-evaluation costs as [{i, cost}].
json trace_to_json(const OptTrace& trace);

json qaoa_result_json(int instance_id, const json& config, const QaoaResult& result,
                      BitOrder order = BitOrder::canonical);

json qite_result_json(int instance_id, const json& config, const QiteResult& result,
                      const OptTrace* compile_trace = nullptr,
                      BitOrder order = BitOrder::canonical);

/// Histogram document written next to each bench row.
json bench_row_histogram_json(const BenchRow& row, BitOrder order = BitOrder::canonical);

}  // namespace qport::io
