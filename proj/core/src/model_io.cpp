// Copyright 2026 The eepc Authors
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

#include "eepc/model_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

constexpr char kHeader[] = "# eepc network model v1";

void write_row(std::ostream& os, const char* kind, std::size_t k, long long j, long long n,
               double value) {
  os << kind << ',' << k << ',' << j << ',' << n << ',' << value << '\n';
}

}  // namespace

void write_model_csv(const NetworkModel& model, std::ostream& os) {
  const auto saved = os.precision();
  os << std::setprecision(17);
  os << kHeader << '\n';
  os << "num_users,num_blocks,bandwidth_hz\n";
  os << model.num_users << ',' << model.num_blocks << ',' << model.bandwidth_hz << '\n';
  os << "kind,user,peer,block,value\n";
  for (std::size_t k = 0; k < model.num_users; ++k) {
    for (std::size_t n = 0; n < model.num_blocks; ++n) {
      write_row(os, "direct_gain", k, -1, static_cast<long long>(n), model.direct(k, n));
      write_row(os, "self_gain", k, -1, static_cast<long long>(n), model.self(k, n));
      write_row(os, "noise_power", k, -1, static_cast<long long>(n), model.noise(k, n));
      for (std::size_t j = 0; j < model.num_users; ++j) {
        if (j == k) continue;
        write_row(os, "cross_gain", k, static_cast<long long>(j), static_cast<long long>(n),
                  model.cross(k, j, n));
      }
    }
    write_row(os, "max_power", k, -1, -1, model.max_power[k]);
    write_row(os, "circuit_power", k, -1, -1, model.circuit_power[k]);
    write_row(os, "rate_target", k, -1, -1, model.rate_target[k]);
    write_row(os, "weight", k, -1, -1, model.weight[k]);
  }
  os << std::setprecision(static_cast<int>(saved));
}

NetworkModel read_model_csv(std::istream& is, const std::string& source_name) {
  std::string line;
  auto bad = [&source_name](int n, const std::string& what) -> ConfigError {
    return ConfigError(source_name + ":" + std::to_string(n) + ": " + what);
  };
  int number = 0;

  if (!std::getline(is, line) || line != kHeader) throw bad(1, "missing model header");
  ++number;
  if (!std::getline(is, line)) throw bad(2, "missing dimension header");
  ++number;
  if (!std::getline(is, line)) throw bad(3, "missing dimensions");
  ++number;
  std::size_t num_users = 0, num_blocks = 0;
  double bandwidth = 0.0;
  {
    std::istringstream row(line);
    char c1, c2;
    if (!(row >> num_users >> c1 >> num_blocks >> c2 >> bandwidth) || c1 != ',' || c2 != ',') {
      throw bad(number, "malformed dimension row");
    }
  }
  if (!std::getline(is, line)) throw bad(4, "missing column header");
  ++number;

  NetworkModel m = NetworkModel::sized(num_users, num_blocks);
  m.bandwidth_hz = bandwidth;

  while (std::getline(is, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string kind, k_s, j_s, n_s, v_s;
    if (!std::getline(row, kind, ',') || !std::getline(row, k_s, ',') ||
        !std::getline(row, j_s, ',') || !std::getline(row, n_s, ',') ||
        !std::getline(row, v_s)) {
      throw bad(number, "malformed coefficient row");
    }
    std::size_t k = 0;
    long long j = -1, n = -1;
    double value = 0.0;
    try {
      k = std::stoul(k_s);
      j = std::stoll(j_s);
      n = std::stoll(n_s);
      value = std::stod(v_s);
    } catch (const std::exception&) {
      throw bad(number, "malformed numeric field");
    }
    if (k >= num_users) throw bad(number, "user index out of range");
    if (kind == "direct_gain") {
      m.direct(k, static_cast<std::size_t>(n)) = value;
    } else if (kind == "self_gain") {
      m.self(k, static_cast<std::size_t>(n)) = value;
    } else if (kind == "noise_power") {
      m.noise(k, static_cast<std::size_t>(n)) = value;
    } else if (kind == "cross_gain") {
      m.cross(k, static_cast<std::size_t>(j), static_cast<std::size_t>(n)) = value;
    } else if (kind == "max_power") {
      m.max_power[k] = value;
    } else if (kind == "circuit_power") {
      m.circuit_power[k] = value;
    } else if (kind == "rate_target") {
      m.rate_target[k] = value;
    } else if (kind == "weight") {
      m.weight[k] = value;
    } else {
      throw bad(number, "unknown coefficient kind '" + kind + "'");
    }
  }
  m.validate();
  return m;
}

void write_model_csv_file(const NetworkModel& model, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError(path + ": cannot open for writing");
  write_model_csv(model, os);
}

NetworkModel read_model_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open model file");
  return read_model_csv(is, path);
}

}  // namespace eepc
