// Copyright 2026 The qconic Authors.
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

#ifndef QCONIC_INSTANCE_IO_HPP_
#define QCONIC_INSTANCE_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include "qconic/error.hpp"
#include "qconic/location.hpp"

namespace qconic {

inline nlohmann::json instance_to_json(const LocationInstance& in) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : in.metadata) meta[k] = v;
  return {{"facilities", in.facilities}, {"customers", in.customers},
          {"levels", in.levels},         {"f", in.f},
          {"d", in.d},                   {"lambda", in.lambda},
          {"mu", in.mu},                 {"sigma", in.sigma},
          {"w", in.w},                   {"metadata", std::move(meta)}};
}

// Parses and validates an instance.
inline LocationInstance instance_from_json(const nlohmann::json& j) {
  LocationInstance in;
  try {
    in.facilities = j.at("facilities").get<int>();
    in.customers = j.at("customers").get<int>();
    in.levels = j.at("levels").get<int>();
    j.at("f").get_to(in.f);
    j.at("d").get_to(in.d);
    j.at("lambda").get_to(in.lambda);
    j.at("mu").get_to(in.mu);
    j.at("sigma").get_to(in.sigma);
    j.at("w").get_to(in.w);
    if (j.contains("metadata")) {
      for (const auto& [k, v] : j.at("metadata").items()) {
        in.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed instance JSON: ") + e.what());
  }
  validate_instance(in);
  return in;
}

inline std::string dump_instance(const LocationInstance& in) {
  return instance_to_json(in).dump(1) + "\n";
}

inline LocationInstance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline LocationInstance load_instance(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_instance(ss.str());
}

inline void save_instance(const LocationInstance& in, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot write instance file '" + path + "'");
  f << dump_instance(in);
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace qconic

#endif  // QCONIC_INSTANCE_IO_HPP_
