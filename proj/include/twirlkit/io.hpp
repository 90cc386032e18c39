// Copyright 2026 The twirlkit Authors
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

#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "twirlkit/channelgen.hpp"
#include "twirlkit/cru_group.hpp"
#include "twirlkit/noise.hpp"
#include "twirlkit/rb.hpp"
#include "twirlkit/superop.hpp"

namespace twirlkit {

using Json = nlohmann::json;

/// Throws InvalidArgument when j is not an object or has keys outside `allowed`.
void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where);

Json to_json(const Superoperator& s);
Superoperator superop_from_json(const Json& j);
Json to_json(const CruElement& e);
Json to_json(const NoiseModel& m);
/// Either explicit parameters or {p_depol, seed, spam} to draw them.
NoiseModel noise_from_json(const Json& j, int n_qubits, std::uint64_t default_seed = 0);
KrausChannel kraus_from_json(const Json& j);

Json to_json(const RBConfig& c);
RBConfig rb_config_from_json(const Json& j);
Json summary_json(const RBResult& r);
/// Columns procedure,depth,observable,mean_value,stderr,A,lambda,B,residual.
std::string results_csv(std::span<const RBResult> results);

struct CircuitSpec {
  int n_qubits = 0;
  std::vector<CruElement> gates;
  std::optional<std::uint64_t> seed;
};

/// Bare list or {n_qubits, gates, seed} of {gate:"cnzm", n, m, qubits}.
CircuitSpec circuit_from_json(const Json& j);

/// Reads a required field with a type check that reports `where`.
template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw Error(ErrorKind::InvalidArgument, where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::InvalidArgument, where + ": wrong type for '" + key + "'");
  }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? field<T>(j, key, where) : fallback;
}

}  // namespace twirlkit
