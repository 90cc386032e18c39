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

#include "twirlkit/io.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "twirlkit/errors.hpp"
#include "twirlkit/rc.hpp"

namespace twirlkit {

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw Error(ErrorKind::InvalidArgument, where + ": expected a nested array");
  const std::size_t rows = j.size(), cols = j.front().size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw Error(ErrorKind::DimensionMismatch, where + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw Error(ErrorKind::InvalidArgument, where + ": non-number");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Eigen::MatrixXcd complex_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"re", "im"}, where);
  Eigen::MatrixXd re = matrix_from_json(field<Json>(j, "re", where), where + ".re");
  Eigen::MatrixXd im = j.contains("im") ? matrix_from_json(j["im"], where + ".im")
                                        : Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw Error(ErrorKind::DimensionMismatch, where + ": re and im differ in shape");
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

std::vector<double> doubles(const Json& j, const char* key, const std::string& where) {
  auto v = field<std::vector<double>>(j, key, where);
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, where + ": non-finite value");
  return v;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, where + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* a) { return item.key() == a; });
    if (!ok) throw Error(ErrorKind::InvalidArgument, where + ": unknown key '" + item.key() + "'");
  }
}

Json to_json(const Superoperator& s) {
  return Json{{"n_qubits", s.n_qubits()},
              {"basis", "pauli"},
              {"re", matrix_json(s.mat().real())},
              {"im", matrix_json(s.mat().imag())}};
}

Superoperator superop_from_json(const Json& j) {
  check_keys(j, {"n_qubits", "basis", "re", "im"}, "superoperator");
  if (field_or<std::string>(j, "basis", "pauli", "superoperator") != "pauli")
    throw Error(ErrorKind::InvalidArgument, "superoperator: only the pauli basis is supported");
  Json body{{"re", j.at("re")}};
  if (j.contains("im")) body["im"] = j["im"];
  Eigen::MatrixXcd m = complex_from_json(body, "superoperator");
  const int n = qubits_from_dim(m.rows(), 4);
  if (j.contains("n_qubits") && field<int>(j, "n_qubits", "superoperator") != n)
    throw Error(ErrorKind::DimensionMismatch, "superoperator: n_qubits disagrees with size");
  return Superoperator(n, std::move(m));
}

Json to_json(const CruElement& e) {
  return Json{{"n_qubits", e.n_qubits},
              {"modulus", e.modulus},
              {"x", e.x},
              {"w", e.w},
              {"text", e.to_string()}};
}

Json to_json(const NoiseModel& m) {
  return Json{{"n_qubits", m.n_qubits}, {"p_depol", m.p_depol}, {"gammas", m.gammas},
              {"alphas", m.alphas},     {"betas", m.betas},     {"spam", m.spam},
              {"seed", m.seed}};
}

NoiseModel noise_from_json(const Json& j, int n_qubits, std::uint64_t default_seed) {
  const std::string where = "noise";
  check_keys(j, {"n_qubits", "p_depol", "gammas", "alphas", "betas", "spam", "seed"}, where);
  if (j.contains("n_qubits") && field<int>(j, "n_qubits", where) != n_qubits)
    throw Error(ErrorKind::DimensionMismatch, "noise: n_qubits disagrees with the target");
  const double p = field_or<double>(j, "p_depol", 0.98, where);
  const auto seed = field_or<std::uint64_t>(j, "seed", default_seed, where);
  std::vector<double> spam(n_qubits, 0.02);
  if (j.contains("spam")) {
    if (j["spam"].is_number()) spam.assign(n_qubits, j["spam"].get<double>());
    else spam = doubles(j, "spam", where);
  }
  const bool explicit_params = j.contains("gammas") || j.contains("alphas") || j.contains("betas");
  NoiseModel m;
  if (explicit_params) {
    m.n_qubits = n_qubits;
    m.p_depol = p;
    m.seed = seed;
    m.gammas = doubles(j, "gammas", where);
    m.alphas = doubles(j, "alphas", where);
    m.betas = doubles(j, "betas", where);
  } else {
    m = NoiseModel::sample(n_qubits, seed, p);
  }
  m.spam = spam;
  m.validate();
  return m;
}

KrausChannel kraus_from_json(const Json& j) {
  check_keys(j, {"kraus"}, "channel");
  const Json ops = field<Json>(j, "kraus", "channel");
  if (!ops.is_array() || ops.empty())
    throw Error(ErrorKind::InvalidArgument, "channel: kraus must be a non-empty list");
  std::vector<DenseOperator> k;
  for (std::size_t i = 0; i < ops.size(); ++i)
    k.push_back(complex_from_json(ops[i], "channel.kraus[" + std::to_string(i) + "]"));
  return KrausChannel(std::move(k));
}

Json to_json(const RBConfig& c) {
  return Json{{"seed", c.seed},
              {"n_qubits", c.n_qubits()},
              {"target", {{"n", c.n}, {"m", c.m}}},
              {"group", to_string(c.group)},
              {"procedure", to_string(c.procedure)},
              {"depths", c.depths},
              {"seqs_per_depth", c.seqs_per_depth},
              {"shots", c.shots == 0 ? Json("exact") : Json(c.shots)},
              {"kprime", c.kprime},
              {"noise", to_json(c.noise)}};
}

RBConfig rb_config_from_json(const Json& j) {
  const std::string where = "rb config";
  check_keys(j, {"seed", "n_qubits", "target", "group", "procedure", "depths", "seqs_per_depth",
                 "shots", "noise", "threads", "kprime", "tolerances"},
             where);
  RBConfig c;
  c.seed = field_or<std::uint64_t>(j, "seed", 0, where);
  const Json target = field<Json>(j, "target", where);
  check_keys(target, {"n", "m"}, "target");
  c.n = field<int>(target, "n", "target");
  c.m = field<int>(target, "m", "target");
  if (c.n < 1 || c.m < 2) throw Error(ErrorKind::ParamOutOfRange, "target needs n >= 1, m >= 2");
  if (j.contains("n_qubits") && field<int>(j, "n_qubits", where) != c.n_qubits())
    throw Error(ErrorKind::DimensionMismatch, "n_qubits must equal target n + 1");
  c.procedure = parse_procedure(field_or<std::string>(j, "procedure", "OURS", where));
  const char* default_group = c.procedure == RBProcedure::Ours ? "optimal_S" : "cxd";
  c.group = parse_group_kind(field_or<std::string>(j, "group", default_group, where));
  c.depths = field<std::vector<int>>(j, "depths", where);
  if (j.contains("seqs_per_depth") && j["seqs_per_depth"].is_number())
    c.seqs_per_depth = {field<int>(j, "seqs_per_depth", where)};
  else
    c.seqs_per_depth = field_or<std::vector<int>>(j, "seqs_per_depth", {100}, where);
  if (j.contains("shots") && j["shots"].is_string()) {
    if (j["shots"] != "exact")
      throw Error(ErrorKind::InvalidArgument, "shots must be an integer or \"exact\"");
    c.shots = 0;
  } else {
    c.shots = field_or<int>(j, "shots", 0, where);
  }
  c.threads = field_or<int>(j, "threads", 0, where);
  c.kprime = field_or<int>(j, "kprime", 0, where);
  if (j.contains("tolerances")) check_keys(j["tolerances"], {"tol"}, "tolerances");
  c.noise = noise_from_json(field_or<Json>(j, "noise", Json::object(), where), c.n_qubits(),
                            c.seed);
  c.validate();
  return c;
}

Json summary_json(const RBResult& r) {
  Json fits = Json::array();
  auto add = [&](const std::vector<ObservableSeries>& v) {
    for (const auto& s : v)
      fits.push_back(Json{{"observable", s.label}, {"A", s.fit.A}, {"lambda", s.fit.lambda},
                          {"B", s.fit.B}, {"residual", s.fit.residual},
                          {"lambda_gate", s.lambda_gate}, {"ok", s.fit.ok}});
  };
  add(r.z);
  add(r.x);
  Json est = std::isfinite(r.fidelity_estimate) ? Json(r.fidelity_estimate) : Json(nullptr);
  return Json{{"procedure", to_string(r.procedure)},
              {"group", to_string(r.group)},
              {"F_estimate", est},
              {"F_true", r.truth},
              {"abs_error", std::isfinite(r.fidelity_estimate)
                                ? Json(std::abs(r.fidelity_estimate - r.truth))
                                : Json(nullptr)},
              {"fits_ok", r.fits_ok},
              {"fits", fits},
              {"config", to_json(r.config)}};
}

std::string results_csv(std::span<const RBResult> results) {
  std::string out = "procedure,depth,observable,mean_value,stderr,A,lambda,B,residual\n";
  for (const auto& r : results)
    for (const auto* group : {&r.z, &r.x})
      for (const auto& s : *group)
        for (std::size_t i = 0; i < r.depths.size(); ++i)
          out += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(r.procedure), r.depths[i],
                             s.label, num(s.mean[i]), num(s.stderr_[i]), num(s.fit.A),
                             num(s.fit.lambda), num(s.fit.B), num(s.fit.residual));
  return out;
}

CircuitSpec circuit_from_json(const Json& j) {
  CircuitSpec spec;
  Json gates;
  if (j.is_array()) {
    gates = j;
  } else {
    check_keys(j, {"n_qubits", "gates", "seed"}, "circuit");
    gates = field<Json>(j, "gates", "circuit");
    spec.n_qubits = field_or<int>(j, "n_qubits", 0, "circuit");
    if (j.contains("seed")) spec.seed = field<std::uint64_t>(j, "seed", "circuit");
  }
  if (!gates.is_array() || gates.empty())
    throw Error(ErrorKind::InvalidArgument, "circuit: gates must be a non-empty list");
  struct Raw {
    int n, m;
    std::vector<int> qubits;
  };
  std::vector<Raw> raw;
  int top = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string where = "circuit gate " + std::to_string(i);
    check_keys(gates[i], {"gate", "n", "m", "qubits"}, where);
    if (field<std::string>(gates[i], "gate", where) != "cnzm")
      throw Error(ErrorKind::InvalidArgument, where + ": only cnzm gates are supported");
    Raw r{field<int>(gates[i], "n", where), field<int>(gates[i], "m", where),
          field<std::vector<int>>(gates[i], "qubits", where)};
    if (r.n < 0 || r.m < 2) throw Error(ErrorKind::ParamOutOfRange, where + ": bad n or m");
    for (int q : r.qubits) top = std::max(top, q + 1);
    raw.push_back(std::move(r));
  }
  if (spec.n_qubits == 0) spec.n_qubits = top;
  if (spec.n_qubits < top)
    throw Error(ErrorKind::ParamOutOfRange, "circuit: qubit index outside n_qubits");
  if (spec.n_qubits > 6) throw Error(ErrorKind::TooLarge, "circuit: at most 6 qubits");
  for (const auto& r : raw) spec.gates.push_back(cnzm_on(spec.n_qubits, r.n, r.m, r.qubits));
  return spec;
}

}  // namespace twirlkit
