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

// Command-line front end: group queries, twirls, benchmarking runs and
// random compiling. Exit codes: 0 ok, 2 bad input, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "twirlkit/channelgen.hpp"
#include "twirlkit/cru_group.hpp"
#include "twirlkit/cxd_group.hpp"
#include "twirlkit/errors.hpp"
#include "twirlkit/io.hpp"
#include "twirlkit/parallel.hpp"
#include "twirlkit/plot.hpp"
#include "twirlkit/rb.hpp"
#include "twirlkit/rc.hpp"
#include "twirlkit/twirl.hpp"

using namespace twirlkit;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  double tol = 1e-9;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

SemidirectGroup make_group(const std::string& name, int n, int m) {
  if (name == "optimal") return CnzmGroup(n, m).group();
  if (name == "optimal_S") return optimal_s_group(n, m);
  if (name == "pauli") return pauli_group(n + 1);
  if (name == "local_dihedral") return local_dihedral_group(n + 1, m);
  if (name == "crippled") return crippled_group(n, m);
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + name + "'");
}

struct GroupArgs {
  int n = 1;
  int m = 2;
  std::string group = "optimal";
  int count = 1;
  bool enumerate = false;
  std::vector<std::string> elements;
};

Json group_info(const GroupArgs& a) {
  if (a.group == "cxd") {
    const int kp = default_kprime(a.n, a.m);
    Json out{{"group", "cxd"}, {"n_qubits", a.n + 1}, {"kprime", kp}};
    if (a.enumerate) out["size"] = cxd_enumerate(a.n + 1, kp).size();
    else out["size"] = nullptr;
    return out;
  }
  const SemidirectGroup g = make_group(a.group, a.n, a.m);
  Json gens = Json::array();
  for (const auto& e : g.generators())
    if (!e.is_identity()) gens.push_back(e.to_string());
  Json out{{"group", g.name()},
           {"n_qubits", g.n_qubits()},
           {"modulus", g.modulus()},
           {"log2_size", g.log2_order()},
           {"permutation_parts", g.perm_parts().size()},
           {"lattice_order", g.lattice_order()},
           {"orbits", quotient_orbits(g)},
           {"generators", gens}};
  if (auto o = g.order()) out["size"] = *o;
  else out["size"] = nullptr;
  if (a.group == "optimal") out["kappa"] = CnzmGroup(a.n, a.m).kappa();
  if (a.enumerate) out["enumerated_size"] = g.enumerate().size();
  return out;
}

Json group_member(const GroupArgs& a, const CruElement& e) {
  bool member = false;
  if (a.group == "optimal") {
    member = CnzmGroup(a.n, a.m).is_member(e);
  } else {
    const SemidirectGroup g = make_group(a.group, a.n, a.m);
    std::vector<CruElement> all;
    try {
      all = g.enumerate();
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::CapExceeded) throw;
      throw Error(ErrorKind::TooLarge, "membership needs enumeration and the group is too large");
    }
    const CruElement ee = e.with_modulus(g.modulus());
    member = std::find(all.begin(), all.end(), ee) != all.end();
  }
  return Json{{"element", e.to_string()}, {"member", member}};
}

int run_group(const std::string& action, const GroupArgs& a, const Globals& gl) {
  if (action == "info") {
    std::cout << group_info(a).dump(2) << "\n";
    return 0;
  }
  if (a.group == "cxd") {
    if (action != "sample")
      throw Error(ErrorKind::InvalidArgument, "cxd supports info and sample only");
    std::mt19937_64 rng(derive_seed(gl.seed, 1));
    Json out = Json::array();
    for (int i = 0; i < a.count; ++i)
      out.push_back(cxd_sample(a.n + 1, default_kprime(a.n, a.m), rng).to_string());
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  const SemidirectGroup g = make_group(a.group, a.n, a.m);
  auto parse = [&](std::size_t i) {
    if (a.elements.size() <= i) throw Error(ErrorKind::InvalidArgument, "missing element argument");
    CruElement e = CruElement::parse(a.elements[i], g.modulus());
    if (e.n_qubits != g.n_qubits())
      throw Error(ErrorKind::DimensionMismatch, "element acts on the wrong number of qubits");
    return e;
  };
  Json out;
  if (action == "sample") {
    if (a.count < 1) throw Error(ErrorKind::ParamOutOfRange, "--count must be >= 1");
    std::mt19937_64 rng(derive_seed(gl.seed, 1));
    out = Json::array();
    for (int i = 0; i < a.count; ++i) out.push_back(g.sample(rng).to_string());
  } else if (action == "mult") {
    out = Json{{"product", cru_multiply(parse(0), parse(1)).to_string()}};
  } else if (action == "inverse") {
    out = Json{{"inverse", cru_inverse(parse(0)).to_string()}};
  } else {
    out = group_member(a, parse(0));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

Superoperator channel_from_json(const Json& j, int n_qubits, std::uint64_t seed) {
  const std::string where = "channel";
  const std::string type = field<std::string>(j, "type", where);
  Json body = j;
  body.erase("type");
  if (type == "random") {
    check_keys(body, {"strength", "seed", "env_dim"}, where);
    return random_cptp(n_qubits, field<double>(body, "strength", where),
                       field_or<std::uint64_t>(body, "seed", seed, where),
                       field_or<int>(body, "env_dim", 4, where))
        .superop();
  }
  if (type == "depolarizing") {
    check_keys(body, {"p"}, where);
    return depolarizing(n_qubits, field<double>(body, "p", where)).superop();
  }
  if (type == "noise_model") return build_noise(noise_from_json(body, n_qubits, seed));
  if (type == "kraus") {
    KrausChannel k = kraus_from_json(body);
    if (k.n_qubits() != n_qubits) throw Error(ErrorKind::DimensionMismatch, "kraus size");
    return k.superop();
  }
  if (type == "superoperator") {
    Superoperator s = superop_from_json(body);
    if (s.n_qubits() != n_qubits) throw Error(ErrorKind::DimensionMismatch, "superoperator size");
    return s;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown channel type '" + type + "'");
}

int run_twirl(const std::string& path, const std::string& out_path, const Globals& gl) {
  const Json j = read_json(path);
  const std::string where = "twirl config";
  check_keys(j, {"seed", "n_qubits", "target", "group", "channel", "method", "samples",
                 "tolerances", "threads"},
             where);
  const std::uint64_t seed = gl.seed_given ? gl.seed : field_or<std::uint64_t>(j, "seed", 0, where);
  const Json target = field<Json>(j, "target", where);
  check_keys(target, {"n", "m"}, "target");
  const int n = field<int>(target, "n", "target"), m = field<int>(target, "m", "target");
  if (n < 1 || m < 2) throw Error(ErrorKind::ParamOutOfRange, "target needs n >= 1, m >= 2");
  const int nq = n + 1;
  if (nq > 4) throw Error(ErrorKind::TooLarge, "twirls are limited to 4 qubits");
  if (j.contains("n_qubits") && field<int>(j, "n_qubits", where) != nq)
    throw Error(ErrorKind::DimensionMismatch, "n_qubits must equal target n + 1");
  double tol = gl.tol;
  if (j.contains("tolerances")) {
    check_keys(j["tolerances"], {"tol"}, "tolerances");
    tol = field_or<double>(j["tolerances"], "tol", tol, "tolerances");
  }
  const std::string group = field_or<std::string>(j, "group", "optimal", where);
  const std::string method = field_or<std::string>(j, "method", "exact", where);
  if (method != "exact" && method != "mc")
    throw Error(ErrorKind::InvalidArgument, "method must be exact or mc");
  const auto samples = field_or<std::size_t>(j, "samples", 16384, where);
  const int threads = gl.threads > 0 ? gl.threads : field_or<int>(j, "threads", 0, where);
  const Superoperator chan = channel_from_json(field<Json>(j, "channel", where), nq, seed);

  Superoperator twirled;
  double max_se = 0.0;
  if (group == "cxd") {
    const int kp = default_kprime(n, m);
    if (method == "exact") {
      const auto all = cxd_enumerate(nq, kp);
      twirled = twirl_over(chan, std::span<const AffinePhaseElement>(all));
    } else {
      std::mt19937_64 rng(derive_seed(seed, 2));
      TwirlEstimate est = twirl_monte_carlo(chan, cxd_sampler(nq, kp), samples, rng, threads);
      twirled = est.mean;
      max_se = est.std_error.maxCoeff();
    }
  } else {
    const SemidirectGroup g = make_group(group, n, m);
    if (method == "exact") {
      twirled = twirl_exact(chan, g);
    } else {
      std::mt19937_64 rng(derive_seed(seed, 2));
      TwirlEstimate est = twirl_monte_carlo(chan, sampler_for(g), samples, rng, threads);
      twirled = est.mean;
      max_se = est.std_error.maxCoeff();
    }
  }
  const double threshold = method == "exact" ? tol : std::max(tol, 4.0 * max_se);
  TwirlReport rep = diagonality_report(twirled, threshold);
  const Superoperator u = target_superop(CnzmGroup(n, m).target());
  Json out{{"group", group},
           {"method", method},
           {"samples", method == "exact" ? 0 : samples},
           {"threshold", threshold},
           {"max_offblock", rep.max_offblock},
           {"max_block_deviation", rep.max_block_deviation},
           {"commutator_norm_with_target", commutation_with_target(twirled, u)},
           {"partition", rep.block_partition},
           {"process_fidelity", process_fidelity(twirled)},
           {"twirled", to_json(twirled)}};
  if (method == "mc") out["max_std_error"] = max_se;
  write_text(out_path, out.dump(2) + "\n");
  return 0;
}

RBConfig load_rb_config(const std::string& path, const Globals& gl) {
  Json j = read_json(path);
  if (j.is_object()) {
    if (gl.seed_given) j["seed"] = gl.seed;
    if (gl.threads > 0) j["threads"] = gl.threads;
  }
  return rb_config_from_json(j);
}

int run_rb(const std::string& action, const std::string& config, const std::string& out,
           const std::string& plot, const std::string& summary, const Globals& gl) {
  const RBConfig cfg = load_rb_config(config, gl);
  std::vector<RBResult> results;
  if (action == "run") results.push_back(run_protocol(cfg));
  else results = run_comparison(cfg);
  write_text(out, results_csv(results));
  Json sums = Json::array();
  for (const auto& r : results) sums.push_back(summary_json(r));
  const Json doc = action == "run" ? sums.front() : sums;
  if (!summary.empty()) write_text(summary, doc.dump(2) + "\n");
  if (action == "run") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << fmt::format("{:<10}{:>14}{:>14}{:>12}\n", "procedure", "F_estimate", "F_true",
                             "abs_error");
    for (const auto& r : results)
      std::cout << fmt::format("{:<10}{:>14.8f}{:>14.8f}{:>12.2e}\n", to_string(r.procedure),
                               r.fidelity_estimate, r.truth,
                               std::abs(r.fidelity_estimate - r.truth));
  }
  if (!plot.empty()) {
    std::vector<PlotSeries> series;
    for (const auto& r : results) {
      auto s = plot_series(r);
      series.insert(series.end(), s.begin(), s.end());
    }
    write_text(plot, emit_plot(series, fmt::format("C^{}Z_{} decays", cfg.n, cfg.m)));
  }
  bool ok = true;
  for (const auto& r : results) ok = ok && r.fits_ok;
  if (!ok) std::cerr << "error [FitDiverged]: at least one decay fit failed\n";
  return ok ? 0 : 3;
}

int run_compile(const std::string& circuit, const std::string& group, const std::string& out,
                const Globals& gl) {
  const CircuitSpec spec = circuit_from_json(read_json(circuit));
  const int nq = spec.n_qubits;
  const std::uint64_t seed = gl.seed_given ? gl.seed : spec.seed.value_or(0);
  int m_all = 2;
  for (const auto& g : spec.gates) m_all = std::lcm(m_all, g.modulus);
  SemidirectGroup grp = [&]() {
    if (group == "pauli") return pauli_group(nq);
    if (group == "local_dihedral") return local_dihedral_group(nq, m_all);
    if (group == "optimal" || group == "optimal_S") {
      // Only defined for one C^nZ_m acting on the whole register.
      const CruElement& first = spec.gates.front();
      const CruElement full = cnzm_on(nq, nq - 1, first.modulus, [&] {
        std::vector<int> q(nq);
        std::iota(q.begin(), q.end(), 0);
        return q;
      }());
      for (const auto& g : spec.gates)
        if (!(g == full))
          throw Error(ErrorKind::InvalidArgument,
                      "optimal groups need every gate to be the same full-register C^nZ_m");
      return make_group(group, nq - 1, first.modulus);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown group '" + group + "'");
  }();
  std::mt19937_64 rng(derive_seed(seed, 3));
  const CompiledCircuit c =
      compile(spec.gates, grp, rng, group == "pauli" ? DressingCheck::Pauli : DressingCheck::None);
  Json original = Json::array(), dressed = Json::array();
  for (const auto& g : c.original) original.push_back(g.to_string());
  const auto seq = c.dressed();
  for (std::size_t i = 0; i < seq.size(); ++i)
    dressed.push_back(Json{{"kind", i % 2 == 0 ? "twirl" : "target"},
                           {"element", seq[i].to_string()},
                           {"modulus", seq[i].modulus}});
  Json doc{{"seed", seed},
           {"group", grp.name()},
           {"n_qubits", nq},
           {"original", original},
           {"dressed", dressed},
           {"membership_checked", c.membership_checked}};
  write_text(out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twirlkit: twirling groups, randomized benchmarking and random compiling"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  auto* seed_opt = app.add_option("--seed", gl.seed, "root seed for every random stream");
  app.add_option("--threads", gl.threads, "worker threads (fallback TWIRLKIT_THREADS)");
  app.add_option("--tol", gl.tol, "numerical tolerance for structure checks");

  auto* group = app.add_subcommand("group", "query twirling groups");
  group->require_subcommand(1);
  GroupArgs ga;
  std::vector<CLI::App*> group_cmds;
  for (const char* name : {"info", "sample", "mult", "inverse", "member"}) {
    auto* sc = group->add_subcommand(name);
    sc->add_option("--n", ga.n, "number of controls")->required();
    sc->add_option("--m", ga.m, "phase order")->required();
    sc->add_option("--group", ga.group,
                   "optimal|optimal_S|pauli|local_dihedral|crippled|cxd");
    if (std::string(name) == "info") sc->add_flag("--enumerate", ga.enumerate);
    if (std::string(name) == "sample") sc->add_option("--count", ga.count);
    if (std::string(name) != "info" && std::string(name) != "sample")
      sc->add_option("elements", ga.elements, "elements as \"X[bits] W[...]\"")->required();
    group_cmds.push_back(sc);
  }

  std::string config, out, plot, summary, circuit, group_name = "optimal";
  auto* twirl = app.add_subcommand("twirl", "twirl a channel over a group");
  twirl->add_option("--config", config)->required();
  twirl->add_option("--out", out);

  auto* rb = app.add_subcommand("rb", "randomized benchmarking");
  rb->require_subcommand(1);
  auto* rb_run = rb->add_subcommand("run", "one procedure");
  auto* rb_cmp = rb->add_subcommand("compare", "OURS, CXDn and CXDt on shared noise");
  for (auto* sc : {rb_run, rb_cmp}) {
    sc->add_option("--config", config)->required();
    sc->add_option("--out", out, "CSV path");
    sc->add_option("--plot", plot, "SVG path");
    sc->add_option("--summary", summary, "summary JSON path");
  }

  auto* comp = app.add_subcommand("compile", "random compiling of a circuit");
  comp->add_option("--circuit", circuit)->required();
  comp->add_option("--group", group_name);
  comp->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  gl.seed_given = seed_opt->count() > 0;

  try {
    for (auto* sc : group_cmds)
      if (sc->parsed()) return run_group(sc->get_name(), ga, gl);
    if (twirl->parsed()) return run_twirl(config, out, gl);
    if (rb_run->parsed())
      return run_rb("run", config, out.empty() ? "results.csv" : out, plot, summary, gl);
    if (rb_cmp->parsed())
      return run_rb("compare", config, out.empty() ? "comparison.csv" : out, plot, summary, gl);
    if (comp->parsed()) return run_compile(circuit, group_name, out, gl);
  } catch (const Error& e) {
    std::cerr << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << "\n";
    if (e.is_validation())
      std::cerr << "input formats are described by the JSON schemas in docs/\n";
    return e.is_validation() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
