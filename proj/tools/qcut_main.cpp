// Copyright 2026 The qcut authors
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

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "qcut/blackbox.hpp"
#include "qcut/gamma.hpp"
#include "qcut/gates.hpp"
#include "qcut/io.hpp"
#include "qcut/kak.hpp"
#include "qcut/mcsim.hpp"
#include "qcut/qpd.hpp"
#include "qcut/survey.hpp"

namespace {

using json = nlohmann::json;
using namespace qcut;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QCUT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw std::invalid_argument("QCUT_SEED is not an integer");
    }
  }
  return 0;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write output file: " + out_path);
    f << text << "\n";
  }
  std::cout << text << "\n";
}

json json_abs_u(const KAK& k) {
  json a = json::array();
  for (const cplx& c : k.u) a.push_back(std::abs(c));
  return a;
}

json json_u(const KAK& k) {
  json a = json::array();
  for (const cplx& c : k.u) a.push_back({c.real(), c.imag()});
  return a;
}

int cmd_gamma(const std::vector<std::string>& specs, const std::string& mode,
              const std::string& out) {
  json per_gate = json::array();
  std::vector<std::array<cplx, 4>> us;
  double product_of_singles = 1.0;
  for (const std::string& s : specs) {
    const KAK k = kak_decompose(resolve_gate_spec(s));
    const GammaReport r = gamma_single(k.u);
    per_gate.push_back(json{{"spec", s},
                            {"abs_u", json_abs_u(k)},
                            {"gamma_single", r.gamma},
                            {"gamma_regularized", gamma_regularized(k.u)}});
    product_of_singles *= r.gamma;
    us.push_back(k.u);
  }

  json doc{{"mode", mode},
           {"gates", per_gate},
           {"product_of_singles", product_of_singles}};
  if (mode == "single") {
    json gs = json::array();
    for (const auto& u : us) gs.push_back(gamma_single(u).gamma);
    doc["gamma"] = specs.size() == 1 ? json(gamma_single(us[0]).gamma) : json(gs);
  } else if (mode == "parallel") {
    doc["gamma"] = gamma_parallel(us).gamma;
  } else if (mode == "regularized") {
    json gs = json::array();
    for (const auto& u : us) gs.push_back(gamma_regularized(u));
    doc["gamma"] = specs.size() == 1 ? json(gamma_regularized(us[0])) : json(gs);
  } else if (mode == "blackbox") {
    // same value as the joint parallel cut
    doc["gamma"] = gamma_parallel(us).gamma;
    doc["ancilla_qubits"] = 4 * static_cast<int>(us.size());
  } else {
    throw std::invalid_argument("unknown mode: " + mode);
  }
  emit(doc, out);
  return kExitOk;
}

int cmd_kak(const std::string& spec, const std::string& out) {
  const Mat u = resolve_gate_spec(spec);
  const KAK k = kak_decompose(u);
  const double residual = frob_dist(kak_reconstruct(k), u);
  json doc{{"gate", spec},
           {"u", json_u(k)},
           {"abs_u", json_abs_u(k)},
           {"thetas", k.thetas},
           {"global_phase", k.global_phase},
           {"v1", mat_to_json(k.v1)},
           {"v2", mat_to_json(k.v2)},
           {"v3", mat_to_json(k.v3)},
           {"v4", mat_to_json(k.v4)},
           {"reconstruction_residual", residual},
           {"gamma", gamma_single(k.u).gamma}};
  emit(doc, out);
  return kExitOk;
}

int cmd_decompose(const std::vector<std::string>& specs, const std::string& mode,
                  const std::string& out) {
  std::vector<KAK> ks;
  for (const std::string& s : specs) ks.push_back(kak_decompose(resolve_gate_spec(s)));
  if (mode == "single" && ks.size() != 1)
    throw std::invalid_argument("mode single expects exactly one gate");

  const QPD q = build_parallel_cut_qpd(ks);
  const Mat target = parallel_target_unitary(ks);
  const VerifyReport rep = verify_qpd(q, target);

  std::vector<std::array<cplx, 4>> us;
  for (const KAK& k : ks) us.push_back(k.u);
  json doc = qpd_to_json(q);
  doc["verification"] = json{{"choi_error", rep.choi_error},
                             {"one_norm", q.one_norm},
                             {"gamma_closed_form", gamma_parallel(us).gamma},
                             {"pass", rep.pass}};
  emit(doc, out);
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_simulate(const std::string& qpd_path, const std::string& state_spec,
                 const std::string& obs_spec, std::int64_t shots,
                 std::uint64_t seed, int workers, const std::string& out) {
  std::ifstream f(qpd_path);
  if (!f) throw std::invalid_argument("cannot open qpd file: " + qpd_path);
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed qpd file: ") + e.what());
  }
  const QPD q = qpd_from_json(doc);

  const Vec psi = ket_from_string(state_spec);
  if (psi.size() != Eigen::Index(1) << (q.sys_a + q.sys_b))
    throw std::invalid_argument("state does not match the decomposition width");
  const Mat rho = Mat(psi * psi.adjoint());
  const Mat obs = observable_from_string(obs_spec);
  if (obs.rows() != rho.rows())
    throw std::invalid_argument("observable does not match the state width");

  const EstimatorResult r = estimate(q, rho, obs, shots, seed, workers);
  emit(json{{"mean", r.mean},
            {"stderr", r.stderr_mean},
            {"shots", r.shots},
            {"seed", r.seed},
            {"workers", r.workers},
            {"gamma_used", r.gamma_used},
            {"exact_term_sum", qpd_exact_value(q, rho, obs)}},
       out);
  return kExitOk;
}

BlackBoxChannel resolve_box_spec(const std::string& spec, int sys_a, int sys_b) {
  const int sys = sys_a + sys_b;
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream f(spec.substr(1));
    if (!f) throw std::invalid_argument("cannot open box file: " + spec.substr(1));
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("malformed box file: ") + e.what());
    }
    BlackBoxChannel b;
    b.wires = j.at("wires").get<std::vector<int>>();
    for (const json& kj : j.at("kraus")) b.kraus.push_back(mat_from_json(kj));
    return b;
  }
  std::string name = spec;
  std::string arg;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    arg = spec.substr(colon + 1);
  }
  if (name == "identity") return box_identity(sys);
  if (name == "swap") return box_boundary_swap(sys_a, sys_b);
  if (name == "local")
    return box_local_unitaries(sys_a, sys_b, arg.empty() ? 0 : std::stoull(arg));
  if (name == "depolarizing")
    return box_depolarizing(sys, arg.empty() ? 0.3 : std::stod(arg));
  if (name == "random")
    return box_random_kraus(sys, 4, arg.empty() ? 0 : std::stoull(arg));
  throw std::invalid_argument("unknown box spec: " + spec);
}

int cmd_blackbox(const std::string& plan_path,
                 const std::vector<std::string>& box_specs,
                 const std::string& state_spec, const std::string& obs_spec,
                 std::int64_t shots, std::uint64_t seed, int workers,
                 const std::string& out) {
  std::ifstream f(plan_path);
  if (!f) throw std::invalid_argument("cannot open plan file: " + plan_path);
  json pj;
  try {
    f >> pj;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed plan file: ") + e.what());
  }
  const ProtocolPlan plan = plan_from_json(pj);

  std::vector<BlackBoxChannel> boxes;
  for (const std::string& s : box_specs)
    boxes.push_back(resolve_box_spec(s, plan.sys_a, plan.sys_b));

  const Vec psi = ket_from_string(state_spec);
  const Mat rho = Mat(psi * psi.adjoint());
  const Mat obs = observable_from_string(obs_spec);

  json doc{{"plan", plan_path},
           {"overhead", blackbox_overhead(plan)},
           {"seed", seed}};
  bool pass = true;
  if (shots <= 0) {
    const BlackboxVerifyReport rep = build_blackbox_execution(plan, boxes, rho, obs);
    doc["exact"] = rep.exact;
    doc["protocol_sum"] = rep.protocol_sum;
    doc["abs_error"] = rep.abs_error;
    doc["pass"] = rep.pass;
    pass = rep.pass;
  } else {
    const EstimatorResult r =
        estimate_blackbox(plan, boxes, rho, obs, shots, seed, workers);
    doc["mean"] = r.mean;
    doc["stderr"] = r.stderr_mean;
    doc["shots"] = r.shots;
    doc["workers"] = r.workers;
    doc["gamma_used"] = r.gamma_used;
  }
  emit(doc, out);
  return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_haar_survey(std::int64_t samples, std::uint64_t seed, int bins,
                    int workers, const std::string& csv_path, int scaling_max_n,
                    const std::string& out) {
  const SurveyResult s = haar_survey(samples, seed, bins, workers);

  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw std::invalid_argument("cannot write csv file: " + csv_path);
    f << "bin_left,bin_right,count,frequency\n";
    f.precision(17);
    for (int b = 0; b < s.bins; ++b)
      f << s.bin_left(b) << ',' << s.bin_right(b) << ',' << s.counts[b] << ','
        << static_cast<double>(s.counts[b]) / s.samples << "\n";
    f << "# samples=" << s.samples << " seed=" << s.seed << " mean=" << s.mean
      << " stderr=" << s.stderr_mean << " min=" << s.min_gamma
      << " max=" << s.max_gamma << "\n";
  }

  json scaling = json::array();
  for (const ScalingRow& row : survey_scaling_table(s.mean, scaling_max_n))
    scaling.push_back(json{
        {"n", row.n}, {"single_cut", row.single_cut}, {"joint_cut", row.joint_cut}});

  emit(json{{"samples", s.samples},
            {"seed", s.seed},
            {"bins", s.bins},
            {"mean", s.mean},
            {"stderr", s.stderr_mean},
            {"min", s.min_gamma},
            {"max", s.max_gamma},
            {"csv", csv_path},
            {"scaling", scaling}},
       out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal quasiprobability cutting of two-qubit gates"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string out;
  app.add_option("--out", out, "Also write the JSON report to this file");

  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--seed", seed, "RNG seed (default: QCUT_SEED env or 0)")
      ->each([&](const std::string&) { seed_set = true; });

  int workers = 1;
  app.add_option("--workers", workers,
                 "Worker threads for survey/simulate (0 = all cores)");

  auto* g = app.add_subcommand("gamma", "Overhead of cutting the given gates");
  std::vector<std::string> g_gates;
  std::string g_mode = "single";
  g->add_option("gates", g_gates, "Gate specs")->required();
  g->add_option("--mode", g_mode, "single | parallel | regularized | blackbox");

  auto* k = app.add_subcommand("kak", "Canonical decomposition of a gate");
  std::string k_gate;
  k->add_option("gate", k_gate, "Gate spec")->required();

  auto* d = app.add_subcommand("decompose", "Build and verify a decomposition");
  std::vector<std::string> d_gates;
  std::string d_mode = "single";
  d->add_option("gates", d_gates, "Gate specs")->required();
  d->add_option("--mode", d_mode, "single | parallel");

  auto* s = app.add_subcommand("simulate", "Monte Carlo estimate from a qpd file");
  std::string s_qpd, s_state = "+0", s_obs = "ZZ";
  std::int64_t s_shots = 100000;
  s->add_option("qpd", s_qpd, "qpd-v1 JSON file")->required();
  s->add_option("--state", s_state, "Product ket over {0,1,+,-,r,l}");
  s->add_option("--observable", s_obs, "Pauli string or @matrix.json");
  s->add_option("--shots", s_shots, "Shot count");

  auto* b = app.add_subcommand("blackbox", "Run the deferred-gate protocol");
  std::string b_plan, b_state = "+0", b_obs = "ZZ";
  std::vector<std::string> b_boxes;
  std::int64_t b_shots = 0;
  b->add_option("--plan", b_plan, "bbplan-v1 JSON file")->required();
  b->add_option("--box", b_boxes,
                "identity | swap | local:seed | depolarizing:p | random:seed | @file");
  b->add_option("--state", b_state, "Product ket");
  b->add_option("--observable", b_obs, "Pauli string or @matrix.json");
  b->add_option("--shots", b_shots, "0 = exact verification, else Monte Carlo");

  auto* h = app.add_subcommand("haar-survey", "Gamma statistics over Haar gates");
  std::int64_t h_samples = 1000000;
  int h_bins = 200, h_scaling = 10;
  std::string h_csv;
  h->add_option("--samples", h_samples, "Sample count");
  h->add_option("--bins", h_bins, "Histogram bins over [1, 7]");
  h->add_option("--csv", h_csv, "Histogram CSV output path");
  h->add_option("--scaling-max-n", h_scaling, "Rows in the scaling table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!seed_set) seed = default_seed();
    if (g->parsed()) return cmd_gamma(g_gates, g_mode, out);
    if (k->parsed()) return cmd_kak(k_gate, out);
    if (d->parsed()) return cmd_decompose(d_gates, d_mode, out);
    if (s->parsed())
      return cmd_simulate(s_qpd, s_state, s_obs, s_shots, seed, workers, out);
    if (b->parsed())
      return cmd_blackbox(b_plan, b_boxes, b_state, b_obs, b_shots, seed, workers, out);
    if (h->parsed())
      return cmd_haar_survey(h_samples, seed, h_bins, workers, h_csv, h_scaling, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitInputError;
}
