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

#include "qcut/io.hpp"

#include <fstream>
#include <stdexcept>

#include "qcut/blackbox.hpp"
#include "qcut/gates.hpp"
#include "qcut/qpd.hpp"

namespace qcut {

using nlohmann::json;

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix json: expected a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix json: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row.at(c);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix json: entries must be [re, im]");
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Mat load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed matrix file " + path + ": " + e.what());
  }
  return mat_from_json(j);
}

namespace {

json instrument_to_json(const LocalInstrument& inst) {
  json ops = json::array();
  for (const InstrumentOp& op : inst.ops) {
    json o;
    switch (op.kind) {
      case OpKind::Unitary:
        o["kind"] = "unitary";
        o["wires"] = op.wires;
        o["matrix"] = mat_to_json(op.matrix);
        break;
      case OpKind::MeasureZ:
        o["kind"] = "measure_z";
        o["wires"] = op.wires;
        break;
      case OpKind::PrepareBell:
        o["kind"] = "prepare_bell";
        o["wires"] = op.wires;
        break;
    }
    ops.push_back(std::move(o));
  }
  return json{{"system_wires", inst.system_wires},
              {"ancillas", inst.ancilla_count},
              {"sign_parity_mask", inst.parity_mask},
              {"ops", std::move(ops)}};
}

LocalInstrument instrument_from_json(const json& j) {
  LocalInstrument inst;
  inst.system_wires = j.at("system_wires").get<int>();
  inst.ancilla_count = j.at("ancillas").get<int>();
  inst.parity_mask = j.at("sign_parity_mask").get<std::uint32_t>();
  for (const json& o : j.at("ops")) {
    InstrumentOp op;
    const std::string kind = o.at("kind").get<std::string>();
    op.wires = o.at("wires").get<std::vector<int>>();
    if (kind == "unitary") {
      op.kind = OpKind::Unitary;
      op.matrix = mat_from_json(o.at("matrix"));
    } else if (kind == "measure_z") {
      op.kind = OpKind::MeasureZ;
    } else if (kind == "prepare_bell") {
      op.kind = OpKind::PrepareBell;
    } else {
      throw std::invalid_argument("unknown instrument op kind: " + kind);
    }
    inst.ops.push_back(std::move(op));
  }
  return inst;
}

}  // namespace

json qpd_to_json(const QPD& q) {
  json terms = json::array();
  for (const QPDTerm& t : q.terms) {
    terms.push_back(json{{"weight", t.weight},
                         {"label", t.label},
                         {"k1", t.k1},
                         {"k2", t.k2},
                         {"inst_a", instrument_to_json(t.inst_a)},
                         {"inst_b", instrument_to_json(t.inst_b)}});
  }
  return json{{"schema", "qpd-v1"},
              {"sys_wires_a", q.sys_a},
              {"sys_wires_b", q.sys_b},
              {"one_norm", q.one_norm},
              {"terms", std::move(terms)}};
}

QPD qpd_from_json(const json& j) {
  if (j.value("schema", "") != "qpd-v1")
    throw std::invalid_argument("expected a qpd-v1 document");
  QPD q;
  q.sys_a = j.at("sys_wires_a").get<int>();
  q.sys_b = j.at("sys_wires_b").get<int>();
  q.one_norm = j.at("one_norm").get<double>();
  for (const json& tj : j.at("terms")) {
    QPDTerm t;
    t.weight = tj.at("weight").get<double>();
    t.label = tj.at("label").get<std::string>();
    t.k1 = tj.at("k1").get<std::vector<int>>();
    t.k2 = tj.at("k2").get<std::vector<int>>();
    t.inst_a = instrument_from_json(tj.at("inst_a"));
    t.inst_b = instrument_from_json(tj.at("inst_b"));
    q.terms.push_back(std::move(t));
  }
  double one = 0;
  for (const QPDTerm& t : q.terms) one += std::abs(t.weight);
  if (std::abs(one - q.one_norm) > 1e-9)
    throw std::invalid_argument("qpd-v1 document: one_norm does not match weights");
  return q;
}

json plan_to_json(const ProtocolPlan& p) {
  json gates = json::array();
  for (const PlannedGate& g : p.gates) {
    gates.push_back(json{{"matrix", mat_to_json(kak_reconstruct(g.kak))},
                         {"a_wire", g.a_wire},
                         {"b_wire", g.b_wire}});
  }
  json slots = json::array();
  for (const Slot& s : p.slots)
    slots.push_back((s.is_gate ? "gate:" : "box:") + std::to_string(s.index));
  return json{{"schema", "bbplan-v1"},
              {"sys_wires_a", p.sys_a},
              {"sys_wires_b", p.sys_b},
              {"gates", std::move(gates)},
              {"slots", std::move(slots)}};
}

ProtocolPlan plan_from_json(const json& j) {
  if (j.value("schema", "") != "bbplan-v1")
    throw std::invalid_argument("expected a bbplan-v1 document");
  ProtocolPlan p;
  p.sys_a = j.at("sys_wires_a").get<int>();
  p.sys_b = j.at("sys_wires_b").get<int>();
  for (const json& gj : j.at("gates")) {
    PlannedGate g;
    Mat u;
    if (gj.contains("matrix"))
      u = mat_from_json(gj.at("matrix"));
    else if (gj.contains("spec"))
      u = resolve_gate_spec(gj.at("spec").get<std::string>());
    else
      throw std::invalid_argument("plan gate needs a matrix or a spec");
    g.kak = kak_decompose(u);
    g.a_wire = gj.value("a_wire", 0);
    g.b_wire = gj.value("b_wire", 0);
    p.gates.push_back(std::move(g));
  }
  for (const json& sj : j.at("slots")) {
    const std::string s = sj.get<std::string>();
    Slot slot;
    if (s.rfind("gate:", 0) == 0) {
      slot.is_gate = true;
      slot.index = std::stoi(s.substr(5));
    } else if (s.rfind("box:", 0) == 0) {
      slot.is_gate = false;
      slot.index = std::stoi(s.substr(4));
    } else {
      throw std::invalid_argument("bad slot entry: " + s);
    }
    p.slots.push_back(slot);
  }
  p.validate();
  return p;
}

}  // namespace qcut
