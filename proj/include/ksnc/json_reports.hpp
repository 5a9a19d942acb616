#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ksnc/classical.hpp"
#include "ksnc/conversion.hpp"
#include "ksnc/expression.hpp"
#include "ksnc/ks_rules.hpp"
#include "ksnc/quantum.hpp"
#include "ksnc/rational.hpp"

// JSON forms of the report types. Key order is fixed (ordered_json) so that
// identical inputs serialize byte-identically; every report parses back
// losslessly. Rationals appear as {"num": p, "den": q}.

namespace ksnc {

using Json = nlohmann::ordered_json;

inline Json rational_to_json(const Rational& r) {
  Json j;
  const BigInt num = numerator(r), den = denominator(r);
  // int64 covers every value arising at desk scale; fall back to strings.
  static const BigInt lo = std::numeric_limits<long long>::min();
  static const BigInt hi = std::numeric_limits<long long>::max();
  if (num >= lo && num <= hi && den <= hi) {
    j["num"] = num.convert_to<long long>();
    j["den"] = den.convert_to<long long>();
  } else {
    j["num"] = num.str();
    j["den"] = den.str();
  }
  return j;
}

inline Rational rational_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw InputError("expected a rational object {num, den}");
  auto part = [](const nlohmann::json& v) {
    return v.is_string() ? BigInt(v.get<std::string>()) : BigInt(v.get<long long>());
  };
  return Rational(part(j["num"]), part(j["den"]));
}

inline Json affine_to_json(const Affine& a) {
  Json j;
  j["slope"] = rational_to_json(a.slope);
  j["intercept"] = rational_to_json(a.intercept);
  return j;
}

inline Affine affine_from_json(const nlohmann::json& j) {
  return Affine{rational_from_json(j.at("slope")), rational_from_json(j.at("intercept"))};
}

inline Json assignment_to_json(const Assignment& a) {
  Json j = Json::array();
  for (auto v : a) j.push_back(static_cast<int>(v));
  return j;
}

inline Assignment assignment_from_json(const nlohmann::json& j) {
  Assignment a;
  for (const auto& v : j) a.push_back(static_cast<std::uint8_t>(v.get<int>()));
  return a;
}

inline Json ks_status_to_json(const KSStatus& st) {
  Json j;
  j["verdict"] = st.obeys ? "obeys" : "violates";
  j["edge_witness"] =
      st.edge_witness ? Json::array({st.edge_witness->first, st.edge_witness->second}) : Json();
  if (st.basis_witness) {
    Json w;
    w["basis"] = st.basis_witness->first;
    w["ones"] = st.basis_witness->second;
    j["basis_witness"] = std::move(w);
  } else {
    j["basis_witness"] = Json();
  }
  return j;
}

inline KSStatus ks_status_from_json(const nlohmann::json& j) {
  KSStatus st;
  st.obeys = j.at("verdict").get<std::string>() == "obeys";
  if (!j.at("edge_witness").is_null())
    st.edge_witness = std::make_pair(j["edge_witness"][0].get<int>(),
                                     j["edge_witness"][1].get<int>());
  if (!j.at("basis_witness").is_null())
    st.basis_witness = std::make_pair(j["basis_witness"]["basis"].get<int>(),
                                      j["basis_witness"]["ones"].get<int>());
  return st;
}

inline Json ks_certificate_to_json(const KSCertificate& c) {
  Json j;
  j["is_ks"] = c.is_ks;
  j["obeying_assignment"] = c.obeying ? assignment_to_json(*c.obeying) : Json();
  j["nodes_explored"] = c.nodes_explored;
  return j;
}

inline KSCertificate ks_certificate_from_json(const nlohmann::json& j) {
  KSCertificate c;
  c.is_ks = j.at("is_ks").get<bool>();
  if (!j.at("obeying_assignment").is_null())
    c.obeying = assignment_from_json(j["obeying_assignment"]);
  c.nodes_explored = j.at("nodes_explored").get<std::uint64_t>();
  return c;
}

inline Json class_maximum_to_json(const ClassMaximum& m) {
  Json j;
  j["value"] = m.feasible ? rational_to_json(m.value) : Json();
  j["argmax"] = m.feasible ? assignment_to_json(m.argmax) : Json();
  return j;
}

inline ClassMaximum class_maximum_from_json(const nlohmann::json& j) {
  ClassMaximum m;
  m.feasible = !j.at("value").is_null();
  if (m.feasible) {
    m.value = rational_from_json(j["value"]);
    m.argmax = assignment_from_json(j.at("argmax"));
  }
  return m;
}

inline Json bounds_report_to_json(const BoundsReport& b) {
  Json j;
  j["f"] = class_maximum_to_json(b.ks);
  j["f_prime"] = class_maximum_to_json(b.exks);
  return j;
}

inline BoundsReport bounds_report_from_json(const nlohmann::json& j) {
  BoundsReport b;
  b.ks = class_maximum_from_json(j.at("f"));
  b.exks = class_maximum_from_json(j.at("f_prime"));
  return b;
}

inline Json envelope_to_json(const BoundEnvelope& e) {
  Json j;
  j["feasible"] = e.feasible;
  Json att = Json::array(), lines = Json::array(), wits = Json::array();
  for (const auto& a : e.attained) att.push_back(affine_to_json(a));
  for (const auto& l : e.lines) lines.push_back(affine_to_json(l));
  for (const auto& w : e.witnesses) wits.push_back(assignment_to_json(w));
  j["attained"] = std::move(att);
  j["lines"] = std::move(lines);
  j["witnesses"] = std::move(wits);
  return j;
}

inline BoundEnvelope envelope_from_json(const nlohmann::json& j) {
  BoundEnvelope e;
  e.feasible = j.at("feasible").get<bool>();
  e.attained.clear();
  e.lines.clear();
  for (const auto& a : j.at("attained")) e.attained.push_back(affine_from_json(a));
  for (const auto& l : j.at("lines")) e.lines.push_back(affine_from_json(l));
  for (const auto& w : j.at("witnesses")) e.witnesses.push_back(assignment_from_json(w));
  return e;
}

inline Json lambda_interval_to_json(const LambdaInterval& iv) {
  Json j;
  j["lower_exclusive"] = 0;
  j["upper"] = iv.bounded ? rational_to_json(iv.upper) : Json();
  j["default"] = rational_to_json(iv.default_choice);
  return j;
}

inline LambdaInterval lambda_interval_from_json(const nlohmann::json& j) {
  LambdaInterval iv;
  iv.bounded = !j.at("upper").is_null();
  if (iv.bounded) iv.upper = rational_from_json(j["upper"]);
  iv.default_choice = rational_from_json(j.at("default"));
  return iv;
}

inline Json inequality_to_json(const Inequality& ineq) {
  Json j;
  j["functional"] = to_string(ineq.functional);
  j["universe"] = ineq.functional.universe;
  j["kind"] = ineq.kind == BoundKind::relaxed ? "relaxed" : "tight";
  j["lambda_interval"] = lambda_interval_to_json(ineq.lambda);
  j["bound"] = envelope_to_json(ineq.bound);
  j["source"] = ineq.source;
  j["ks_functional"] = ineq.ks_functional;
  return j;
}

inline Inequality inequality_from_json(const nlohmann::json& j) {
  Inequality ineq;
  ineq.functional = parse_expression(j.at("functional").get<std::string>(),
                                     j.at("universe").get<int>());
  ineq.kind = j.at("kind").get<std::string>() == "relaxed" ? BoundKind::relaxed : BoundKind::tight;
  ineq.lambda = lambda_interval_from_json(j.at("lambda_interval"));
  ineq.bound = envelope_from_json(j.at("bound"));
  ineq.source = j.at("source").get<std::string>();
  ineq.ks_functional = j.at("ks_functional").get<std::string>();
  return ineq;
}

inline Json quantum_report_to_json(const QuantumReport& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["lambda_in_interval"] = r.lambda_in_interval;
  j["min_value"] = r.min_value;
  j["max_value"] = r.max_value;
  j["classical_bound"] = r.classical_bound;
  j["violation"] = to_cstring(r.violation);
  Json state = Json::array();
  for (const auto& c : r.optimal_state) state.push_back({c.real(), c.imag()});
  j["optimal_state"] = std::move(state);
  return j;
}

inline QuantumReport quantum_report_from_json(const nlohmann::json& j) {
  QuantumReport r;
  r.lambda = j.at("lambda").get<double>();
  r.lambda_in_interval = j.at("lambda_in_interval").get<bool>();
  r.min_value = j.at("min_value").get<double>();
  r.max_value = j.at("max_value").get<double>();
  r.classical_bound = j.at("classical_bound").get<double>();
  const std::string v = j.at("violation").get<std::string>();
  r.violation = v == "none"              ? Violation::none
                : v == "state_dependent" ? Violation::state_dependent
                : v == "state_independent" ? Violation::state_independent
                                           : Violation::inconclusive;
  for (const auto& c : j.at("optimal_state"))
    r.optimal_state.emplace_back(c[0].get<double>(), c[1].get<double>());
  return r;
}

}  // namespace ksnc
