// ksnc — derive noncontextuality inequalities from Kochen-Specker inequalities.
//
// Subcommands: list-corpus, inspect, verify-ks, bounds, derive, quantum.
// Exit codes: 0 success, 2 input error, 3 infeasible request (e.g. a quantum
// computation on an adjacency-only ray set).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksnc/ksnc.hpp"

namespace {

using namespace ksnc;

struct Options {
  std::string ray_set;
  std::optional<std::string> expr;
  std::string lambdas;
  std::string kind = "relaxed";
  std::optional<double> tolerance;
  bool json = false;
};

std::string bitstring(const Assignment& a) {
  std::string s;
  for (auto v : a) s += v ? '1' : '0';
  return s;
}

std::string envelope_text(const BoundEnvelope& env) {
  if (!env.feasible) return "infeasible (empty assignment class)";
  std::string s = "max{ ";
  for (size_t i = 0; i < env.lines.size(); ++i) {
    if (i) s += ", ";
    s += to_string(env.lines[i]);
  }
  return s + " }";
}

std::string interval_text(const LambdaInterval& iv) {
  std::string s = iv.bounded ? "(0, " + to_string(iv.upper) + "]" : "(0, inf)";
  return s + ", default " + to_string(iv.default_choice);
}

std::vector<Rational> parse_lambdas(const std::string& list) {
  std::vector<Rational> out;
  size_t start = 0;
  while (start <= list.size()) {
    const size_t comma = list.find(',', start);
    const std::string tok =
        list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    Rational lam = parse_rational(tok);
    if (!(lam > 0)) throw InputError("lambda must be positive, got " + tok);
    out.push_back(std::move(lam));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

Json ray_set_summary(const RaySet& rs, const OrthogonalityGraph& g, const BasisList& bases) {
  Json j;
  j["source"] = rs.source;
  j["mu"] = rs.mu();
  j["dim"] = rs.dim;
  j["has_vectors"] = rs.has_vectors();
  j["edge_count"] = g.edges.size();
  j["L"] = bases.count();
  return j;
}

int cmd_list_corpus(const Options& opt) {
  if (opt.json) {
    Json doc;
    doc["command"] = "list-corpus";
    Json arr = Json::array();
    for (const auto& e : corpus_entries()) {
      Json ej;
      ej["key"] = e.key;
      ej["title"] = e.title;
      ej["dim"] = e.dim;
      ej["mu"] = e.mu;
      arr.push_back(std::move(ej));
    }
    doc["entries"] = std::move(arr);
    emit(doc);
  } else {
    for (const auto& e : corpus_entries())
      std::printf("%-12s mu=%-3d dim=%d  %s\n", e.key.c_str(), e.mu, e.dim, e.title.c_str());
  }
  return 0;
}

int cmd_inspect(const Options& opt) {
  const RaySet rs = load_ray_set(opt.ray_set, opt.tolerance);
  const auto g = build_orthogonality_graph(rs);
  const auto bases = enumerate_bases(g, rs.dim);
  if (opt.json) {
    Json doc;
    doc["command"] = "inspect";
    doc["ray_set"] = ray_set_summary(rs, g, bases);
    Json edges = Json::array();
    for (const auto& [i, j] : g.edges) edges.push_back({i, j});
    doc["edges"] = std::move(edges);
    Json bj = Json::array();
    for (const auto& b : bases.bases) bj.push_back(b);
    doc["bases"] = std::move(bj);
    emit(doc);
    return 0;
  }
  std::printf("ray set: %s\n", rs.source.c_str());
  std::printf("mu = %d, dim = %d%s\n", rs.mu(), rs.dim,
              rs.has_vectors() ? "" : " (adjacency-only)");
  std::printf("orthogonal pairs (edges): %zu\n", g.edges.size());
  std::printf("orthogonal bases (L): %d\n", bases.count());
  for (size_t a = 0; a < bases.bases.size(); ++a) {
    std::string s;
    for (int k : bases.bases[a]) s += (s.empty() ? "P" : ", P") + std::to_string(k);
    std::printf("  S^%zu = { %s }\n", a + 1, s.c_str());
  }
  return 0;
}

int cmd_verify_ks(const Options& opt) {
  const RaySet rs = load_ray_set(opt.ray_set, opt.tolerance);
  const auto g = build_orthogonality_graph(rs);
  const auto bases = enumerate_bases(g, rs.dim);
  const auto cert = certify_ks_set(g, bases);
  if (opt.json) {
    Json doc;
    doc["command"] = "verify-ks";
    doc["ray_set"] = ray_set_summary(rs, g, bases);
    doc["certificate"] = ks_certificate_to_json(cert);
    emit(doc);
    return 0;
  }
  std::printf("KS set: %s\n", cert.is_ks ? "yes" : "no");
  if (cert.is_ks)
    std::printf("certificate: exhaustion, %llu search nodes, no obeying assignment exists\n",
                static_cast<unsigned long long>(cert.nodes_explored));
  else
    std::printf("certificate: obeying assignment %s\n", bitstring(*cert.obeying).c_str());
  return 0;
}

void print_class_max(const char* label, const ClassMaximum& m) {
  if (m.feasible)
    std::printf("%s = %s   (argmax %s)\n", label, to_string(m.value).c_str(),
                bitstring(m.argmax).c_str());
  else
    std::printf("%s : infeasible (empty assignment class)\n", label);
}

int cmd_bounds(const Options& opt) {
  if (!opt.expr) throw InputError("bounds requires --expr");
  const RaySet rs = load_ray_set(opt.ray_set, opt.tolerance);
  const auto g = build_orthogonality_graph(rs);
  const auto bases = enumerate_bases(g, rs.dim);
  const Expression F = parse_expression(*opt.expr, rs.mu(), &g);
  if (!lambda_free(F)) throw InputError("bounds f and f' apply to a lambda-free functional");
  const auto bounds = compute_bounds(F, g, bases);
  if (opt.json) {
    Json doc;
    doc["command"] = "bounds";
    doc["ray_set"] = ray_set_summary(rs, g, bases);
    doc["F"] = to_string(F);
    doc["bounds"] = bounds_report_to_json(bounds);
    emit(doc);
    return 0;
  }
  std::printf("F = %s\n", to_string(F).c_str());
  print_class_max("f  (KS-obeying max) ", bounds.ks);
  print_class_max("f' (KS-violating max)", bounds.exks);
  return 0;
}

int cmd_derive(const Options& opt) {
  const RaySet rs = load_ray_set(opt.ray_set, opt.tolerance);
  const BoundKind kind = opt.kind == "tight" ? BoundKind::tight : BoundKind::relaxed;
  const Derivation d = derive(rs, opt.expr, kind);

  std::vector<Rational> lambdas;
  if (!opt.lambdas.empty())
    lambdas = parse_lambdas(opt.lambdas);
  else
    lambdas.push_back(d.inequality.lambda.default_choice);

  if (opt.json) {
    Json doc;
    doc["command"] = "derive";
    doc["ray_set"] = ray_set_summary(rs, d.graph, d.bases);
    Json bj = Json::array();
    for (const auto& b : d.bases.bases) bj.push_back(b);
    doc["bases"] = std::move(bj);
    doc["ks_certificate"] = ks_certificate_to_json(d.ks);
    doc["F"] = d.ks_shortcut ? Json() : Json(to_string(d.F));
    doc["bounds"] = bounds_report_to_json(d.bounds);
    doc["inequality"] = inequality_to_json(d.inequality);
    Json evals = Json::array();
    for (const auto& lam : lambdas) {
      Json ej;
      ej["lambda"] = rational_to_json(lam);
      ej["bound"] = rational_to_json(d.inequality.bound.value_at(lam));
      ej["functional"] = to_string(substitute_lambda(d.inequality.functional, lam));
      if (rs.has_vectors())
        ej["quantum"] = quantum_report_to_json(verify_violation(d.inequality, rs, lam));
      else
        ej["quantum"] = Json();
      evals.push_back(std::move(ej));
    }
    doc["evaluations"] = std::move(evals);
    if (!rs.has_vectors()) doc["note"] = "quantum step skipped: vectors required";
    emit(doc);
    return 0;
  }

  std::printf("ray set: %s  (mu=%d, dim=%d, edges=%zu, L=%d)\n", rs.source.c_str(), rs.mu(),
              rs.dim, d.graph.edges.size(), d.bases.count());
  std::printf("KS set: %s\n", d.ks.is_ks ? "yes" : "no");
  if (d.ks_shortcut)
    std::printf("F: omitted (KS-set shortcut: F~ needs no source inequality)\n");
  else
    std::printf("F  = %s\n", to_string(d.F).c_str());
  print_class_max("f ", d.bounds.ks);
  print_class_max("f'", d.bounds.exks);
  std::printf("lambda interval: %s\n", interval_text(d.inequality.lambda).c_str());
  std::printf("F~ = %s\n", to_string(d.inequality.functional).c_str());
  std::printf("%s bound: <F~>  <=  %s\n", kind == BoundKind::tight ? "tight" : "relaxed",
              envelope_text(d.inequality.bound).c_str());
  for (const auto& lam : lambdas) {
    const auto spec = specialize_at_lambda(d.inequality, lam);
    std::printf("at lambda = %s: bound = %s%s\n", to_string(lam).c_str(),
                to_string(spec.bound).c_str(),
                spec.lambda_in_interval ? "" : "  [warning: lambda outside guaranteed interval]");
    if (rs.has_vectors()) {
      const auto qr = verify_violation(d.inequality, rs, lam);
      std::printf("  quantum: min = %.9f, max = %.9f, bound = %.9f  ->  %s\n", qr.min_value,
                  qr.max_value, qr.classical_bound, to_cstring(qr.violation));
    }
  }
  if (!rs.has_vectors()) std::printf("quantum step skipped: vectors required\n");
  return 0;
}

int cmd_quantum(const Options& opt) {
  if (!opt.expr) throw InputError("quantum requires --expr");
  const RaySet rs = load_ray_set(opt.ray_set, opt.tolerance);
  if (!rs.has_vectors()) throw VectorsRequiredError();
  const auto g = build_orthogonality_graph(rs);
  const Expression e = parse_expression(*opt.expr, rs.mu(), &g);
  std::vector<Rational> lambdas =
      opt.lambdas.empty() ? std::vector<Rational>{Rational(1)} : parse_lambdas(opt.lambdas);

  if (opt.json) {
    Json doc;
    doc["command"] = "quantum";
    doc["source"] = rs.source;
    doc["expression"] = to_string(e);
    Json reports = Json::array();
    for (const auto& lam : lambdas) {
      const Matrix op = expression_operator(e, rs, to_double(lam));
      const auto eb = eigen_bounds(op);
      Json r;
      r["lambda"] = rational_to_json(lam);
      r["min_value"] = eb.min;
      r["max_value"] = eb.max;
      Json state = Json::array();
      for (const auto& c : eb.max_eigenvector) state.push_back({c.real(), c.imag()});
      r["optimal_state"] = std::move(state);
      reports.push_back(std::move(r));
    }
    doc["reports"] = std::move(reports);
    emit(doc);
    return 0;
  }
  std::printf("expression: %s\n", to_string(e).c_str());
  for (const auto& lam : lambdas) {
    const Matrix op = expression_operator(e, rs, to_double(lam));
    const auto eb = eigen_bounds(op);
    std::printf("lambda = %s: operator eigenvalues in [%.9f, %.9f]\n", to_string(lam).c_str(),
                eb.min, eb.max);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kochen-Specker / noncontextuality inequality toolkit"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool with_rayset = true) {
    if (with_rayset)
      sub->add_option("rayset", opt.ray_set, "corpus key or ray-set JSON file")->required();
    sub->add_flag("--json", opt.json, "machine-readable JSON output");
    sub->add_option("--tolerance", opt.tolerance, "orthogonality tolerance override");
  };

  auto* list = app.add_subcommand("list-corpus", "list built-in ray sets");
  add_common(list, false);
  auto* inspect = app.add_subcommand("inspect", "graph and basis structure of a ray set");
  add_common(inspect);
  auto* verify = app.add_subcommand("verify-ks", "decide whether the ray set is a KS set");
  add_common(verify);
  auto* bounds = app.add_subcommand("bounds", "classical maxima f and f' of a functional");
  add_common(bounds);
  bounds->add_option("--expr", opt.expr, "functional over P1..Pmu, e.g. \"P1+P2+P3\"");
  auto* derive = app.add_subcommand("derive", "derive a noncontextuality inequality");
  add_common(derive);
  derive->add_option("--expr", opt.expr, "source KS functional (optional for KS sets)");
  derive->add_option("--lambda", opt.lambdas, "lambda value(s), exact rationals, comma-separated");
  derive->add_option("--kind", opt.kind, "bound kind: relaxed | tight")
      ->check(CLI::IsMember({"relaxed", "tight"}));
  auto* quantum = app.add_subcommand("quantum", "operator eigenvalue bounds of an expression");
  add_common(quantum);
  quantum->add_option("--expr", opt.expr, "expression over P1..Pmu");
  quantum->add_option("--lambda", opt.lambdas, "lambda value(s), comma-separated");

  try {
    app.parse(argc, argv);
    if (list->parsed()) return cmd_list_corpus(opt);
    if (inspect->parsed()) return cmd_inspect(opt);
    if (verify->parsed()) return cmd_verify_ks(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (derive->parsed()) return cmd_derive(opt);
    if (quantum->parsed()) return cmd_quantum(opt);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ksnc::VectorsRequiredError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ksnc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
