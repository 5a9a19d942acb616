#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace ksnc;
using namespace ksnc_test;

namespace {

struct CorpusCase {
  RaySet rs;
  OrthogonalityGraph g;
  BasisList bases;
  Expression F;  // the standard source functional
};

CorpusCase corpus_case(const char* key) {
  CorpusCase c{corpus_ray_set(key), {}, {}, {}};
  c.g = build_orthogonality_graph(c.rs);
  c.bases = enumerate_bases(c.g, c.rs.dim);
  if (std::string(key) == "kcbs-5")
    c.F = parse_expression("P1+P2+P3+P4+P5", 5, &c.g);
  else if (std::string(key) == "yu-oh-13")
    c.F = parse_expression("P1+P2+P3+P4", 13, &c.g);
  else
    c.F = zero_expression(c.rs.mu());
  return c;
}

}  // namespace

TEST_CASE("check_ks_rules on the pentagon", "[classical]") {
  const auto c = corpus_case("kcbs-5");
  // independent set -> obeys (L = 0 so the basis rule is vacuous)
  const auto ok = check_ks_rules({1, 0, 1, 0, 0}, c.g, c.bases);
  CHECK(ok.obeys);
  CHECK(!ok.edge_witness);
  CHECK(!ok.basis_witness);
  // adjacent ones -> first edge witness
  const auto bad = check_ks_rules({1, 1, 1, 1, 1}, c.g, c.bases);
  CHECK(!bad.obeys);
  REQUIRE(bad.edge_witness);
  CHECK(*bad.edge_witness == std::make_pair(1, 2));
}

TEST_CASE("check_ks_rules reports the first failing basis", "[classical]") {
  const auto c = corpus_case("yu-oh-13");
  const auto st = check_ks_rules(Assignment(13, 0), c.g, c.bases);
  CHECK(!st.obeys);
  CHECK(!st.edge_witness);
  REQUIRE(st.basis_witness);
  CHECK(*st.basis_witness == std::make_pair(1, 0));  // basis {5,6,7} got zero ones
}

TEST_CASE("KS-set certification on the corpus", "[classical]") {
  const auto cab = corpus_case("cabello-18");
  const auto cert = certify_ks_set(cab.g, cab.bases);
  CHECK(cert.is_ks);
  CHECK(!cert.obeying);
  CHECK(cert.nodes_explored > 0);

  const auto yo = corpus_case("yu-oh-13");
  const auto ycert = certify_ks_set(yo.g, yo.bases);
  CHECK(!ycert.is_ks);
  REQUIRE(ycert.obeying);
  CHECK(check_ks_rules(*ycert.obeying, yo.g, yo.bases).obeys);

  const auto kc = corpus_case("kcbs-5");
  const auto kcert = certify_ks_set(kc.g, kc.bases);
  CHECK(!kcert.is_ks);
  REQUIRE(kcert.obeying);
  CHECK(*kcert.obeying == Assignment(5, 0));  // all-zeros obeys and is lex-smallest
}

TEST_CASE("certificate is the lex-smallest obeying assignment", "[classical][property]") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int mu = 1 + trial % 10;
    const auto g = random_graph(rng, mu, 0.4);
    const auto bases = random_designated_bases(rng, g, 1 + trial % 3, 4);
    const auto cert = certify_ks_set(g, bases);
    // oracle: scan every assignment, keep the lex-min obeying one
    std::optional<Assignment> first;
    for (std::uint32_t mask = 0; mask < (1u << mu); ++mask) {
      Assignment a = assignment_from_mask(mask, mu);
      if (oracle_obeys(a, g, bases) && (!first || a < *first)) first = a;
    }
    CHECK(cert.is_ks == !first);
    if (first) {
      REQUIRE(cert.obeying);
      CHECK(*cert.obeying == *first);
    }
    // is_ks <=> the KS-obeying class is empty
    const auto m = max_over_assignments(zero_expression(mu), g, bases, Restriction::ks_obeying,
                                        Rational(0));
    CHECK(cert.is_ks == !m.feasible);
  }
}

TEST_CASE("corpus bounds f and f'", "[classical]") {
  const auto kc = corpus_case("kcbs-5");
  const auto kb = compute_bounds(kc.F, kc.g, kc.bases);
  CHECK(kb.ks.value == Rational(2));
  CHECK(kb.exks.value == Rational(5));
  CHECK(kb.exks.argmax == Assignment(5, 1));

  const auto yo = corpus_case("yu-oh-13");
  const auto yb = compute_bounds(yo.F, yo.g, yo.bases);
  CHECK(yb.ks.value == Rational(1));
  CHECK(yb.exks.value == Rational(4));

  // KS set: the obeying class is empty, and consistency with certification
  const auto cab = corpus_case("cabello-18");
  const auto F = parse_expression("P1+P2", 18, &cab.g);
  const auto cb = compute_bounds(F, cab.g, cab.bases);
  CHECK(!cb.ks.feasible);
  CHECK(cb.exks.feasible);
  CHECK(certify_ks_set(cab.g, cab.bases).is_ks);
}

TEST_CASE("ks_violating class can be empty", "[classical]") {
  // edgeless, basis-free: every assignment obeys vacuously
  const auto g = make_graph(3, {});
  const BasisList none;
  const auto e = parse_expression("P1+P2+P3", 3);
  const auto m = max_over_assignments(e, g, none, Restriction::ks_violating, Rational(0));
  CHECK(!m.feasible);
  const auto all = max_over_assignments(e, g, none, Restriction::all, Rational(0));
  CHECK(all.feasible);
  CHECK(all.value == Rational(3));
}

TEST_CASE("branch-and-bound equals exhaustion equals the oracle", "[classical][property]") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> mu_dist(1, 16);
  std::uniform_real_distribution<double> p_dist(0.1, 0.7);
  const Rational lambdas[] = {Rational(0), Rational(1, 3), Rational(1), Rational(-2, 5)};
  for (int trial = 0; trial < 60; ++trial) {
    const int mu = mu_dist(rng);
    const auto g = random_graph(rng, mu, p_dist(rng));
    const auto bases = random_designated_bases(rng, g, 2 + trial % 3, 3);
    const auto e = random_expression(rng, g, true);
    const Rational& lam = lambdas[trial % 4];
    for (Restriction r : {Restriction::all, Restriction::ks_obeying, Restriction::ks_violating}) {
      const auto oracle = oracle_max(e, g, bases, r, lam);
      const auto ex = max_over_assignments(e, g, bases, r, lam, SearchStrategy::exhaustive);
      const auto bb = max_over_assignments(e, g, bases, r, lam, SearchStrategy::branch_and_bound);
      CHECK(ex.feasible == oracle.feasible);
      CHECK(bb.feasible == oracle.feasible);
      if (oracle.feasible) {
        CHECK(ex.value == oracle.value);
        CHECK(bb.value == oracle.value);
        CHECK(ex.argmax == oracle.argmax);
        CHECK(bb.argmax == oracle.argmax);
      }
    }
  }
}

TEST_CASE("rational fallback path agrees with the oracle", "[classical]") {
  // weights far beyond the int64 scaling range force the exact-rational engine
  std::mt19937 rng(5);
  const auto g = random_graph(rng, 8, 0.5);
  const auto bases = random_designated_bases(rng, g, 3, 2);
  Expression e = zero_expression(8);
  const Rational huge(BigInt(1) << 62);
  const Rational tiny(1, (BigInt(1) << 40) * 3);
  add_constant(e, Affine{Rational(0), huge});
  for (int i = 1; i <= 8; ++i)
    add_linear(e, i, Affine{Rational(0), (i % 2 ? tiny : -tiny) * i});
  for (const auto& [i, j] : g.edges)
    add_quadratic(e, i, j, Affine{Rational(0), tiny * (i + j)});
  for (Restriction r : {Restriction::all, Restriction::ks_obeying, Restriction::ks_violating}) {
    const auto oracle = oracle_max(e, g, bases, r, Rational(0));
    const auto ex = max_over_assignments(e, g, bases, r, Rational(0), SearchStrategy::exhaustive);
    const auto bb =
        max_over_assignments(e, g, bases, r, Rational(0), SearchStrategy::branch_and_bound);
    CHECK(ex.feasible == oracle.feasible);
    if (oracle.feasible) {
      CHECK(ex.value == oracle.value);
      CHECK(bb.value == oracle.value);
      CHECK(ex.argmax == oracle.argmax);
      CHECK(bb.argmax == oracle.argmax);
    }
  }
}

TEST_CASE("partition: max over all = max over the two classes", "[classical][property]") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 12, 0.4);
    const auto bases = random_designated_bases(rng, g, 2, 3);
    const auto e = random_expression(rng, g, false);
    const auto all = max_over_assignments(e, g, bases, Restriction::all, Rational(0));
    const auto ks = max_over_assignments(e, g, bases, Restriction::ks_obeying, Rational(0));
    const auto ex = max_over_assignments(e, g, bases, Restriction::ks_violating, Rational(0));
    REQUIRE(all.feasible);
    if (ks.feasible && ex.feasible)
      CHECK(all.value == std::max(ks.value, ex.value));
    else if (ks.feasible)
      CHECK(all.value == ks.value);
    else
      CHECK(all.value == ex.value);
  }
}

TEST_CASE("KCBS envelopes for the three restrictions", "[classical]") {
  const auto c = corpus_case("kcbs-5");
  const auto ft = build_F_tilde(c.F, c.g, c.bases);

  const auto all = bound_envelope(ft, c.g, c.bases, Restriction::all);
  const std::vector<Affine> expected_lines = {{Rational(2), Rational(0)},
                                              {Rational(3), Rational(-1)},
                                              {Rational(4), Rational(-3)},
                                              {Rational(5), Rational(-5)}};
  CHECK(all.lines == expected_lines);

  const auto ks = bound_envelope(ft, c.g, c.bases, Restriction::ks_obeying);
  const std::vector<Affine> ks_attained = {{Rational(0), Rational(0)},
                                           {Rational(1), Rational(0)},
                                           {Rational(2), Rational(0)}};
  CHECK(ks.attained == ks_attained);
  CHECK(ks.lines == std::vector<Affine>{{Rational(2), Rational(0)}});

  const auto ex = bound_envelope(ft, c.g, c.bases, Restriction::ks_violating);
  const std::vector<Affine> ex_attained = {{Rational(2), Rational(-1)},
                                           {Rational(3), Rational(-2)},
                                           {Rational(3), Rational(-1)},
                                           {Rational(4), Rational(-3)},
                                           {Rational(5), Rational(-5)}};
  CHECK(ex.attained == ex_attained);
}

TEST_CASE("upper-envelope pruning keeps touching lines", "[classical]") {
  // 4L-3 only meets the envelope at the single point lambda = 2
  const auto pruned = prune_upper_envelope({{Rational(2), Rational(0)},
                                            {Rational(3), Rational(-1)},
                                            {Rational(4), Rational(-3)},
                                            {Rational(5), Rational(-5)},
                                            {Rational(0), Rational(0)},
                                            {Rational(1), Rational(0)},
                                            {Rational(2), Rational(-1)},
                                            {Rational(3), Rational(-2)}});
  const std::vector<Affine> expected = {{Rational(2), Rational(0)},
                                        {Rational(3), Rational(-1)},
                                        {Rational(4), Rational(-3)},
                                        {Rational(5), Rational(-5)}};
  CHECK(pruned == expected);
  // lines maximal only at lambda <= 0 are dropped
  CHECK(prune_upper_envelope({{Rational(0), Rational(0)}, {Rational(1), Rational(0)}}) ==
        std::vector<Affine>{{Rational(1), Rational(0)}});
  // equal slopes: higher intercept wins
  CHECK(prune_upper_envelope({{Rational(1), Rational(0)}, {Rational(1), Rational(2)}}) ==
        std::vector<Affine>{{Rational(1), Rational(2)}});
}

TEST_CASE("envelope value matches pointwise oracle maxima", "[classical][property]") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 10, 0.5);
    const auto bases = random_designated_bases(rng, g, 2, 3);
    const auto e = random_expression(rng, g, true);
    for (Restriction r : {Restriction::all, Restriction::ks_obeying, Restriction::ks_violating}) {
      const auto env = bound_envelope(e, g, bases, r);
      for (const Rational& lam : {Rational(1, 7), Rational(1), Rational(13, 3)}) {
        const auto m = oracle_max(e, g, bases, r, lam);
        CHECK(env.feasible == m.feasible);
        if (m.feasible) CHECK(env.value_at(lam) == m.value);
      }
    }
  }
}

TEST_CASE("parametric envelope agrees with exhaustion", "[classical][property]") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_graph(rng, 2 + trial % 9, 0.5);
    const auto bases = random_designated_bases(rng, g, 2, 3);
    const auto e = random_expression(rng, g, true);
    for (Restriction r : {Restriction::all, Restriction::ks_obeying, Restriction::ks_violating}) {
      const auto ex = detail::envelope_exhaustive(e, g, bases, r);
      const auto par = detail::envelope_parametric(e, g, bases, r);
      CHECK(ex.feasible == par.feasible);
      if (!ex.feasible) continue;
      // witnesses attain their lines on both paths
      REQUIRE(ex.witnesses.size() == ex.lines.size());
      for (size_t k = 0; k < ex.lines.size(); ++k)
        CHECK(evaluate_line(e, ex.witnesses[k]) == ex.lines[k]);
      REQUIRE(par.witnesses.size() == par.lines.size());
      for (size_t k = 0; k < par.lines.size(); ++k)
        CHECK(evaluate_line(e, par.witnesses[k]) == par.lines[k]);
      // identical as functions: compare at points straddling every breakpoint
      std::vector<Rational> probes = {Rational(1, 1000), Rational(1000)};
      for (size_t a = 0; a + 1 < ex.lines.size(); ++a) {
        const Rational cross = (ex.lines[a].intercept - ex.lines[a + 1].intercept) /
                               (ex.lines[a + 1].slope - ex.lines[a].slope);
        if (cross > 0) {
          probes.push_back(cross);
          probes.push_back(cross + Rational(1, 17));
          probes.push_back(cross > Rational(1, 17) ? cross - Rational(1, 17)
                                                   : cross / 2);
        }
      }
      for (const auto& lam : probes) CHECK(ex.value_at(lam) == par.value_at(lam));
    }
  }
}

TEST_CASE("KS-obeying identity and KS-violating inequality", "[classical][property]") {
  // obeying: F~ = lambda F + L exactly; violating: F~ <= lambda F + L - 1
  std::mt19937 rng(61);
  for (const char* key : {"kcbs-5", "yu-oh-13", "cabello-18"}) {
    const auto c = corpus_case(key);
    const auto ft = build_F_tilde(c.F, c.g, c.bases);
    const Rational L(c.bases.count());
    for (int k = 0; k < 500; ++k) {
      const auto a = random_assignment(rng, c.rs.mu());
      const bool obeys = oracle_obeys(a, c.g, c.bases);
      const Affine ft_line = evaluate_line(ft, a);
      const Rational f_val = evaluate(c.F, a, Rational(0));
      for (const Rational& lam : {Rational(1, 3), Rational(1)}) {
        const Rational lhs = ft_line.at(lam);
        if (obeys)
          CHECK(lhs == lam * f_val + L);
        else
          CHECK(lhs <= lam * f_val + L - 1);
      }
    }
  }
}

TEST_CASE("basis-term value is x(2-x)", "[classical]") {
  std::mt19937 rng(71);
  for (const char* key : {"yu-oh-13", "cabello-18"}) {
    const auto c = corpus_case(key);
    const int n = c.rs.dim;
    for (const auto& basis : c.bases.bases) {
      // the basis term as a standalone expression
      Expression term = zero_expression(c.rs.mu());
      for (int k : basis) add_linear(term, k, Affine{Rational(0), Rational(1)});
      for (size_t x = 0; x < basis.size(); ++x)
        for (size_t y = x + 1; y < basis.size(); ++y)
          add_quadratic(term, basis[x], basis[y], Affine{Rational(0), Rational(-2)});
      // every placement of x ones inside the basis, random values outside
      for (int x = 0; x <= n; ++x) {
        for (std::uint32_t sel = 0; sel < (1u << n); ++sel) {
          if (std::popcount(sel) != x) continue;
          auto a = random_assignment(rng, c.rs.mu());
          for (int k = 0; k < n; ++k) a[basis[k] - 1] = (sel >> k) & 1u;
          CHECK(evaluate(term, a, Rational(0)) == Rational(x * (2 - x)));
        }
      }
    }
  }
}

TEST_CASE("max_over_assignments validates inputs", "[classical]") {
  const auto g = make_graph(3, {{1, 2}});
  const BasisList none;
  CHECK_THROWS_AS(max_over_assignments(parse_expression("P1", 2), g, none, Restriction::all,
                                       Rational(0)),
                  InputError);  // universe mismatch
  CHECK_NOTHROW(max_over_assignments(parse_expression("P1", 3), g, none, Restriction::all,
                                     Rational(0), SearchStrategy::exhaustive));
  // forced exhaustion beyond the mask range is refused ...
  const auto big = make_graph(30, {{1, 2}});
  CHECK_THROWS_AS(max_over_assignments(parse_expression("P1", 30), big, none, Restriction::all,
                                       Rational(0), SearchStrategy::exhaustive),
                  InputError);
  // ... while the automatic dispatch falls back to branch-and-bound
  const auto m = max_over_assignments(parse_expression("P1+P2-P1*P2", 30), big, none,
                                      Restriction::all, Rational(0));
  CHECK(m.value == Rational(1));
}
