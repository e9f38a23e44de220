#include <doctest.h>

#include "qkan/reduction.hpp"
#include "qkan/objective.hpp"
#include "qkan/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace qkan;

namespace {

BinaryPolynomial random_cubicish(std::mt19937_64& rng, int n_vars, int n_terms, int max_deg) {
  std::uniform_int_distribution<int> var(0, n_vars - 1);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  BinaryPolynomial p;
  for (int t = 0; t < n_terms; ++t) {
    std::vector<VarId> vars;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) vars.push_back(static_cast<VarId>(var(rng)));
    p.add_term(Monomial(std::move(vars)), coeff(rng));
  }
  return p;
}

Assignment extend_with_aux(Assignment a, const AuxRegistry& reg) {
  for (const auto& e : reg) a[e.aux] = a.at(e.left) * a.at(e.right);
  return a;
}

}  // namespace

TEST_CASE("penalty values: zero when consistent, w or 3w when not") {
  double w = 2.5;
  BinaryPolynomial p = penalty(10, 0, 1, w);
  auto val = [&](int a, int b, int aux) {
    return p.evaluate({{0, a}, {1, b}, {10, aux}});
  };
  // consistent rows vanish
  CHECK(val(0, 0, 0) == 0.0);
  CHECK(val(0, 1, 0) == 0.0);
  CHECK(val(1, 0, 0) == 0.0);
  CHECK(val(1, 1, 1) == 0.0);
  // inconsistent rows cost at least w
  CHECK(val(0, 0, 1) == doctest::Approx(3 * w));
  CHECK(val(0, 1, 1) == doctest::Approx(w));
  CHECK(val(1, 0, 1) == doctest::Approx(w));
  CHECK(val(1, 1, 0) == doctest::Approx(w));
}

TEST_CASE("reduce leaves quadratic input untouched") {
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1}), 2.0);
  p.add_term(Monomial({2}), -1.0);
  p.add_term(Monomial::one(), 0.5);
  QuboProblem q = reduce(p, 20.0);
  CHECK(q.registry.empty());
  CHECK(q.offset == doctest::Approx(0.5));
  CHECK(q.linear.at(2) == doctest::Approx(-1.0));
  CHECK(q.quadratic.at({0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("reduce a single cubic term with one aux") {
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2}), 1.0);
  QuboProblem q = reduce(p, 20.0);
  REQUIRE(q.registry.size() == 1);
  const AuxEntry& e = q.registry[0];
  CHECK(e.left < e.right);
  CHECK(e.aux >= 3);
  // penalty weight is w_factor times the max |coefficient| of the reduced
  // polynomial (here 1)
  CHECK(q.penalty_weight == doctest::Approx(20.0));
}

TEST_CASE("reduced problem agrees with the original on consistent assignments") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryPolynomial p = random_cubicish(rng, 6, 10, 5);
    QuboProblem q = reduce(p, 20.0);
    CHECK(q.to_polynomial().max_degree() <= 2);
    for (std::uint64_t x = 0; x < 64; ++x) {
      Assignment a;
      for (VarId v = 0; v < 6; ++v) a[v] = static_cast<int>((x >> v) & 1);
      Assignment full = extend_with_aux(a, q.registry);
      CHECK(q.evaluate(full) == doctest::Approx(p.evaluate(a)).epsilon(1e-9));
    }
  }
}

TEST_CASE("inconsistent aux assignments cost at least the penalty minus the data coupling") {
  // Flipping an aux pays at least the penalty weight, offset by whatever
  // substituted data terms the aux carries (here a single |c| = 1 term).
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2}), 1.0);
  QuboProblem q = reduce(p, 20.0);
  REQUIRE(q.registry.size() == 1);
  for (std::uint64_t x = 0; x < 8; ++x) {
    Assignment a;
    for (VarId v = 0; v < 3; ++v) a[v] = static_cast<int>((x >> v) & 1);
    Assignment good = extend_with_aux(a, q.registry);
    Assignment bad = good;
    bad[q.registry[0].aux] ^= 1;
    CHECK(q.evaluate(bad) >= q.evaluate(good) + q.penalty_weight - 1.0 - 1e-9);
    CHECK(count_aux_violations(bad, q.registry) == 1);
    CHECK(count_aux_violations(good, q.registry) == 0);
  }
}

TEST_CASE("reduction soundness: the exact minimizer survives for any sane weight factor") {
  // The QUBO ground state must project onto the HUBO ground state for each
  // weight factor in the supported band.
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 6; ++trial) {
    BinaryPolynomial p = random_cubicish(rng, 5, 9, 4);
    std::vector<VarId> pvars = p.variables();
    if (pvars.empty()) continue;
    SolveResult hubo = brute_force(p);

    for (double wf : {15.0, 20.0, 25.0}) {
      QuboProblem q = reduce(p, wf);
      if (q.variables().size() > 24) continue;
      SolveResult qs = brute_force(q);
      CHECK(qs.aux_violations == 0);
      CHECK(qs.best_energy == doctest::Approx(hubo.best_energy).epsilon(1e-9));
      // projection onto the original variables achieves the HUBO optimum
      Assignment proj;
      for (VarId v : pvars) proj[v] = qs.best_assignment.at(v);
      CHECK(p.evaluate(proj) == doctest::Approx(hubo.best_energy).epsilon(1e-9));
    }
  }
}

TEST_CASE("aux ids allocate above the control-bit range") {
  KanSpec s = KanSpec::uniform({1, 1, 1}, 1);
  EncodingSpec enc{-1, 0, true};
  VariableLayout layout = VariableLayout::build(s, enc);
  Dataset ds;
  ds.inputs = {{0.25}, {0.75}};
  ds.targets = {0.5, -0.5};
  BinaryPolynomial obj = assemble(s, layout, ds, nullptr, {});
  QuboProblem q = reduce(obj, 20.0, layout.total_bits());
  for (const auto& e : q.registry) {
    CHECK(e.aux >= layout.total_bits());
    CHECK(e.left < layout.total_bits() + q.registry.size());
    CHECK(e.left < e.right);
  }
  CHECK(qubit_count(layout, q.registry) ==
        static_cast<int>(layout.total_bits() + q.registry.size()));
}

TEST_CASE("repeated pairs reuse one aux variable") {
  // q0 q1 appears in two cubic terms; a single substitution clears both.
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2}), 1.0);
  p.add_term(Monomial({0, 1, 3}), 1.0);
  QuboProblem q = reduce(p, 20.0);
  CHECK(q.registry.size() == 1);
  CHECK(q.registry[0].left == 0);
  CHECK(q.registry[0].right == 1);
}

TEST_CASE("quartic monomial needs two substitutions") {
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2, 3}), -1.0);
  QuboProblem q = reduce(p, 20.0);
  CHECK(q.registry.size() == 2);
  CHECK(q.to_polynomial().max_degree() <= 2);
}

TEST_CASE("penalty weight scales with the reduced polynomial's coefficients") {
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2}), 7.0);
  p.add_term(Monomial({3}), -2.0);
  QuboProblem q = reduce(p, 15.0);
  CHECK(q.penalty_weight == doctest::Approx(15.0 * 7.0));

  QuboProblem q2 = reduce(p, 25.0);
  CHECK(q2.penalty_weight == doctest::Approx(25.0 * 7.0));
}

TEST_CASE("coo export round-trips the quadratic form") {
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1, 2}), 1.5);
  p.add_term(Monomial({0}), -0.5);
  QuboProblem q = reduce(p, 20.0);
  std::istringstream in(q.to_coo());
  BinaryPolynomial rebuilt = BinaryPolynomial::constant(q.offset);
  VarId i, j;
  double c;
  while (in >> i >> j >> c) {
    rebuilt.add_term(i == j ? Monomial({i}) : Monomial({i, j}), c);
  }
  BinaryPolynomial expect = q.to_polynomial();
  for (const auto& [m, cc] : expect.terms()) {
    CHECK(rebuilt.coefficient(m) == doctest::Approx(cc).epsilon(1e-12));
  }
  nlohmann::json side = q.sidecar_json();
  CHECK(side.at("offset").get<double>() == doctest::Approx(q.offset));
  CHECK(side.at("penalty_weight").get<double>() == doctest::Approx(q.penalty_weight));
  CHECK(side.at("registry").size() == q.registry.size());
}
