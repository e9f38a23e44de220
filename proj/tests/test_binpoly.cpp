#include <doctest.h>

#include "qkan/binpoly.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace qkan;

namespace {

// Exhaustive evaluation over every assignment of the given variables.
template <class F>
void for_all_assignments(const std::vector<VarId>& vars, F&& fn) {
  const std::size_t n = vars.size();
  for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a[vars[i]] = static_cast<int>((x >> i) & 1);
    fn(a);
  }
}

BinaryPolynomial random_poly(std::mt19937_64& rng, int n_vars, int n_terms, int max_deg) {
  std::uniform_int_distribution<int> var(0, n_vars - 1);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  BinaryPolynomial p;
  for (int t = 0; t < n_terms; ++t) {
    std::vector<VarId> vars;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) vars.push_back(static_cast<VarId>(var(rng)));
    p.add_term(Monomial(std::move(vars)), coeff(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("add: cancellation, identity, like-term merge") {
  BinaryPolynomial a = BinaryPolynomial::variable(1) + BinaryPolynomial::constant(2.0);
  BinaryPolynomial b = -1.0 * BinaryPolynomial::variable(1);
  BinaryPolynomial sum = a + b;
  CHECK(sum.term_count() == 1);
  CHECK(sum.constant_term() == 2.0);

  std::mt19937_64 rng7(7);
  BinaryPolynomial p = random_poly(rng7, 4, 5, 2);
  CHECK(p + BinaryPolynomial() == p);

  BinaryPolynomial q1q2;
  q1q2.add_term(Monomial({1, 2}), 1.0);
  BinaryPolynomial merged = q1q2 + q1q2;
  CHECK(merged.coefficient(Monomial({1, 2})) == 2.0);
  CHECK(merged.term_count() == 1);
}

TEST_CASE("multiply: idempotence") {
  BinaryPolynomial q1 = BinaryPolynomial::variable(1);
  BinaryPolynomial q2 = BinaryPolynomial::variable(2);

  BinaryPolynomial r = (q1 + q2) * q1;  // q1 + q1q2
  CHECK(r.coefficient(Monomial({1})) == 1.0);
  CHECK(r.coefficient(Monomial({1, 2})) == 1.0);
  CHECK(r.term_count() == 2);

  BinaryPolynomial one_minus = BinaryPolynomial::constant(1.0) - q1;
  BinaryPolynomial sq = one_minus * one_minus;  // (1-q)^2 = 1-q for binary q
  CHECK(sq == one_minus);
}

TEST_CASE("multiply: squared two-term product checked against brute force") {
  // (2 qa qb + 4 qa qc)^2 with (a,b,c) = (0,1,2)
  BinaryPolynomial p;
  p.add_term(Monomial({0, 1}), 2.0);
  p.add_term(Monomial({0, 2}), 4.0);
  BinaryPolynomial sq = BinaryPolynomial::power(p, 2);

  for_all_assignments({0, 1, 2}, [&](const Assignment& a) {
    double v = p.evaluate(a);
    CHECK(sq.evaluate(a) == doctest::Approx(v * v).epsilon(1e-12));
  });
  // The cross term carries the full 2*2*4 coefficient.
  CHECK(sq.coefficient(Monomial({0, 1})) == 4.0);
  CHECK(sq.coefficient(Monomial({0, 1, 2})) == 16.0);
  CHECK(sq.coefficient(Monomial({0, 2})) == 16.0);
}

TEST_CASE("power: idempotence and empty product") {
  BinaryPolynomial q1 = BinaryPolynomial::variable(1);
  CHECK(BinaryPolynomial::power(q1, 3) == q1);
  std::mt19937_64 rng3(3);
  CHECK(BinaryPolynomial::power(random_poly(rng3, 5, 6, 3), 0) ==
        BinaryPolynomial::constant(1.0));

  BinaryPolynomial s = q1 + BinaryPolynomial::variable(2);
  BinaryPolynomial sq = BinaryPolynomial::power(s, 2);  // q1 + q2 + 2 q1q2
  for_all_assignments({1, 2}, [&](const Assignment& a) {
    double v = s.evaluate(a);
    CHECK(sq.evaluate(a) == doctest::Approx(v * v));
  });
  CHECK(sq.coefficient(Monomial({1, 2})) == 2.0);
}

TEST_CASE("evaluate: basics and missing-variable reporting") {
  BinaryPolynomial p;
  p.add_term(Monomial({1, 2}), 3.0);
  p.add_term(Monomial::one(), 1.0);
  CHECK(p.evaluate({{1, 1}, {2, 1}}) == 4.0);
  CHECK(p.evaluate({{1, 0}, {2, 0}}) == 1.0);  // all-zeros hits the constant

  try {
    p.evaluate({{1, 1}});
    FAIL("expected MissingVariableError");
  } catch (const MissingVariableError& e) {
    CHECK(e.missing() == std::vector<VarId>{2});
  }
}

TEST_CASE("max_degree") {
  BinaryPolynomial p;
  p.add_term(Monomial({1, 2, 3}), 1.0);
  p.add_term(Monomial({1}), 1.0);
  CHECK(p.max_degree() == 3);
  CHECK(BinaryPolynomial::constant(5.0).max_degree() == 0);
}

TEST_CASE("property: evaluate is a ring homomorphism") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryPolynomial a = random_poly(rng, 6, 8, 3);
    BinaryPolynomial b = random_poly(rng, 6, 8, 3);
    BinaryPolynomial sum = a + b;
    BinaryPolynomial prod = BinaryPolynomial::multiply(a, b);
    for_all_assignments({0, 1, 2, 3, 4, 5}, [&](const Assignment& x) {
      double ea = a.evaluate(x), eb = b.evaluate(x);
      CHECK(sum.evaluate(x) == doctest::Approx(ea + eb).epsilon(1e-12));
      CHECK(prod.evaluate(x) == doctest::Approx(ea * eb).epsilon(1e-12));
    });
  }
}

TEST_CASE("property: canonical form is unique for equal functions") {
  // The same polynomial assembled in two different term orders must produce
  // an identical term map.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<Monomial, double>> terms;
    std::uniform_int_distribution<int> var(0, 9);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int t = 0; t < 12; ++t) {
      terms.emplace_back(Monomial({static_cast<VarId>(var(rng)), static_cast<VarId>(var(rng))}),
                         coeff(rng));
    }
    BinaryPolynomial fwd, rev;
    for (const auto& [m, c] : terms) fwd.add_term(m, c);
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) rev.add_term(it->first, it->second);
    for (const auto& [m, c] : fwd.terms()) {
      CHECK(std::abs(rev.coefficient(m) - c) <= 1e-12);
    }
    CHECK(fwd.term_count() == rev.term_count());
  }
}

TEST_CASE("multilinearity: stored monomials have distinct variables") {
  std::mt19937_64 rng(5);
  BinaryPolynomial p = random_poly(rng, 5, 40, 4);
  BinaryPolynomial sq = BinaryPolynomial::power(p, 2);
  for (const auto& [m, c] : sq.terms()) {
    auto vars = m.vars();
    CHECK(std::adjacent_find(vars.begin(), vars.end()) == vars.end());
    CHECK(std::is_sorted(vars.begin(), vars.end()));
  }
}

TEST_CASE("compress removes only sub-epsilon terms") {
  BinaryPolynomial p;
  p.add_term(Monomial({1}), 1e-15);
  p.add_term(Monomial({2}), 0.5);
  p.compress();
  CHECK(p.term_count() == 1);
  CHECK(p.coefficient(Monomial({2})) == 0.5);
}

TEST_CASE("json round trip is canonical") {
  std::mt19937_64 rng(11);
  BinaryPolynomial p = random_poly(rng, 8, 20, 3);
  nlohmann::json j = p.to_json();
  CHECK(j.at("version") == 1);
  BinaryPolynomial q = BinaryPolynomial::from_json(j);
  CHECK(p == q);
  CHECK(q.to_json() == j);
}
