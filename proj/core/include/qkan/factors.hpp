#pragma once

#include "qkan/binpoly.hpp"

#include <compare>
#include <map>

#include <json.hpp>

namespace qkan {

/// A known scalar attached to one sample: either the Bernstein weight of a
/// first-layer edge (in_node -> out_node, basis index) evaluated at that
/// sample's input feature, or the sample's target value.
struct FactorAtom {
  enum class Kind : int { weight = 0, target = 1 };
  Kind kind = Kind::weight;
  int in_node = 0;
  int out_node = 0;
  int index = 0;

  static FactorAtom weight(int in, int out, int idx) {
    return {Kind::weight, in, out, idx};
  }
  static FactorAtom target() { return {Kind::target, 0, 0, 0}; }

  auto operator<=>(const FactorAtom&) const = default;

  nlohmann::json to_json() const;
  static FactorAtom from_json(const nlohmann::json& j);
};

/// Per-sample values for every atom a template references.
using AtomValues = std::map<FactorAtom, double>;

/// Product of atoms with positive integer powers, kept sorted by atom; the
/// canonical moment key. The empty product is the constant factor 1.
class FactorMonomial {
 public:
  FactorMonomial() = default;
  explicit FactorMonomial(std::vector<std::pair<FactorAtom, int>> factors);
  static FactorMonomial one() { return FactorMonomial(); }
  static FactorMonomial atom(const FactorAtom& a) { return FactorMonomial({{a, 1}}); }
  static FactorMonomial product(const FactorMonomial& a, const FactorMonomial& b);

  const std::vector<std::pair<FactorAtom, int>>& factors() const { return factors_; }
  double evaluate(const AtomValues& v) const;

  bool operator==(const FactorMonomial& o) const { return factors_ == o.factors_; }
  bool operator<(const FactorMonomial& o) const { return factors_ < o.factors_; }

  nlohmann::json to_json() const;
  static FactorMonomial from_json(const nlohmann::json& j);

 private:
  std::vector<std::pair<FactorAtom, int>> factors_;  // sorted by atom, powers >= 1
};

/// Sparse polynomial in factor atoms with double coefficients. This is the
/// coefficient ring of the symbolic network template: ordinary commutative
/// algebra, no idempotence (weights are reals, w^2 != w).
class FactorPoly {
 public:
  FactorPoly() = default;
  static FactorPoly constant(double c);
  static FactorPoly atom(const FactorAtom& a);

  void add_term(const FactorMonomial& m, double c);
  FactorPoly& operator+=(const FactorPoly& o);
  FactorPoly& operator*=(double s);
  static FactorPoly multiply(const FactorPoly& a, const FactorPoly& b);

  double evaluate(const AtomValues& v) const;
  bool empty() const { return terms_.empty(); }
  const std::map<FactorMonomial, double>& terms() const { return terms_; }

 private:
  std::map<FactorMonomial, double> terms_;
};

/// Polynomial in binary variables whose coefficients are FactorPolys: the
/// sample-independent symbolic template of a network (or objective).
/// Instantiating at one sample's atom values yields a BinaryPolynomial.
class TemplatePoly {
 public:
  TemplatePoly() = default;
  static TemplatePoly constant(const FactorPoly& c);
  static TemplatePoly constant(double c) { return constant(FactorPoly::constant(c)); }

  void add_term(const Monomial& m, const FactorPoly& c);
  TemplatePoly& operator+=(const TemplatePoly& o);
  static TemplatePoly multiply(const TemplatePoly& a, const TemplatePoly& b);
  static TemplatePoly power(const TemplatePoly& a, int n);
  static TemplatePoly scale(const TemplatePoly& a, const FactorPoly& c);

  BinaryPolynomial instantiate(const AtomValues& v) const;

  /// Every distinct factor monomial referenced anywhere in the template —
  /// exactly the moments a dataset must be collapsed into.
  std::vector<FactorMonomial> moment_keys() const;

  const std::map<Monomial, FactorPoly>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

 private:
  std::map<Monomial, FactorPoly> terms_;
};

}  // namespace qkan
