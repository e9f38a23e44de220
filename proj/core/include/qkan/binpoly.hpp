#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace qkan {

using VarId = std::uint32_t;

/// Assignment of binary values to variables. Missing lookups are errors
/// reported with the full list of unassigned ids.
using Assignment = std::unordered_map<VarId, int>;

class MissingVariableError : public std::runtime_error {
 public:
  explicit MissingVariableError(std::vector<VarId> missing);
  const std::vector<VarId>& missing() const { return missing_; }

 private:
  std::vector<VarId> missing_;
};

/// Product of distinct binary variables; the empty product is the constant
/// term. Variables are kept strictly sorted, so q^2 = q is applied at
/// construction and the representation is canonical.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<VarId> vars);
  static Monomial one() { return Monomial(); }
  static Monomial var(VarId v) { return Monomial({v}); }

  /// Set union of the two variable sets (idempotent product).
  static Monomial product(const Monomial& a, const Monomial& b);

  const std::vector<VarId>& vars() const { return vars_; }
  int degree() const { return static_cast<int>(vars_.size()); }
  bool contains(VarId v) const;

  bool operator==(const Monomial& o) const { return vars_ == o.vars_; }
  bool operator<(const Monomial& o) const { return vars_ < o.vars_; }

 private:
  std::vector<VarId> vars_;  // sorted, unique
};

/// Sparse multilinear polynomial over binary variables with double
/// coefficients. Terms live in a map keyed by the canonical monomial order,
/// so iteration (and therefore accumulation and serialization) is
/// deterministic. Exact zeros are pruned during algebra; epsilon cleanup is
/// a separate, explicit compress() pass.
class BinaryPolynomial {
 public:
  BinaryPolynomial() = default;
  static BinaryPolynomial constant(double c);
  static BinaryPolynomial variable(VarId v);

  /// Accumulate `c` onto monomial `m`, erasing the entry if it cancels.
  void add_term(const Monomial& m, double c);

  BinaryPolynomial& operator+=(const BinaryPolynomial& o);
  BinaryPolynomial& operator-=(const BinaryPolynomial& o);
  BinaryPolynomial& operator*=(double s);
  friend BinaryPolynomial operator+(BinaryPolynomial a, const BinaryPolynomial& b) { return a += b; }
  friend BinaryPolynomial operator-(BinaryPolynomial a, const BinaryPolynomial& b) { return a -= b; }
  friend BinaryPolynomial operator*(BinaryPolynomial a, double s) { return a *= s; }
  friend BinaryPolynomial operator*(double s, BinaryPolynomial a) { return a *= s; }
  friend BinaryPolynomial operator*(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    return multiply(a, b);
  }

  static BinaryPolynomial multiply(const BinaryPolynomial& a, const BinaryPolynomial& b);
  static BinaryPolynomial power(const BinaryPolynomial& a, int n);

  double evaluate(const Assignment& x) const;
  int max_degree() const;
  double constant_term() const;
  double coefficient(const Monomial& m) const;

  /// Drop terms with |coefficient| <= eps. Opt-in cleanup after assembly.
  void compress(double eps = 1e-12);

  const std::map<Monomial, double>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Sorted list of every variable appearing in the polynomial.
  std::vector<VarId> variables() const;

  bool operator==(const BinaryPolynomial& o) const { return terms_ == o.terms_; }

  /// {"version":1,"terms":[{"vars":[...],"c":...},...]} with canonical term order.
  nlohmann::json to_json() const;
  static BinaryPolynomial from_json(const nlohmann::json& j);

 private:
  std::map<Monomial, double> terms_;
};

}  // namespace qkan
