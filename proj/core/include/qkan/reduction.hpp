#pragma once

#include "qkan/binpoly.hpp"
#include "qkan/network.hpp"

#include <json.hpp>

namespace qkan {

/// One pairwise substitution: aux stands for left * right, left < right.
struct AuxEntry {
  VarId aux = 0;
  VarId left = 0;
  VarId right = 0;
  bool operator==(const AuxEntry&) const = default;
};

using AuxRegistry = std::vector<AuxEntry>;

/// Quadratic problem in upper-triangular form plus the substitution registry
/// and the penalty weight baked into its coefficients.
struct QuboProblem {
  std::map<VarId, double> linear;
  std::map<std::pair<VarId, VarId>, double> quadratic;  // first < second
  double offset = 0.0;
  AuxRegistry registry;
  double penalty_weight = 0.0;

  double evaluate(const Assignment& x) const;
  BinaryPolynomial to_polynomial() const;  // includes offset as constant term
  std::vector<VarId> variables() const;

  /// COO text lines "i j value" (i == j for linear terms), canonical order.
  std::string to_coo() const;
  /// Sidecar with offset, penalty weight, and the aux registry.
  nlohmann::json sidecar_json() const;
};

/// Consistency penalty w * (p1 p2 - 2 aux p1 - 2 aux p2 + 3 aux): zero on
/// every assignment with aux == p1 * p2, at least w otherwise.
BinaryPolynomial penalty(VarId aux, VarId p1, VarId p2, double w);

/// Pairwise degree reduction. Repeatedly substitutes the variable pair
/// appearing in the most degree>=3 monomials (ties: lexicographically
/// smallest pair) with a fresh aux until the polynomial is quadratic, then
/// adds penalty terms with weight w_factor * max |coefficient| of the
/// reduced polynomial.
QuboProblem reduce(const BinaryPolynomial& h, double w_factor = 20.0);

/// As above with a floor for fresh aux ids, so aux variables stay above the
/// full control-bit range even when some bits never appear in `h`.
QuboProblem reduce(const BinaryPolynomial& h, double w_factor, VarId min_aux);

/// Total logical variables: control-point bits plus aux variables.
int qubit_count(const VariableLayout& layout, const AuxRegistry& registry);

/// Number of registry entries whose aux bit disagrees with left * right.
int count_aux_violations(const Assignment& x, const AuxRegistry& registry);

}  // namespace qkan
