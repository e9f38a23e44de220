#pragma once

#include "qkan/binpoly.hpp"

#include <json.hpp>

namespace qkan {

/// Signed radix-2 bit layout for one control point: one bit per exponent in
/// [low_exp, high_exp], doubled when signed (plus and minus rails).
struct EncodingSpec {
  int low_exp = -2;
  int high_exp = 0;
  bool signed_rep = true;

  int exponent_count() const { return high_exp - low_exp + 1; }
  int bits_per_point() const { return exponent_count() * (signed_rep ? 2 : 1); }
  /// Sum of 2^l over the exponent range; the magnitude ceiling of one rail.
  double max_magnitude() const;
  double step() const;  // 2^low_exp
  double min_value() const { return signed_rep ? -max_magnitude() : 0.0; }
  double max_value() const { return max_magnitude(); }

  void validate() const;

  nlohmann::json to_json() const;
  static EncodingSpec from_json(const nlohmann::json& j);
  bool operator==(const EncodingSpec&) const = default;
};

/// Variable ids backing one encoded control point, exponents ascending.
struct ControlPointCode {
  std::vector<VarId> plus_bits;
  std::vector<VarId> minus_bits;  // empty when unsigned
};

/// Linear polynomial sum_l 2^l q+_l - sum_l 2^l q-_l.
BinaryPolynomial expansion_polynomial(const ControlPointCode& code, const EncodingSpec& spec);

/// Real value of the encoded point under `x`. Throws MissingVariableError
/// when any bit of the code is unassigned.
double decode(const Assignment& x, const ControlPointCode& code, const EncodingSpec& spec);

/// Bit values (not VarIds) of the code closest to `value`: plus rail then
/// minus rail, exponents ascending. Ties prefer fewer set bits, then the
/// plus rail; out-of-range values clamp.
std::vector<int> nearest_code_bits(double value, const EncodingSpec& spec);

/// nearest_code_bits applied through a concrete code's VarIds.
Assignment nearest_code(double value, const ControlPointCode& code, const EncodingSpec& spec);

/// Value that nearest_code_bits lands on (the quantized value).
double quantize(double value, const EncodingSpec& spec);

}  // namespace qkan
