#include "qkan/encoding.hpp"

#include <bit>
#include <cmath>

namespace qkan {

double EncodingSpec::max_magnitude() const {
  double m = 0.0;
  for (int l = low_exp; l <= high_exp; ++l) m += std::ldexp(1.0, l);
  return m;
}

double EncodingSpec::step() const { return std::ldexp(1.0, low_exp); }

void EncodingSpec::validate() const {
  if (low_exp > high_exp) throw std::invalid_argument("EncodingSpec: low_exp > high_exp");
}

nlohmann::json EncodingSpec::to_json() const {
  return {{"low_exp", low_exp}, {"high_exp", high_exp}, {"signed", signed_rep}};
}

EncodingSpec EncodingSpec::from_json(const nlohmann::json& j) {
  EncodingSpec s;
  s.low_exp = j.at("low_exp").get<int>();
  s.high_exp = j.at("high_exp").get<int>();
  s.signed_rep = j.at("signed").get<bool>();
  s.validate();
  return s;
}

BinaryPolynomial expansion_polynomial(const ControlPointCode& code, const EncodingSpec& spec) {
  if (static_cast<int>(code.plus_bits.size()) != spec.exponent_count() ||
      static_cast<int>(code.minus_bits.size()) != (spec.signed_rep ? spec.exponent_count() : 0)) {
    throw std::invalid_argument("expansion_polynomial: code inconsistent with spec");
  }
  BinaryPolynomial p;
  for (int i = 0; i < spec.exponent_count(); ++i) {
    double w = std::ldexp(1.0, spec.low_exp + i);
    p.add_term(Monomial::var(code.plus_bits[i]), w);
    if (spec.signed_rep) p.add_term(Monomial::var(code.minus_bits[i]), -w);
  }
  return p;
}

double decode(const Assignment& x, const ControlPointCode& code, const EncodingSpec& spec) {
  return expansion_polynomial(code, spec).evaluate(x);
}

namespace {

// Single-rail radix-2 codes are unique: value = k * step with k the plain
// binary integer over the exponent window.
std::vector<int> rail_bits(long k, int nbits) {
  std::vector<int> bits(nbits, 0);
  for (int i = 0; i < nbits; ++i) bits[i] = static_cast<int>((k >> i) & 1);
  return bits;
}

long nearest_k(double value, const EncodingSpec& spec) {
  const double step = spec.step();
  const long kmax = (1L << spec.exponent_count()) - 1;
  const long kmin = spec.signed_rep ? -kmax : 0;
  double raw = value / step;
  long lo = static_cast<long>(std::floor(raw));
  long hi = lo + 1;
  lo = std::clamp(lo, kmin, kmax);
  hi = std::clamp(hi, kmin, kmax);
  double dlo = std::abs(lo * step - value);
  double dhi = std::abs(hi * step - value);
  if (dlo < dhi) return lo;
  if (dhi < dlo) return hi;
  if (lo == hi) return lo;
  // Tie: fewer set bits, then the plus rail (nonnegative value).
  int plo = std::popcount(static_cast<unsigned long>(std::labs(lo)));
  int phi = std::popcount(static_cast<unsigned long>(std::labs(hi)));
  if (plo != phi) return plo < phi ? lo : hi;
  return hi >= 0 ? hi : lo;
}

}  // namespace

std::vector<int> nearest_code_bits(double value, const EncodingSpec& spec) {
  const int n = spec.exponent_count();
  long k = nearest_k(value, spec);
  std::vector<int> plus = rail_bits(k >= 0 ? k : 0, n);
  std::vector<int> out = plus;
  if (spec.signed_rep) {
    std::vector<int> minus = rail_bits(k < 0 ? -k : 0, n);
    out.insert(out.end(), minus.begin(), minus.end());
  }
  return out;
}

Assignment nearest_code(double value, const ControlPointCode& code, const EncodingSpec& spec) {
  std::vector<int> bits = nearest_code_bits(value, spec);
  Assignment a;
  const int n = spec.exponent_count();
  for (int i = 0; i < n; ++i) a[code.plus_bits[i]] = bits[i];
  if (spec.signed_rep) {
    for (int i = 0; i < n; ++i) a[code.minus_bits[i]] = bits[n + i];
  }
  return a;
}

double quantize(double value, const EncodingSpec& spec) {
  return static_cast<double>(nearest_k(value, spec)) * spec.step();
}

}  // namespace qkan
