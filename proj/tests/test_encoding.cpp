#include <doctest.h>

#include "qkan/encoding.hpp"

#include <cmath>

using namespace qkan;

namespace {

ControlPointCode make_code(const EncodingSpec& spec, VarId base) {
  ControlPointCode code;
  for (int i = 0; i < spec.exponent_count(); ++i) code.plus_bits.push_back(base + i);
  if (spec.signed_rep) {
    for (int i = 0; i < spec.exponent_count(); ++i)
      code.minus_bits.push_back(base + spec.exponent_count() + i);
  }
  return code;
}

}  // namespace

TEST_CASE("spec defaults and derived quantities") {
  EncodingSpec spec;  // exponents -2..0, signed
  CHECK(spec.exponent_count() == 3);
  CHECK(spec.bits_per_point() == 6);
  CHECK(spec.max_magnitude() == doctest::Approx(1.75));
  CHECK(spec.step() == doctest::Approx(0.25));
  CHECK(spec.min_value() == doctest::Approx(-1.75));
  spec.validate();

  EncodingSpec uns{-3, 0, false};
  CHECK(uns.bits_per_point() == 4);
  CHECK(uns.max_magnitude() == doctest::Approx(1.875));
  CHECK(uns.min_value() == 0.0);
}

TEST_CASE("validate rejects inverted ranges") {
  EncodingSpec bad{1, 0, true};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("expansion polynomial is the signed radix sum") {
  EncodingSpec spec;  // -2..0 signed
  ControlPointCode code = make_code(spec, 0);
  BinaryPolynomial p = expansion_polynomial(code, spec);
  CHECK(p.coefficient(Monomial({0})) == doctest::Approx(0.25));
  CHECK(p.coefficient(Monomial({1})) == doctest::Approx(0.5));
  CHECK(p.coefficient(Monomial({2})) == doctest::Approx(1.0));
  CHECK(p.coefficient(Monomial({3})) == doctest::Approx(-0.25));
  CHECK(p.coefficient(Monomial({4})) == doctest::Approx(-0.5));
  CHECK(p.coefficient(Monomial({5})) == doctest::Approx(-1.0));
  CHECK(p.max_degree() == 1);
  CHECK(p.constant_term() == 0.0);
}

TEST_CASE("decode agrees with the expansion polynomial on every assignment") {
  EncodingSpec spec{-2, 0, true};
  ControlPointCode code = make_code(spec, 10);
  BinaryPolynomial p = expansion_polynomial(code, spec);
  for (int x = 0; x < (1 << 6); ++x) {
    Assignment a;
    for (int i = 0; i < 6; ++i) a[10 + i] = (x >> i) & 1;
    CHECK(decode(a, code, spec) == doctest::Approx(p.evaluate(a)).epsilon(1e-15));
  }
}

TEST_CASE("decode reports the missing bits") {
  EncodingSpec spec{-1, 0, false};
  ControlPointCode code = make_code(spec, 4);
  CHECK_THROWS_AS(decode({{4, 1}}, code, spec), MissingVariableError);
}

TEST_CASE("nearest code: exact grid values round-trip") {
  EncodingSpec spec;  // step 0.25, range [-1.75, 1.75]
  for (int k = -7; k <= 7; ++k) {
    double v = k * 0.25;
    CHECK(quantize(v, spec) == doctest::Approx(v));
  }
}

TEST_CASE("nearest code: quantization error is at most half a step") {
  EncodingSpec spec;
  for (double v = -1.75; v <= 1.75; v += 0.013) {
    CHECK(std::abs(quantize(v, spec) - v) <= 0.125 + 1e-12);
  }
  EncodingSpec uns{-3, 0, false};
  for (double v = 0.0; v <= 1.875; v += 0.007) {
    CHECK(std::abs(quantize(v, uns) - v) <= uns.step() / 2 + 1e-12);
  }
}

TEST_CASE("nearest code: out-of-range values clamp to the rails") {
  EncodingSpec spec;
  CHECK(quantize(100.0, spec) == doctest::Approx(1.75));
  CHECK(quantize(-3.0, spec) == doctest::Approx(-1.75));
  EncodingSpec uns{-2, 0, false};
  CHECK(quantize(-0.4, uns) == 0.0);
}

TEST_CASE("nearest code bits decode back through the code") {
  EncodingSpec spec{-2, 1, true};
  ControlPointCode code = make_code(spec, 100);
  for (double v : {0.0, 0.25, -0.75, 1.3, -2.9, 3.75, 0.61}) {
    Assignment a = nearest_code(v, code, spec);
    CHECK(decode(a, code, spec) == doctest::Approx(quantize(v, spec)));
  }
}

TEST_CASE("ties prefer fewer set bits") {
  // 0.375 sits exactly between 0.25 (one bit) and 0.5 (one bit); either way
  // the chosen representation must use the minimum number of set bits for
  // its value.
  EncodingSpec spec;
  auto bits = nearest_code_bits(0.375, spec);
  int set = 0;
  for (int b : bits) set += b;
  CHECK(set == 1);

  // zero encodes as all-zero bits, not as canceling rails
  auto zero = nearest_code_bits(0.0, spec);
  for (int b : zero) CHECK(b == 0);
}

TEST_CASE("signed values never use both rails at once") {
  EncodingSpec spec;
  for (double v = -1.75; v <= 1.75; v += 0.05) {
    auto bits = nearest_code_bits(v, spec);
    int plus = 0, minus = 0;
    for (int i = 0; i < 3; ++i) plus += bits[i];
    for (int i = 3; i < 6; ++i) minus += bits[i];
    CHECK((plus == 0 || minus == 0));
  }
}

TEST_CASE("encoding json round trip") {
  EncodingSpec spec{-3, 1, false};
  EncodingSpec back = EncodingSpec::from_json(spec.to_json());
  CHECK(back == spec);
}
