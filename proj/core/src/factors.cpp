#include "qkan/factors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qkan {

nlohmann::json FactorAtom::to_json() const {
  if (kind == Kind::target) return {{"k", "y"}};
  return {{"k", "w"}, {"in", in_node}, {"out", out_node}, {"i", index}};
}

FactorAtom FactorAtom::from_json(const nlohmann::json& j) {
  if (j.at("k").get<std::string>() == "y") return target();
  return weight(j.at("in").get<int>(), j.at("out").get<int>(), j.at("i").get<int>());
}

FactorMonomial::FactorMonomial(std::vector<std::pair<FactorAtom, int>> factors)
    : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end());
  // Merge duplicate atoms, drop zero powers.
  std::vector<std::pair<FactorAtom, int>> merged;
  for (const auto& [a, p] : factors_) {
    if (p == 0) continue;
    if (!merged.empty() && merged.back().first == a) {
      merged.back().second += p;
    } else {
      merged.emplace_back(a, p);
    }
  }
  factors_ = std::move(merged);
}

FactorMonomial FactorMonomial::product(const FactorMonomial& a, const FactorMonomial& b) {
  std::vector<std::pair<FactorAtom, int>> all = a.factors_;
  all.insert(all.end(), b.factors_.begin(), b.factors_.end());
  return FactorMonomial(std::move(all));
}

double FactorMonomial::evaluate(const AtomValues& v) const {
  double out = 1.0;
  for (const auto& [a, p] : factors_) {
    auto it = v.find(a);
    if (it == v.end()) throw std::runtime_error("FactorMonomial: missing atom value");
    out *= std::pow(it->second, p);
  }
  return out;
}

nlohmann::json FactorMonomial::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [a, p] : factors_) {
    nlohmann::json f = a.to_json();
    f["p"] = p;
    arr.push_back(f);
  }
  return arr;
}

FactorMonomial FactorMonomial::from_json(const nlohmann::json& j) {
  std::vector<std::pair<FactorAtom, int>> factors;
  for (const auto& f : j) {
    factors.emplace_back(FactorAtom::from_json(f), f.at("p").get<int>());
  }
  return FactorMonomial(std::move(factors));
}

FactorPoly FactorPoly::constant(double c) {
  FactorPoly p;
  p.add_term(FactorMonomial::one(), c);
  return p;
}

FactorPoly FactorPoly::atom(const FactorAtom& a) {
  FactorPoly p;
  p.add_term(FactorMonomial::atom(a), 1.0);
  return p;
}

void FactorPoly::add_term(const FactorMonomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

FactorPoly& FactorPoly::operator+=(const FactorPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FactorPoly& FactorPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

FactorPoly FactorPoly::multiply(const FactorPoly& a, const FactorPoly& b) {
  FactorPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(FactorMonomial::product(ma, mb), ca * cb);
    }
  }
  return out;
}

double FactorPoly::evaluate(const AtomValues& v) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) total += c * m.evaluate(v);
  return total;
}

TemplatePoly TemplatePoly::constant(const FactorPoly& c) {
  TemplatePoly p;
  p.add_term(Monomial::one(), c);
  return p;
}

void TemplatePoly::add_term(const Monomial& m, const FactorPoly& c) {
  if (c.empty()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.empty()) terms_.erase(it);
  }
}

TemplatePoly& TemplatePoly::operator+=(const TemplatePoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

TemplatePoly TemplatePoly::multiply(const TemplatePoly& a, const TemplatePoly& b) {
  TemplatePoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(Monomial::product(ma, mb), FactorPoly::multiply(ca, cb));
    }
  }
  return out;
}

TemplatePoly TemplatePoly::power(const TemplatePoly& a, int n) {
  if (n < 0) throw std::invalid_argument("TemplatePoly::power: negative exponent");
  TemplatePoly out = constant(1.0);
  for (int i = 0; i < n; ++i) out = multiply(out, a);
  return out;
}

TemplatePoly TemplatePoly::scale(const TemplatePoly& a, const FactorPoly& c) {
  TemplatePoly out;
  for (const auto& [m, coeff] : a.terms_) {
    out.add_term(m, FactorPoly::multiply(coeff, c));
  }
  return out;
}

BinaryPolynomial TemplatePoly::instantiate(const AtomValues& v) const {
  BinaryPolynomial out;
  for (const auto& [m, c] : terms_) out.add_term(m, c.evaluate(v));
  return out;
}

std::vector<FactorMonomial> TemplatePoly::moment_keys() const {
  std::set<FactorMonomial> keys;
  for (const auto& [m, c] : terms_) {
    for (const auto& [fm, coeff] : c.terms()) keys.insert(fm);
  }
  return {keys.begin(), keys.end()};
}

}  // namespace qkan
