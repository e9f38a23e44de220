#include "qkan/binpoly.hpp"

#include <algorithm>
#include <sstream>

namespace qkan {

namespace {
std::string format_missing(const std::vector<VarId>& missing) {
  std::ostringstream os;
  os << "assignment missing variable(s):";
  for (VarId v : missing) os << " q" << v;
  return os.str();
}
}  // namespace

MissingVariableError::MissingVariableError(std::vector<VarId> missing)
    : std::runtime_error(format_missing(missing)), missing_(std::move(missing)) {}

Monomial::Monomial(std::vector<VarId> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

Monomial Monomial::product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.vars_.reserve(a.vars_.size() + b.vars_.size());
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(out.vars_));
  return out;
}

bool Monomial::contains(VarId v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

BinaryPolynomial BinaryPolynomial::constant(double c) {
  BinaryPolynomial p;
  p.add_term(Monomial::one(), c);
  return p;
}

BinaryPolynomial BinaryPolynomial::variable(VarId v) {
  BinaryPolynomial p;
  p.add_term(Monomial::var(v), 1.0);
  return p;
}

void BinaryPolynomial::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

BinaryPolynomial& BinaryPolynomial::operator+=(const BinaryPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

BinaryPolynomial& BinaryPolynomial::operator-=(const BinaryPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

BinaryPolynomial& BinaryPolynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

BinaryPolynomial BinaryPolynomial::multiply(const BinaryPolynomial& a, const BinaryPolynomial& b) {
  // Accumulation runs in the canonical monomial order of both factors, so
  // the floating-point summation order is deterministic.
  BinaryPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(Monomial::product(ma, mb), ca * cb);
    }
  }
  return out;
}

BinaryPolynomial BinaryPolynomial::power(const BinaryPolynomial& a, int n) {
  if (n < 0) throw std::invalid_argument("power: negative exponent");
  BinaryPolynomial out = constant(1.0);
  for (int i = 0; i < n; ++i) out = multiply(out, a);
  return out;
}

double BinaryPolynomial::evaluate(const Assignment& x) const {
  std::vector<VarId> missing;
  for (VarId v : variables()) {
    if (x.find(v) == x.end()) missing.push_back(v);
  }
  if (!missing.empty()) throw MissingVariableError(std::move(missing));

  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    bool on = true;
    for (VarId v : m.vars()) {
      if (x.at(v) == 0) {
        on = false;
        break;
      }
    }
    if (on) total += c;
  }
  return total;
}

int BinaryPolynomial::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

double BinaryPolynomial::constant_term() const { return coefficient(Monomial::one()); }

double BinaryPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void BinaryPolynomial::compress(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<VarId> BinaryPolynomial::variables() const {
  std::vector<VarId> vars;
  for (const auto& [m, c] : terms_) {
    vars.insert(vars.end(), m.vars().begin(), m.vars().end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

nlohmann::json BinaryPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    terms.push_back({{"vars", m.vars()}, {"c", c}});
  }
  return {{"version", 1}, {"terms", terms}};
}

BinaryPolynomial BinaryPolynomial::from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1) {
    throw std::runtime_error("BinaryPolynomial: unsupported version");
  }
  BinaryPolynomial p;
  for (const auto& t : j.at("terms")) {
    p.add_term(Monomial(t.at("vars").get<std::vector<VarId>>()), t.at("c").get<double>());
  }
  return p;
}

}  // namespace qkan
