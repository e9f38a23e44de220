#include "qkan/reduction.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace qkan {

double QuboProblem::evaluate(const Assignment& x) const {
  double e = offset;
  for (const auto& [v, c] : linear) {
    if (x.at(v)) e += c;
  }
  for (const auto& [pair, c] : quadratic) {
    if (x.at(pair.first) && x.at(pair.second)) e += c;
  }
  return e;
}

BinaryPolynomial QuboProblem::to_polynomial() const {
  BinaryPolynomial p = BinaryPolynomial::constant(offset);
  for (const auto& [v, c] : linear) p.add_term(Monomial::var(v), c);
  for (const auto& [pair, c] : quadratic) {
    p.add_term(Monomial({pair.first, pair.second}), c);
  }
  return p;
}

std::vector<VarId> QuboProblem::variables() const {
  std::vector<VarId> vars;
  for (const auto& [v, c] : linear) vars.push_back(v);
  for (const auto& [pair, c] : quadratic) {
    vars.push_back(pair.first);
    vars.push_back(pair.second);
  }
  for (const auto& e : registry) {
    vars.push_back(e.aux);
    vars.push_back(e.left);
    vars.push_back(e.right);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::string QuboProblem::to_coo() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [v, c] : linear) os << v << " " << v << " " << c << "\n";
  for (const auto& [pair, c] : quadratic) {
    os << pair.first << " " << pair.second << " " << c << "\n";
  }
  return os.str();
}

nlohmann::json QuboProblem::sidecar_json() const {
  nlohmann::json reg = nlohmann::json::array();
  for (const auto& e : registry) {
    reg.push_back({{"aux", e.aux}, {"left", e.left}, {"right", e.right}});
  }
  return {{"offset", offset}, {"penalty_weight", penalty_weight}, {"registry", reg}};
}

BinaryPolynomial penalty(VarId aux, VarId p1, VarId p2, double w) {
  if (w <= 0.0) throw std::invalid_argument("penalty: weight must be positive");
  if (aux == p1 || aux == p2 || p1 == p2) {
    throw std::invalid_argument("penalty: variables must be distinct");
  }
  BinaryPolynomial p;
  p.add_term(Monomial({p1, p2}), w);
  p.add_term(Monomial({aux, p1}), -2.0 * w);
  p.add_term(Monomial({aux, p2}), -2.0 * w);
  p.add_term(Monomial::var(aux), 3.0 * w);
  return p;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<VarId, VarId>& p) const {
    return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(p.first) << 32) | p.second);
  }
};

}  // namespace

QuboProblem reduce(const BinaryPolynomial& h, double w_factor) {
  return reduce(h, w_factor, 0);
}

QuboProblem reduce(const BinaryPolynomial& h, double w_factor, VarId min_aux) {
  if (w_factor <= 0.0) throw std::invalid_argument("reduce: w_factor must be positive");

  std::map<Monomial, double> terms(h.terms());
  AuxRegistry registry;
  VarId next_aux = min_aux;
  for (VarId v : h.variables()) next_aux = std::max(next_aux, v + 1);

  while (true) {
    // Pair frequencies over degree>=3 monomials.
    std::unordered_map<std::pair<VarId, VarId>, int, PairHash> freq;
    for (const auto& [m, c] : terms) {
      if (m.degree() < 3) continue;
      const auto& vars = m.vars();
      for (std::size_t a = 0; a < vars.size(); ++a) {
        for (std::size_t b = a + 1; b < vars.size(); ++b) {
          ++freq[{vars[a], vars[b]}];
        }
      }
    }
    if (freq.empty()) break;

    std::pair<VarId, VarId> best{0, 0};
    int best_count = -1;
    for (const auto& [pair, count] : freq) {
      if (count > best_count || (count == best_count && pair < best)) {
        best = pair;
        best_count = count;
      }
    }

    VarId aux = next_aux++;
    registry.push_back({aux, best.first, best.second});

    std::vector<std::pair<Monomial, double>> replaced;
    for (auto it = terms.begin(); it != terms.end();) {
      const Monomial& m = it->first;
      if (m.degree() >= 3 && m.contains(best.first) && m.contains(best.second)) {
        std::vector<VarId> vars;
        for (VarId v : m.vars()) {
          if (v != best.first && v != best.second) vars.push_back(v);
        }
        vars.push_back(aux);
        replaced.emplace_back(Monomial(std::move(vars)), it->second);
        it = terms.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& [m, c] : replaced) {
      auto [it, inserted] = terms.try_emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms.erase(it);
      }
    }
  }

  double max_coeff = 0.0;
  for (const auto& [m, c] : terms) {
    if (m.degree() >= 1) max_coeff = std::max(max_coeff, std::abs(c));
  }
  QuboProblem q;
  q.registry = registry;
  q.penalty_weight = registry.empty() ? 0.0 : w_factor * max_coeff;

  BinaryPolynomial reduced;
  for (const auto& [m, c] : terms) reduced.add_term(m, c);
  for (const auto& e : registry) {
    reduced += penalty(e.aux, e.left, e.right, q.penalty_weight);
  }

  for (const auto& [m, c] : reduced.terms()) {
    switch (m.degree()) {
      case 0:
        q.offset += c;
        break;
      case 1:
        q.linear[m.vars()[0]] += c;
        break;
      case 2:
        q.quadratic[{m.vars()[0], m.vars()[1]}] += c;
        break;
      default:
        throw std::logic_error("reduce: residual degree > 2 after reduction");
    }
  }
  return q;
}

int qubit_count(const VariableLayout& layout, const AuxRegistry& registry) {
  return static_cast<int>(layout.total_bits()) + static_cast<int>(registry.size());
}

int count_aux_violations(const Assignment& x, const AuxRegistry& registry) {
  int violations = 0;
  for (const auto& e : registry) {
    if (x.at(e.aux) != (x.at(e.left) & x.at(e.right))) ++violations;
  }
  return violations;
}

}  // namespace qkan
