#include "qkan/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

namespace qkan {

namespace {

struct DenseTerms {
  std::vector<VarId> vars;                       // ascending
  std::vector<std::pair<double, std::vector<int>>> terms;  // coeff, var positions
  double offset = 0.0;
};

DenseTerms densify(const BinaryPolynomial& h, std::vector<VarId> vars) {
  DenseTerms d;
  d.vars = std::move(vars);
  for (const auto& [m, c] : h.terms()) {
    if (m.degree() == 0) {
      d.offset += c;
      continue;
    }
    std::vector<int> idx;
    for (VarId v : m.vars()) {
      idx.push_back(static_cast<int>(std::lower_bound(d.vars.begin(), d.vars.end(), v) - d.vars.begin()));
    }
    d.terms.emplace_back(c, std::move(idx));
  }
  return d;
}

SolveResult exhaustive(const DenseTerms& d) {
  const std::size_t n = d.vars.size();
  if (n > 24) throw TooManyVariablesError(n);
  std::uint64_t best_x = 0;
  double best_e = 0.0;
  bool first = true;
  const std::uint64_t limit = 1ULL << n;
  for (std::uint64_t x = 0; x < limit; ++x) {
    double e = d.offset;
    for (const auto& [c, idx] : d.terms) {
      bool on = true;
      for (int i : idx) {
        if (((x >> i) & 1) == 0) {
          on = false;
          break;
        }
      }
      if (on) e += c;
    }
    if (first || e < best_e) {  // strict: ties keep the lowest integer
      best_e = e;
      best_x = x;
      first = false;
    }
  }
  SolveResult r;
  r.best_energy = best_e;
  for (std::size_t i = 0; i < n; ++i) {
    r.best_assignment[d.vars[i]] = static_cast<int>((best_x >> i) & 1);
  }
  r.energies_per_read = {best_e};
  return r;
}

}  // namespace

SolveResult brute_force(const BinaryPolynomial& h) {
  return exhaustive(densify(h, h.variables()));
}

SolveResult brute_force(const QuboProblem& q) {
  BinaryPolynomial p = q.to_polynomial();
  // Registry aux variables can drop out of the polynomial when coefficients
  // cancel; every declared variable still gets enumerated.
  std::vector<VarId> vars = p.variables();
  for (VarId v : q.variables()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  SolveResult r = exhaustive(densify(p, vars));
  r.aux_violations = count_aux_violations(r.best_assignment, q.registry);
  return r;
}

std::pair<double, double> default_betas(const QuboProblem& q) {
  // Single-flip |dE| for variable i is bounded by |h_i| + sum_j |J_ij|;
  // the smallest nonzero coefficient bounds the finest energy scale.
  std::map<VarId, double> row;
  double min_scale = 0.0;
  auto feed = [&](double c) {
    double a = std::abs(c);
    if (a > 0.0 && (min_scale == 0.0 || a < min_scale)) min_scale = a;
  };
  for (const auto& [v, c] : q.linear) {
    row[v] += std::abs(c);
    feed(c);
  }
  for (const auto& [pair, c] : q.quadratic) {
    row[pair.first] += std::abs(c);
    row[pair.second] += std::abs(c);
    feed(c);
  }
  double max_delta = 0.0;
  for (const auto& [v, d] : row) max_delta = std::max(max_delta, d);
  if (max_delta == 0.0) return {0.1, 1.0};  // constant problem
  return {1.0 / max_delta, 10.0 / min_scale};
}

SolveResult anneal(const QuboProblem& q, const AnnealSchedule& s) {
  if (s.sweeps < 1 || s.reads < 1) throw std::invalid_argument("anneal: sweeps and reads must be positive");
  auto [beta_start, beta_end] = default_betas(q);
  if (s.beta_start > 0.0) beta_start = s.beta_start;
  if (s.beta_end > 0.0) beta_end = s.beta_end;
  if (!(beta_start > 0.0) || beta_end < beta_start) {
    throw std::invalid_argument("anneal: need 0 < beta_start <= beta_end");
  }

  const std::vector<VarId> vars = q.variables();
  const int n = static_cast<int>(vars.size());
  std::map<VarId, int> pos;
  for (int i = 0; i < n; ++i) pos[vars[i]] = i;

  std::vector<double> h(n, 0.0);
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& [v, c] : q.linear) h[pos.at(v)] += c;
  for (const auto& [pair, c] : q.quadratic) {
    int a = pos.at(pair.first), b = pos.at(pair.second);
    adj[a].emplace_back(b, c);
    adj[b].emplace_back(a, c);
  }

  std::vector<double> betas(s.sweeps);
  for (int k = 0; k < s.sweeps; ++k) {
    double f = s.sweeps == 1 ? 1.0 : static_cast<double>(k) / (s.sweeps - 1);
    betas[k] = beta_start * std::pow(beta_end / beta_start, f);
  }

  SolveResult best;
  bool have_best = false;
  std::vector<int> x(n), best_x(n);

  for (int read = 0; read < s.reads; ++read) {
    std::mt19937_64 rng(s.seed + static_cast<std::uint64_t>(read));
    if (read == 0) {
      std::fill(x.begin(), x.end(), 0);
    } else {
      for (int i = 0; i < n; ++i) x[i] = static_cast<int>(rng() & 1);
    }

    // Local fields and running energy.
    std::vector<double> field = h;
    double energy = q.offset;
    for (int i = 0; i < n; ++i) {
      if (x[i]) energy += h[i];
    }
    for (const auto& [pair, c] : q.quadratic) {
      if (x[pos.at(pair.first)] && x[pos.at(pair.second)]) energy += c;
    }
    for (int i = 0; i < n; ++i) {
      for (const auto& [j, c] : adj[i]) {
        if (x[j]) field[i] += c;
      }
    }

    double read_best = energy;
    std::vector<int> read_best_x = x;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int sweep = 0; sweep < s.sweeps; ++sweep) {
      const double beta = betas[sweep];
      for (int i = 0; i < n; ++i) {
        double delta = (1 - 2 * x[i]) * field[i];
        if (delta <= 0.0 || unif(rng) < std::exp(-beta * delta)) {
          int step = 1 - 2 * x[i];
          x[i] = 1 - x[i];
          energy += delta;
          for (const auto& [j, c] : adj[i]) field[j] += c * step;
          if (energy < read_best) {
            read_best = energy;
            read_best_x = x;
          }
        }
      }
#ifndef NDEBUG
      {
        Assignment a;
        for (int i = 0; i < n; ++i) a[vars[i]] = x[i];
        double full = q.evaluate(a);
        assert(std::abs(full - energy) <= 1e-9 * (1.0 + std::abs(full)));
      }
#endif
    }

    best.energies_per_read.push_back(read_best);
    if (!have_best || read_best < best.best_energy) {
      best.best_energy = read_best;
      best_x = read_best_x;
      have_best = true;
    }
  }

  for (int i = 0; i < n; ++i) best.best_assignment[vars[i]] = best_x[i];
  best.best_energy = q.evaluate(best.best_assignment);  // exact, not incremental
  best.aux_violations = count_aux_violations(best.best_assignment, q.registry);
  return best;
}

namespace {
std::map<std::string, SolverFn>& solver_map() {
  static std::map<std::string, SolverFn> solvers = {
      {"sa", [](const QuboProblem& q, const AnnealSchedule& s) { return anneal(q, s); }},
      {"exact", [](const QuboProblem& q, const AnnealSchedule&) { return brute_force(q); }},
  };
  return solvers;
}
}  // namespace

void register_solver(const std::string& name, SolverFn fn) { solver_map()[name] = std::move(fn); }

SolverFn find_solver(const std::string& name) {
  auto it = solver_map().find(name);
  if (it == solver_map().end()) throw std::invalid_argument("unknown solver: " + name);
  return it->second;
}

std::vector<std::string> solver_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : solver_map()) names.push_back(name);
  return names;
}

int solution_aux_violations(const SolveResult& r, const AuxRegistry& registry) {
  return count_aux_violations(r.best_assignment, registry);
}

DecodedModel decode_solution(SolveResult& r, const VariableLayout& layout,
                             const AuxRegistry& registry) {
  DecodedModel m;
  m.spec = layout.spec();
  m.encoding = layout.encoding();
  for (const auto& entry : layout.entries()) {
    m.control.push_back(decode(r.best_assignment, entry.code, layout.encoding()));
  }
  m.input_bounds.assign(m.spec.input_width(), {0.0, 1.0});
  r.aux_violations = solution_aux_violations(r, registry);
  return m;
}

}  // namespace qkan
