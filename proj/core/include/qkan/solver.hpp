#pragma once

#include "qkan/reduction.hpp"

#include <functional>

namespace qkan {

struct AnnealSchedule {
  double beta_start = 0.0;  // 0 = derive from coefficient magnitudes
  double beta_end = 0.0;    // 0 = derive from coefficient magnitudes
  int sweeps = 1000;
  int reads = 100;
  std::uint64_t seed = 0;
};

struct SolveResult {
  Assignment best_assignment;
  double best_energy = 0.0;
  std::vector<double> energies_per_read;
  int aux_violations = 0;
};

class TooManyVariablesError : public std::runtime_error {
 public:
  explicit TooManyVariablesError(std::size_t n)
      : std::runtime_error("brute force limited to 24 variables, got " + std::to_string(n)) {}
};

/// Exhaustive argmin over all assignments of the polynomial's variables.
/// Ties keep the lowest assignment read as an integer (bit k of the integer
/// is the k-th variable in ascending VarId order).
SolveResult brute_force(const BinaryPolynomial& h);
SolveResult brute_force(const QuboProblem& q);

/// Simulated annealing: `reads` independent restarts of `sweeps` full
/// Metropolis sweeps under geometric beta interpolation. Read 0 starts from
/// all-zeros, later reads from seeded uniform random states; per-read rngs
/// are derived as seed + read index. Fully deterministic for a fixed seed.
SolveResult anneal(const QuboProblem& q, const AnnealSchedule& s);

/// Derived (beta_start, beta_end) defaults for a problem, from single-flip
/// energy-delta bounds.
std::pair<double, double> default_betas(const QuboProblem& q);

/// Pluggable solver registry: anything mapping a QUBO to a SolveResult.
using SolverFn = std::function<SolveResult(const QuboProblem&, const AnnealSchedule&)>;
void register_solver(const std::string& name, SolverFn fn);
SolverFn find_solver(const std::string& name);  // "sa" and "exact" built in
std::vector<std::string> solver_names();

/// Decode a solve result into control-point values; refreshes the result's
/// aux_violations count against the registry.
DecodedModel decode_solution(SolveResult& r, const VariableLayout& layout,
                             const AuxRegistry& registry);
int solution_aux_violations(const SolveResult& r, const AuxRegistry& registry);

}  // namespace qkan
