#pragma once

#include "qkan/objective.hpp"
#include "qkan/solver.hpp"

#include <filesystem>
#include <optional>

namespace qkan {

class StateVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class StateDigestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class StateIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted collapsed objective: unnormalized moment sums plus sample
/// counts, the architecture that produced them, and the normalization
/// bounds frozen at the initial build. Everything needed to re-solve, and
/// nothing that grows with the number of samples seen.
struct ObjectiveState {
  static constexpr int kVersion = 1;

  KanSpec spec;
  EncodingSpec encoding;
  ObjectiveConfig objective;
  MomentTable train;              // count == n_t
  std::optional<MomentTable> val; // count == n_v when present
  std::vector<std::pair<double, double>> input_bounds;
  std::optional<std::pair<double, double>> target_bounds;

  bool operator==(const ObjectiveState&) const = default;
};

/// Min/max per input column of one or more raw datasets.
std::vector<std::pair<double, double>> input_bounds_of(const Dataset& a, const Dataset* b = nullptr);

/// Apply frozen bounds to a raw batch. Features outside the stored range
/// are errors: renormalizing would invalidate every stored moment.
Dataset normalize_with_bounds(const Dataset& raw, const ObjectiveState& state);

/// Initial build: freeze bounds from the data, collapse both partitions.
ObjectiveState build_state(const KanSpec& spec, const EncodingSpec& enc,
                           const ObjectiveConfig& cfg, const Dataset& raw_train,
                           const Dataset* raw_val = nullptr,
                           std::optional<std::pair<double, double>> target_bounds = std::nullopt);

/// As above with caller-supplied input bounds (e.g. analytic task geometry),
/// so later batches from the same distribution cannot fall outside the box.
ObjectiveState build_state_with_bounds(const KanSpec& spec, const EncodingSpec& enc,
                                       const ObjectiveConfig& cfg, const Dataset& raw_train,
                                       std::vector<std::pair<double, double>> input_bounds,
                                       const Dataset* raw_val = nullptr,
                                       std::optional<std::pair<double, double>> target_bounds =
                                           std::nullopt);

/// Fold a new raw batch into the state (batch.kind routes the partition).
/// Cost is O(|batch|); previously seen samples are never revisited.
ObjectiveState add_samples(const ObjectiveState& state, const Dataset& raw_batch);

/// Subtract a previously-added batch. The caller is responsible for only
/// removing batches that were added: moments alone cannot verify this, and
/// removing unseen data silently corrupts the objective (counts are the
/// only guard).
ObjectiveState remove_samples(const ObjectiveState& state, const Dataset& raw_batch);

void save_state(const ObjectiveState& state, const std::filesystem::path& path);
ObjectiveState load_state(const std::filesystem::path& path);

struct RetrainResult {
  DecodedModel model;
  SolveResult solve;
  QuboProblem qubo;
};

/// Normalize moments, assemble, reduce, solve, decode.
RetrainResult retrain(const ObjectiveState& state, double w_factor, const AnnealSchedule& schedule,
                      const std::string& solver = "sa");

}  // namespace qkan
