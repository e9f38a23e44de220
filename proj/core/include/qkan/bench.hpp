#pragma once

#include "qkan/baseline.hpp"
#include "qkan/session.hpp"

#include <filesystem>
#include <set>

namespace qkan {

enum class TaskName { circle, moons, reg1, reg2_sph, reg3 };

TaskName task_from_name(const std::string& name);
std::string task_name(TaskName t);
bool is_classification(TaskName t);

/// Fully seeded experiment description. Generators are pure functions of
/// the fields, and train/val/test draw from disjoint seed streams.
struct TaskSpec {
  TaskName name = TaskName::circle;
  std::size_t n_train = 10000;
  std::size_t n_val = 0;
  std::size_t n_test = 1000;
  double noise = 0.05;  // classification only
  std::uint64_t seed = 1;
  KanSpec kan;
  EncodingSpec encoding;
  bool normalize_targets = false;  // regression: fit/report on unit target scale

  /// Desk-scale defaults for a task (shape, degrees, encoding, sizes).
  static TaskSpec defaults(TaskName t);

  nlohmann::json to_json() const;
};

struct GeneratedTask {
  Dataset train;  // raw inputs
  Dataset val;
  Dataset test;
  std::vector<std::pair<double, double>> input_bounds;  // analytic, batch-stable
  std::optional<std::pair<double, double>> target_bounds;
};

GeneratedTask generate(const TaskSpec& task);

/// Extra raw batch from the same distribution on its own seed stream, for
/// the retraining protocol.
Dataset generate_batch(const TaskSpec& task, std::size_t n, std::uint64_t stream);

struct ClassificationReport {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
};
struct RegressionReport {
  double mse = 0, r2 = 0;
};

/// Threshold predictions at 0.5, positive class = 1.
ClassificationReport classification_metrics(const std::vector<double>& pred,
                                            const std::vector<double>& truth);
/// Throws on empty input or zero-variance truth (R^2 undefined).
RegressionReport regression_metrics(const std::vector<double>& pred,
                                    const std::vector<double>& truth);

struct ExperimentOptions {
  AnnealSchedule schedule;
  double w_factor = 20.0;
  GdConfig gd;
  bool gd_lr_sweep = false;
  int retrain_rounds = 0;
  std::size_t retrain_batch = 0;
};

struct ArmResult {
  std::string arm;
  bool ok = true;
  std::string error;
  std::optional<ClassificationReport> classification;
  std::optional<RegressionReport> regression;
  double preprocess_s = 0, solve_s = 0, total_s = 0;
  double best_energy = 0;        // annealing arms
  int aux_violations = 0;        // annealing arms
  int qubits = 0;                // annealing arms
  std::vector<double> retrain_s; // per retraining round
  DecodedModel model;
};

/// Train every requested arm on byte-identical data and score it on the
/// shared test split; writes report.json and metrics.csv under out_dir.
/// A failing arm is recorded and the experiment continues.
std::vector<ArmResult> run_experiment(const TaskSpec& task, const std::set<std::string>& arms,
                                      const std::filesystem::path& out_dir,
                                      const ExperimentOptions& opt);

struct SweepRun {
  std::uint64_t seed = 0;
  double mse = 0, r2 = 0, energy = 0;
};

/// 50-run seeded SA distributions for reg3 with the swept bottom-edge
/// degree in {1, 2}; writes sweep.csv and sweep.json under out_dir.
std::map<int, std::vector<SweepRun>> run_degree_sweep(const TaskSpec& base, int runs,
                                                      const std::filesystem::path& out_dir,
                                                      const ExperimentOptions& opt);

/// KanSpec for reg3 with the given swept degree on edge x, fixed degree 2
/// on edge y and degree 1 on the top edge.
KanSpec reg3_kan(int swept_degree);

}  // namespace qkan
