#pragma once

#include "qkan/objective.hpp"

namespace qkan {

struct GdConfig {
  enum class Optimizer { adam, sgd, adagrad };
  Optimizer optimizer = Optimizer::adam;
  double learning_rate = 0.01;
  int steps = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;  // learning_rate in [1e-4, 2.0]
};

GdConfig::Optimizer optimizer_from_name(const std::string& name);
std::string optimizer_name(GdConfig::Optimizer opt);

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(int step)
      : std::runtime_error("training diverged at step " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct TrainTrace {
  std::vector<double> train_mse;
  std::vector<double> val_mse;  // empty when no validation set
};

struct GdOutcome {
  DecodedModel model;
  TrainTrace trace;
};

/// Mean squared error of the model over a normalized dataset.
double dataset_mse(const DecodedModel& model, const Dataset& data);

/// Exact analytic gradient of the dataset-mean squared error with respect
/// to every control point, in layout order.
std::vector<double> gradient(const DecodedModel& model, const Dataset& batch);

/// Full-batch training of the continuous-parameter network. Control points
/// are initialized i.i.d. uniform over the encoding's representable range,
/// so the continuous and discrete arms search the same box.
GdOutcome train_gd(const KanSpec& spec, const EncodingSpec& enc, const Dataset& train,
                   const Dataset* val, const GdConfig& cfg);

/// Learning-rate sweep over the standard grid; returns the run with the
/// lowest final training MSE (earlier grid entries win ties).
struct SweepOutcome {
  double best_lr = 0.0;
  GdOutcome outcome;
};
SweepOutcome lr_sweep(const KanSpec& spec, const EncodingSpec& enc, const Dataset& train,
                      const Dataset* val, GdConfig cfg);

extern const std::vector<double> kLrGrid;  // {0.001, ..., 1.5}

}  // namespace qkan
