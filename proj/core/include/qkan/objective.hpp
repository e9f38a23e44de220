#pragma once

#include "qkan/network.hpp"

namespace qkan {

struct ObjectiveConfig {
  double lambda_val = 1.0;   // validation weighting
  bool normalize_by_n = true;

  nlohmann::json to_json() const {
    return {{"lambda_val", lambda_val}, {"normalize_by_n", normalize_by_n}};
  }
  static ObjectiveConfig from_json(const nlohmann::json& j) {
    return {j.at("lambda_val").get<double>(), j.at("normalize_by_n").get<bool>()};
  }
  bool operator==(const ObjectiveConfig&) const = default;
};

enum class DatasetKind { train, validation };

struct Dataset {
  std::vector<std::vector<double>> inputs;  // n x d
  std::vector<double> targets;              // n (single-output tasks)
  DatasetKind kind = DatasetKind::train;

  std::size_t size() const { return inputs.size(); }
  void validate_normalized() const;  // all features within [0,1]
};

class EmptyDatasetError : public std::runtime_error {
 public:
  EmptyDatasetError() : std::runtime_error("dataset is empty") {}
};

/// Dataset-size-independent sums of the known factor products appearing in
/// the expanded objective, keyed canonically. Values are unnormalized sums
/// in ascending sample order; `count` is the number of samples folded in.
struct MomentTable {
  std::map<FactorMonomial, double> sums;
  std::size_t count = 0;

  void add(const MomentTable& o);
  void subtract(const MomentTable& o);  // throws on count underflow
  bool operator==(const MomentTable&) const = default;
};

/// Squared-error template of one architecture: (y - z)^2 expanded once,
/// sample-independent. Holds every structure the collapsed path needs.
class ObjectiveTemplate {
 public:
  static ObjectiveTemplate build(const KanSpec& spec, const VariableLayout& layout);

  const TemplatePoly& squared() const { return squared_; }
  const std::vector<FactorMonomial>& moment_keys() const { return keys_; }
  const KanSpec& spec() const { return spec_; }

  /// One pass over the dataset; each distinct key is evaluated once per
  /// sample from a shared atom-value table.
  MomentTable collapse(const Dataset& data) const;

  /// Unnormalized objective polynomial from collapsed moments.
  BinaryPolynomial contract(const MomentTable& moments) const;

 private:
  KanSpec spec_;
  TemplatePoly squared_;
  std::vector<FactorMonomial> keys_;
};

/// One sample's squared-error polynomial (y - network(sample))^2, built by
/// direct polynomial squaring — the per-sample route the collapsed path is
/// checked against.
BinaryPolynomial sample_objective(const KanSpec& spec, const VariableLayout& layout,
                                  const std::vector<double>& sample, double target);

/// Collapsed moments of a dataset for the given architecture.
MomentTable collapse_moments(const KanSpec& spec, const VariableLayout& layout,
                             const Dataset& data);

/// Full objective (1/n_t) sum_train + (lambda/n_v) sum_val, assembled via
/// the collapsed-moment path.
BinaryPolynomial assemble(const KanSpec& spec, const VariableLayout& layout, const Dataset& train,
                          const Dataset* val, const ObjectiveConfig& cfg);

/// Objective from already-collapsed moments (the retraining entry point).
BinaryPolynomial assemble_from_moments(const ObjectiveTemplate& tmpl, const MomentTable& train,
                                       const MomentTable* val, const ObjectiveConfig& cfg);

}  // namespace qkan
