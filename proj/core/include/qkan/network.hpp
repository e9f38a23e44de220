#pragma once

#include "qkan/encoding.hpp"
#include "qkan/factors.hpp"

#include <map>
#include <optional>
#include <tuple>

#include <json.hpp>

namespace qkan {

/// Edge between node `in` of node-layer `layer` and node `out` of node-layer
/// `layer + 1`.
struct EdgeKey {
  int layer = 0;
  int in = 0;
  int out = 0;
  auto operator<=>(const EdgeKey&) const = default;
};

/// Layer widths plus one Bezier degree per edge. Node output is the plain
/// sum of its incoming edge curves.
struct KanSpec {
  std::vector<int> widths;
  std::map<EdgeKey, int> degrees;

  /// Uniform-degree network over the given widths.
  static KanSpec uniform(std::vector<int> widths, int degree);

  int degree(const EdgeKey& e) const;
  int layer_count() const { return static_cast<int>(widths.size()); }
  int input_width() const { return widths.front(); }
  int output_width() const { return widths.back(); }
  void validate() const;

  /// {"widths":[...],"degrees":{"layer:in:out":n,...}}
  nlohmann::json to_json() const;
  static KanSpec from_json(const nlohmann::json& j);
  bool operator==(const KanSpec&) const = default;
};

/// Deterministic VarId layout: control points ordered ascending by
/// (layer, output node, input node, control point index), bits within a
/// point by (plus rail then minus rail, exponents ascending).
class VariableLayout {
 public:
  static VariableLayout build(const KanSpec& spec, const EncodingSpec& enc);

  struct Entry {
    EdgeKey edge;
    int cp = 0;  // control point index along the edge's curve
    ControlPointCode code;
  };

  const std::vector<Entry>& entries() const { return entries_; }
  const ControlPointCode& code(const EdgeKey& e, int cp) const;
  /// Position of (edge, cp) in the canonical control-point order.
  int cp_index(const EdgeKey& e, int cp) const;
  int total_control_points() const { return static_cast<int>(entries_.size()); }
  VarId total_bits() const { return total_bits_; }
  const KanSpec& spec() const { return spec_; }
  const EncodingSpec& encoding() const { return enc_; }

 private:
  KanSpec spec_;
  EncodingSpec enc_;
  std::vector<Entry> entries_;
  std::map<std::pair<EdgeKey, int>, int> index_;
  VarId total_bits_ = 0;
};

/// Bernstein basis weights C(n,i)(1-t)^(n-i) t^i for i = 0..n.
/// Throws std::domain_error for t outside [0,1]; degree capped at 20.
std::vector<double> bernstein_weights(int n, double t);

/// Same weights without the [0,1] range check; inner-layer node values are
/// formally unbounded and are evaluated as-is.
std::vector<double> bernstein_weights_unchecked(int n, double t);

/// Exact binomial coefficient, n <= 20.
long long binomial(int n, int k);

/// Sample-independent symbolic forward pass: one TemplatePoly per output
/// node, in the network's control-point bits, with first-layer Bernstein
/// weights left as factor atoms.
std::vector<TemplatePoly> symbolic_template(const KanSpec& spec, const VariableLayout& layout);

/// Atom values of every first-layer weight atom at one (normalized) sample.
AtomValues weight_atom_values(const KanSpec& spec, const std::vector<double>& sample);

/// Symbolic forward pass at a concrete sample: one BinaryPolynomial in the
/// control-point bits per output node.
std::vector<BinaryPolynomial> symbolic_output(const KanSpec& spec, const VariableLayout& layout,
                                              const std::vector<double>& sample);

/// Concrete network: decoded control point values in layout order plus the
/// input normalization recorded at training time. `target_bounds`, when
/// present, maps the network's unit-scale output back to raw target units.
struct DecodedModel {
  KanSpec spec;
  EncodingSpec encoding;
  std::vector<double> control;  // layout order
  std::vector<std::pair<double, double>> input_bounds;
  std::optional<std::pair<double, double>> target_bounds;

  nlohmann::json to_json() const;
  static DecodedModel from_json(const nlohmann::json& j);
};

/// Plain floating-point forward pass on normalized inputs.
std::vector<double> numeric_forward(const DecodedModel& model, const std::vector<double>& sample);

/// Normalize a raw sample with the model's stored bounds, run the forward
/// pass, and undo target normalization when bounds are present.
double predict_raw(const DecodedModel& model, const std::vector<double>& raw_sample);

/// Bit assignment encoding each control point of `model` (values must be
/// representable grid points for exact round trips).
Assignment model_bits(const DecodedModel& model, const VariableLayout& layout);

}  // namespace qkan
