#include "qkan/objective.hpp"

namespace qkan {

void Dataset::validate_normalized() const {
  for (const auto& row : inputs) {
    for (double v : row) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("dataset feature outside [0,1]; normalize inputs first");
      }
    }
  }
}

void MomentTable::add(const MomentTable& o) {
  for (const auto& [k, v] : o.sums) sums[k] += v;
  count += o.count;
}

void MomentTable::subtract(const MomentTable& o) {
  if (o.count > count) throw std::underflow_error("MomentTable: sample count underflow");
  for (const auto& [k, v] : o.sums) sums[k] -= v;
  count -= o.count;
}

ObjectiveTemplate ObjectiveTemplate::build(const KanSpec& spec, const VariableLayout& layout) {
  if (spec.output_width() != 1) {
    throw std::invalid_argument("objective: only single-output networks are supported");
  }
  ObjectiveTemplate tmpl;
  tmpl.spec_ = spec;
  TemplatePoly z = symbolic_template(spec, layout).at(0);
  TemplatePoly residual = TemplatePoly::constant(FactorPoly::atom(FactorAtom::target()));
  residual += TemplatePoly::scale(z, FactorPoly::constant(-1.0));
  tmpl.squared_ = TemplatePoly::multiply(residual, residual);
  tmpl.keys_ = tmpl.squared_.moment_keys();
  return tmpl;
}

MomentTable ObjectiveTemplate::collapse(const Dataset& data) const {
  MomentTable table;
  for (const auto& key : keys_) table.sums[key] = 0.0;
  for (std::size_t s = 0; s < data.size(); ++s) {
    AtomValues v = weight_atom_values(spec_, data.inputs[s]);
    v[FactorAtom::target()] = data.targets.at(s);
    for (const auto& key : keys_) table.sums[key] += key.evaluate(v);
  }
  table.count = data.size();
  return table;
}

BinaryPolynomial ObjectiveTemplate::contract(const MomentTable& moments) const {
  BinaryPolynomial out;
  for (const auto& [m, fpoly] : squared_.terms()) {
    double c = 0.0;
    for (const auto& [fm, coeff] : fpoly.terms()) {
      auto it = moments.sums.find(fm);
      if (it == moments.sums.end()) {
        throw std::invalid_argument("contract: moment table missing a required key");
      }
      c += coeff * it->second;
    }
    out.add_term(m, c);
  }
  return out;
}

BinaryPolynomial sample_objective(const KanSpec& spec, const VariableLayout& layout,
                                  const std::vector<double>& sample, double target) {
  if (spec.output_width() != 1) {
    throw std::invalid_argument("objective: only single-output networks are supported");
  }
  BinaryPolynomial z = symbolic_output(spec, layout, sample).at(0);
  BinaryPolynomial residual = BinaryPolynomial::constant(target) - z;
  return BinaryPolynomial::power(residual, 2);
}

MomentTable collapse_moments(const KanSpec& spec, const VariableLayout& layout,
                             const Dataset& data) {
  return ObjectiveTemplate::build(spec, layout).collapse(data);
}

BinaryPolynomial assemble_from_moments(const ObjectiveTemplate& tmpl, const MomentTable& train,
                                       const MomentTable* val, const ObjectiveConfig& cfg) {
  if (train.count == 0) throw EmptyDatasetError();
  BinaryPolynomial out = tmpl.contract(train);
  if (cfg.normalize_by_n) out *= 1.0 / static_cast<double>(train.count);
  if (val != nullptr && val->count > 0) {
    BinaryPolynomial v = tmpl.contract(*val);
    double scale = cfg.lambda_val;
    if (cfg.normalize_by_n) scale /= static_cast<double>(val->count);
    out += v * scale;
  }
  return out;
}

BinaryPolynomial assemble(const KanSpec& spec, const VariableLayout& layout, const Dataset& train,
                          const Dataset* val, const ObjectiveConfig& cfg) {
  if (train.size() == 0) throw EmptyDatasetError();
  train.validate_normalized();
  if (val != nullptr) val->validate_normalized();
  ObjectiveTemplate tmpl = ObjectiveTemplate::build(spec, layout);
  MomentTable mt = tmpl.collapse(train);
  MomentTable mv;
  if (val != nullptr && val->size() > 0) mv = tmpl.collapse(*val);
  return assemble_from_moments(tmpl, mt, (val != nullptr && val->size() > 0) ? &mv : nullptr, cfg);
}

}  // namespace qkan
