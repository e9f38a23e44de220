#include "qkan/network.hpp"

#include <cmath>
#include <sstream>

namespace qkan {

KanSpec KanSpec::uniform(std::vector<int> widths, int degree) {
  KanSpec spec;
  spec.widths = std::move(widths);
  for (int l = 0; l + 1 < spec.layer_count(); ++l) {
    for (int j = 0; j < spec.widths[l]; ++j) {
      for (int k = 0; k < spec.widths[l + 1]; ++k) {
        spec.degrees[{l, j, k}] = degree;
      }
    }
  }
  spec.validate();
  return spec;
}

int KanSpec::degree(const EdgeKey& e) const {
  auto it = degrees.find(e);
  if (it == degrees.end()) throw std::invalid_argument("KanSpec: missing edge degree");
  return it->second;
}

void KanSpec::validate() const {
  if (widths.size() < 2) throw std::invalid_argument("KanSpec: need at least two layers");
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("KanSpec: layer widths must be positive");
  }
  for (int l = 0; l + 1 < layer_count(); ++l) {
    for (int j = 0; j < widths[l]; ++j) {
      for (int k = 0; k < widths[l + 1]; ++k) {
        int n = degree({l, j, k});
        if (n < 1 || n > 20) throw std::invalid_argument("KanSpec: edge degree out of range [1,20]");
      }
    }
  }
}

nlohmann::json KanSpec::to_json() const {
  nlohmann::json deg = nlohmann::json::object();
  for (const auto& [e, n] : degrees) {
    std::ostringstream key;
    key << e.layer << ":" << e.in << ":" << e.out;
    deg[key.str()] = n;
  }
  return {{"widths", widths}, {"degrees", deg}};
}

KanSpec KanSpec::from_json(const nlohmann::json& j) {
  KanSpec spec;
  spec.widths = j.at("widths").get<std::vector<int>>();
  for (const auto& [key, n] : j.at("degrees").items()) {
    EdgeKey e;
    char c1 = 0, c2 = 0;
    std::istringstream is(key);
    if (!(is >> e.layer >> c1 >> e.in >> c2 >> e.out) || c1 != ':' || c2 != ':') {
      throw std::invalid_argument("KanSpec: bad degree key '" + key + "'");
    }
    spec.degrees[e] = n.get<int>();
  }
  spec.validate();
  return spec;
}

VariableLayout VariableLayout::build(const KanSpec& spec, const EncodingSpec& enc) {
  spec.validate();
  enc.validate();
  VariableLayout layout;
  layout.spec_ = spec;
  layout.enc_ = enc;
  VarId next = 0;
  const int nexp = enc.exponent_count();
  for (int l = 0; l + 1 < spec.layer_count(); ++l) {
    for (int k = 0; k < spec.widths[l + 1]; ++k) {
      for (int j = 0; j < spec.widths[l]; ++j) {
        EdgeKey e{l, j, k};
        int n = spec.degree(e);
        for (int cp = 0; cp <= n; ++cp) {
          Entry entry;
          entry.edge = e;
          entry.cp = cp;
          for (int b = 0; b < nexp; ++b) entry.code.plus_bits.push_back(next++);
          if (enc.signed_rep) {
            for (int b = 0; b < nexp; ++b) entry.code.minus_bits.push_back(next++);
          }
          layout.index_[{e, cp}] = static_cast<int>(layout.entries_.size());
          layout.entries_.push_back(std::move(entry));
        }
      }
    }
  }
  layout.total_bits_ = next;
  return layout;
}

const ControlPointCode& VariableLayout::code(const EdgeKey& e, int cp) const {
  return entries_[cp_index(e, cp)].code;
}

int VariableLayout::cp_index(const EdgeKey& e, int cp) const {
  auto it = index_.find({e, cp});
  if (it == index_.end()) throw std::invalid_argument("VariableLayout: unknown control point");
  return it->second;
}

long long binomial(int n, int k) {
  if (n < 0 || n > 20 || k < 0) throw std::invalid_argument("binomial: out of range");
  if (k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> bernstein_weights_unchecked(int n, double t) {
  if (n < 1 || n > 20) throw std::invalid_argument("bernstein_weights: degree out of range [1,20]");
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) {
    w[i] = static_cast<double>(binomial(n, i)) * std::pow(1.0 - t, n - i) * std::pow(t, i);
  }
  return w;
}

std::vector<double> bernstein_weights(int n, double t) {
  if (t < 0.0 || t > 1.0) throw std::domain_error("bernstein_weights: t outside [0,1]");
  return bernstein_weights_unchecked(n, t);
}

namespace {

TemplatePoly expansion_template(const ControlPointCode& code, const EncodingSpec& enc) {
  BinaryPolynomial lin = expansion_polynomial(code, enc);
  TemplatePoly out;
  for (const auto& [m, c] : lin.terms()) out.add_term(m, FactorPoly::constant(c));
  return out;
}

}  // namespace

std::vector<TemplatePoly> symbolic_template(const KanSpec& spec, const VariableLayout& layout) {
  const EncodingSpec& enc = layout.encoding();

  // First edge layer: Bernstein weights are known per sample, kept as atoms.
  std::vector<TemplatePoly> values(spec.widths[1]);
  for (int k = 0; k < spec.widths[1]; ++k) {
    for (int j = 0; j < spec.widths[0]; ++j) {
      EdgeKey e{0, j, k};
      int n = spec.degree(e);
      for (int i = 0; i <= n; ++i) {
        TemplatePoly term = TemplatePoly::scale(expansion_template(layout.code(e, i), enc),
                                                FactorPoly::atom(FactorAtom::weight(j, k, i)));
        values[k] += term;
      }
    }
  }

  // Deeper layers substitute the incoming node polynomial into the curve.
  for (int l = 1; l + 1 < spec.layer_count(); ++l) {
    std::vector<TemplatePoly> next(spec.widths[l + 1]);
    for (int k = 0; k < spec.widths[l + 1]; ++k) {
      for (int j = 0; j < spec.widths[l]; ++j) {
        EdgeKey e{l, j, k};
        int n = spec.degree(e);
        TemplatePoly u = values[j];
        TemplatePoly one_minus_u = TemplatePoly::constant(1.0);
        {
          TemplatePoly neg = TemplatePoly::scale(u, FactorPoly::constant(-1.0));
          one_minus_u += neg;
        }
        for (int i = 0; i <= n; ++i) {
          TemplatePoly basis = TemplatePoly::multiply(TemplatePoly::power(one_minus_u, n - i),
                                                      TemplatePoly::power(u, i));
          basis = TemplatePoly::scale(basis, FactorPoly::constant(static_cast<double>(binomial(n, i))));
          next[k] += TemplatePoly::multiply(basis, expansion_template(layout.code(e, i), enc));
        }
      }
    }
    values = std::move(next);
  }
  return values;
}

AtomValues weight_atom_values(const KanSpec& spec, const std::vector<double>& sample) {
  if (static_cast<int>(sample.size()) != spec.input_width()) {
    throw std::invalid_argument("sample feature count does not match network input width");
  }
  AtomValues v;
  for (int k = 0; k < spec.widths[1]; ++k) {
    for (int j = 0; j < spec.widths[0]; ++j) {
      int n = spec.degree({0, j, k});
      std::vector<double> w = bernstein_weights(n, sample[j]);
      for (int i = 0; i <= n; ++i) v[FactorAtom::weight(j, k, i)] = w[i];
    }
  }
  return v;
}

std::vector<BinaryPolynomial> symbolic_output(const KanSpec& spec, const VariableLayout& layout,
                                              const std::vector<double>& sample) {
  AtomValues v = weight_atom_values(spec, sample);
  std::vector<TemplatePoly> tmpl = symbolic_template(spec, layout);
  std::vector<BinaryPolynomial> out;
  out.reserve(tmpl.size());
  for (const auto& t : tmpl) out.push_back(t.instantiate(v));
  return out;
}

nlohmann::json DecodedModel::to_json() const {
  nlohmann::json j = {{"spec", spec.to_json()},
                      {"encoding", encoding.to_json()},
                      {"control", control}};
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& [lo, hi] : input_bounds) bounds.push_back({lo, hi});
  j["input_bounds"] = bounds;
  if (target_bounds) j["target_bounds"] = {target_bounds->first, target_bounds->second};
  return j;
}

DecodedModel DecodedModel::from_json(const nlohmann::json& j) {
  DecodedModel m;
  m.spec = KanSpec::from_json(j.at("spec"));
  m.encoding = EncodingSpec::from_json(j.at("encoding"));
  m.control = j.at("control").get<std::vector<double>>();
  for (const auto& b : j.at("input_bounds")) {
    m.input_bounds.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
  }
  if (j.contains("target_bounds")) {
    m.target_bounds = {j["target_bounds"].at(0).get<double>(), j["target_bounds"].at(1).get<double>()};
  }
  return m;
}

std::vector<double> numeric_forward(const DecodedModel& model, const std::vector<double>& sample) {
  const KanSpec& spec = model.spec;
  if (static_cast<int>(sample.size()) != spec.input_width()) {
    throw std::invalid_argument("numeric_forward: feature count mismatch");
  }
  VariableLayout layout = VariableLayout::build(spec, model.encoding);
  std::vector<double> values = sample;
  for (int l = 0; l + 1 < spec.layer_count(); ++l) {
    std::vector<double> next(spec.widths[l + 1], 0.0);
    for (int k = 0; k < spec.widths[l + 1]; ++k) {
      for (int j = 0; j < spec.widths[l]; ++j) {
        EdgeKey e{l, j, k};
        int n = spec.degree(e);
        std::vector<double> w = bernstein_weights_unchecked(n, values[j]);
        for (int i = 0; i <= n; ++i) {
          next[k] += w[i] * model.control[layout.cp_index(e, i)];
        }
      }
    }
    values = std::move(next);
  }
  return values;
}

double predict_raw(const DecodedModel& model, const std::vector<double>& raw_sample) {
  std::vector<double> norm(raw_sample.size());
  for (std::size_t i = 0; i < raw_sample.size(); ++i) {
    auto [lo, hi] = model.input_bounds.at(i);
    norm[i] = hi > lo ? (raw_sample[i] - lo) / (hi - lo) : 0.0;
  }
  double out = numeric_forward(model, norm).at(0);
  if (model.target_bounds) {
    out = out * (model.target_bounds->second - model.target_bounds->first) + model.target_bounds->first;
  }
  return out;
}

Assignment model_bits(const DecodedModel& model, const VariableLayout& layout) {
  Assignment a;
  for (int i = 0; i < layout.total_control_points(); ++i) {
    Assignment bits = nearest_code(model.control[i], layout.entries()[i].code, layout.encoding());
    a.insert(bits.begin(), bits.end());
  }
  return a;
}

}  // namespace qkan
