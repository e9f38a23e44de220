#include "qkan/baseline.hpp"

#include <cmath>
#include <random>

namespace qkan {

const std::vector<double> kLrGrid = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 1.5};

void GdConfig::validate() const {
  // learning_rate 0 is allowed as an explicit no-op (useful for trace checks)
  if (learning_rate != 0.0 && (learning_rate < 1e-4 || learning_rate > 2.0)) {
    throw std::invalid_argument("GdConfig: learning_rate outside [1e-4, 2.0]");
  }
  if (steps < 1) throw std::invalid_argument("GdConfig: steps must be positive");
}

GdConfig::Optimizer optimizer_from_name(const std::string& name) {
  if (name == "adam") return GdConfig::Optimizer::adam;
  if (name == "sgd") return GdConfig::Optimizer::sgd;
  if (name == "adagrad") return GdConfig::Optimizer::adagrad;
  throw std::invalid_argument("unknown optimizer: " + name);
}

std::string optimizer_name(GdConfig::Optimizer opt) {
  switch (opt) {
    case GdConfig::Optimizer::adam: return "adam";
    case GdConfig::Optimizer::sgd: return "sgd";
    case GdConfig::Optimizer::adagrad: return "adagrad";
  }
  return "?";
}

namespace {

// Flattened network view with precomputed control-point offsets.
struct FastNet {
  const KanSpec* spec;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> edge_info;
  // edge_info[l][k] = list over j of (degree, cp offset of P_0 on edge l:j->k)

  FastNet(const KanSpec& s, const VariableLayout& layout) : spec(&s) {
    edge_info.resize(s.layer_count() - 1);
    for (int l = 0; l + 1 < s.layer_count(); ++l) {
      edge_info[l].resize(s.widths[l + 1]);
      for (int k = 0; k < s.widths[l + 1]; ++k) {
        for (int j = 0; j < s.widths[l]; ++j) {
          EdgeKey e{l, j, k};
          edge_info[l][k].emplace_back(s.degree(e), layout.cp_index(e, 0));
        }
      }
    }
  }

  // Forward pass caching every node value.
  std::vector<std::vector<double>> forward(const std::vector<double>& control,
                                           const std::vector<double>& sample) const {
    std::vector<std::vector<double>> nodes(spec->layer_count());
    nodes[0] = sample;
    for (int l = 0; l + 1 < spec->layer_count(); ++l) {
      nodes[l + 1].assign(spec->widths[l + 1], 0.0);
      for (int k = 0; k < spec->widths[l + 1]; ++k) {
        for (int j = 0; j < spec->widths[l]; ++j) {
          auto [n, off] = edge_info[l][k][j];
          std::vector<double> w = bernstein_weights_unchecked(n, nodes[l][j]);
          for (int i = 0; i <= n; ++i) nodes[l + 1][k] += w[i] * control[off + i];
        }
      }
    }
    return nodes;
  }

  // Accumulate d(output_0)/dP scaled by `scale` into grad; returns nothing.
  void backward(const std::vector<double>& control, const std::vector<std::vector<double>>& nodes,
                double scale, std::vector<double>& grad) const {
    const int L = spec->layer_count();
    std::vector<double> dnode(spec->widths[L - 1], 0.0);
    dnode[0] = scale;  // single output
    for (int l = L - 2; l >= 0; --l) {
      std::vector<double> dprev(spec->widths[l], 0.0);
      for (int k = 0; k < spec->widths[l + 1]; ++k) {
        if (dnode[k] == 0.0) continue;
        for (int j = 0; j < spec->widths[l]; ++j) {
          auto [n, off] = edge_info[l][k][j];
          double t = nodes[l][j];
          std::vector<double> w = bernstein_weights_unchecked(n, t);
          for (int i = 0; i <= n; ++i) grad[off + i] += dnode[k] * w[i];
          // dB/dt = n * sum (P_{i+1} - P_i) * Bernstein_{n-1,i}(t)
          double dBdt = 0.0;
          if (n == 1) {
            dBdt = control[off + 1] - control[off];
          } else {
            std::vector<double> wl = bernstein_weights_unchecked(n - 1, t);
            for (int i = 0; i < n; ++i) dBdt += (control[off + i + 1] - control[off + i]) * wl[i];
            dBdt *= n;
          }
          dprev[j] += dnode[k] * dBdt;
        }
      }
      dnode = std::move(dprev);
    }
  }
};

double mse_with(const FastNet& net, const std::vector<double>& control, const Dataset& data) {
  double total = 0.0;
  for (std::size_t s = 0; s < data.size(); ++s) {
    double out = net.forward(control, data.inputs[s]).back()[0];
    double r = out - data.targets[s];
    total += r * r;
  }
  return total / static_cast<double>(data.size());
}

std::vector<double> gradient_with(const FastNet& net, const std::vector<double>& control,
                                  const Dataset& batch) {
  std::vector<double> grad(control.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (std::size_t s = 0; s < batch.size(); ++s) {
    auto nodes = net.forward(control, batch.inputs[s]);
    double residual = nodes.back()[0] - batch.targets[s];
    net.backward(control, nodes, 2.0 * residual * inv_n, grad);
  }
  return grad;
}

}  // namespace

double dataset_mse(const DecodedModel& model, const Dataset& data) {
  VariableLayout layout = VariableLayout::build(model.spec, model.encoding);
  return mse_with(FastNet(model.spec, layout), model.control, data);
}

std::vector<double> gradient(const DecodedModel& model, const Dataset& batch) {
  if (model.spec.output_width() != 1) {
    throw std::invalid_argument("gradient: only single-output networks are supported");
  }
  VariableLayout layout = VariableLayout::build(model.spec, model.encoding);
  return gradient_with(FastNet(model.spec, layout), model.control, batch);
}

GdOutcome train_gd(const KanSpec& spec, const EncodingSpec& enc, const Dataset& train,
                   const Dataset* val, const GdConfig& cfg) {
  cfg.validate();
  if (train.size() == 0) throw EmptyDatasetError();
  if (spec.output_width() != 1) {
    throw std::invalid_argument("train_gd: only single-output networks are supported");
  }

  VariableLayout layout = VariableLayout::build(spec, enc);
  FastNet net(spec, layout);

  GdOutcome out;
  out.model.spec = spec;
  out.model.encoding = enc;
  out.model.input_bounds.assign(spec.input_width(), {0.0, 1.0});

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> init(enc.min_value(), enc.max_value());
  std::vector<double>& p = out.model.control;
  p.resize(layout.total_control_points());
  for (double& v : p) v = init(rng);

  std::vector<double> m(p.size(), 0.0), v2(p.size(), 0.0);  // adam / adagrad state

  for (int step = 1; step <= cfg.steps; ++step) {
    std::vector<double> g = gradient_with(net, p, train);
    const double lr = cfg.learning_rate;
    switch (cfg.optimizer) {
      case GdConfig::Optimizer::sgd:
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
        break;
      case GdConfig::Optimizer::adagrad:
        for (std::size_t i = 0; i < p.size(); ++i) {
          v2[i] += g[i] * g[i];
          p[i] -= lr * g[i] / (std::sqrt(v2[i]) + cfg.epsilon);
        }
        break;
      case GdConfig::Optimizer::adam: {
        double bc1 = 1.0 - std::pow(cfg.beta1, step);
        double bc2 = 1.0 - std::pow(cfg.beta2, step);
        for (std::size_t i = 0; i < p.size(); ++i) {
          m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
          v2[i] = cfg.beta2 * v2[i] + (1.0 - cfg.beta2) * g[i] * g[i];
          p[i] -= lr * (m[i] / bc1) / (std::sqrt(v2[i] / bc2) + cfg.epsilon);
        }
        break;
      }
    }

    double train_mse = mse_with(net, p, train);
    if (!std::isfinite(train_mse)) throw DivergenceError(step);
    out.trace.train_mse.push_back(train_mse);
    if (val != nullptr && val->size() > 0) {
      out.trace.val_mse.push_back(mse_with(net, p, *val));
    }
  }
  return out;
}

SweepOutcome lr_sweep(const KanSpec& spec, const EncodingSpec& enc, const Dataset& train,
                      const Dataset* val, GdConfig cfg) {
  SweepOutcome best;
  double best_final = 0.0;
  bool have = false;
  for (double lr : kLrGrid) {
    cfg.learning_rate = lr;
    try {
      GdOutcome run = train_gd(spec, enc, train, val, cfg);
      double final_mse = run.trace.train_mse.back();
      if (!have || final_mse < best_final) {
        best.best_lr = lr;
        best.outcome = std::move(run);
        best_final = final_mse;
        have = true;
      }
    } catch (const DivergenceError&) {
      continue;  // diverged rates simply lose the sweep
    }
  }
  if (!have) throw std::runtime_error("lr_sweep: every learning rate diverged");
  return best;
}

}  // namespace qkan
