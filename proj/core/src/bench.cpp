#include "qkan/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

namespace qkan {

namespace {

constexpr double kPi = 3.14159265358979323846;

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL * (stream + 1));
}

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

TaskName task_from_name(const std::string& name) {
  if (name == "circle") return TaskName::circle;
  if (name == "moons") return TaskName::moons;
  if (name == "reg1") return TaskName::reg1;
  if (name == "reg2_sph") return TaskName::reg2_sph;
  if (name == "reg3") return TaskName::reg3;
  throw std::invalid_argument("unknown task: " + name);
}

std::string task_name(TaskName t) {
  switch (t) {
    case TaskName::circle: return "circle";
    case TaskName::moons: return "moons";
    case TaskName::reg1: return "reg1";
    case TaskName::reg2_sph: return "reg2_sph";
    case TaskName::reg3: return "reg3";
  }
  return "?";
}

bool is_classification(TaskName t) { return t == TaskName::circle || t == TaskName::moons; }

KanSpec reg3_kan(int swept_degree) {
  KanSpec spec;
  spec.widths = {2, 1, 1};
  spec.degrees[{0, 0, 0}] = swept_degree;
  spec.degrees[{0, 1, 0}] = 2;
  spec.degrees[{1, 0, 0}] = 1;
  spec.validate();
  return spec;
}

TaskSpec TaskSpec::defaults(TaskName t) {
  TaskSpec task;
  task.name = t;
  task.encoding = EncodingSpec{-2, 0, true};
  switch (t) {
    case TaskName::circle:
    case TaskName::moons:
      task.kan = KanSpec::uniform({2, 1}, 2);
      task.n_train = 10000;
      task.n_test = 1000;
      task.noise = 0.05;
      break;
    case TaskName::reg1:
      task.kan = KanSpec::uniform({2, 1, 1}, 2);
      task.n_train = 10000;
      task.n_test = 1000;
      task.normalize_targets = true;
      break;
    case TaskName::reg2_sph:
      task.kan = KanSpec::uniform({2, 1}, 2);
      task.n_train = 10000;
      task.n_test = 1000;
      break;
    case TaskName::reg3:
      task.kan = reg3_kan(1);
      task.n_train = 10000;
      task.n_test = 1000;
      task.encoding = EncodingSpec{-2, 0, false};
      task.normalize_targets = true;
      break;
  }
  return task;
}

nlohmann::json TaskSpec::to_json() const {
  return {{"name", task_name(name)},     {"n_train", n_train},
          {"n_val", n_val},              {"n_test", n_test},
          {"noise", noise},              {"seed", seed},
          {"kan", kan.to_json()},        {"encoding", encoding.to_json()},
          {"normalize_targets", normalize_targets}};
}

namespace {

struct TaskGeometry {
  std::vector<std::pair<double, double>> input_bounds;
  std::pair<double, double> target_bounds;
};

TaskGeometry geometry(TaskName t) {
  switch (t) {
    case TaskName::circle:
      return {{{-1.3, 1.3}, {-1.3, 1.3}}, {0.0, 1.0}};
    case TaskName::moons:
      return {{{-1.25, 2.25}, {-0.75, 1.25}}, {0.0, 1.0}};
    case TaskName::reg1:
      return {{{-1.0, 1.0}, {-1.0, 1.0}}, {-1.5, 1.5}};
    case TaskName::reg2_sph:
      return {{{0.0, kPi}, {0.0, 2.0 * kPi}},
              {-0.5 * std::sqrt(3.0 / kPi), 0.5 * std::sqrt(3.0 / kPi)}};
    case TaskName::reg3:
      // sampled over the monotone quadrant: the low-degree additive model is
      // blind to the even symmetry a sign-symmetric box would introduce
      return {{{0.0, 1.0}, {0.0, 1.0}}, {2.0, 2.0 * std::sqrt(3.0)}};
  }
  throw std::logic_error("geometry: bad task");
}

}  // namespace

Dataset generate_batch(const TaskSpec& task, std::size_t n, std::uint64_t stream) {
  std::mt19937_64 rng = stream_rng(task.seed, stream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TaskGeometry geo = geometry(task.name);

  Dataset data;
  data.inputs.reserve(n);
  data.targets.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    switch (task.name) {
      case TaskName::circle: {
        int label = static_cast<int>(s % 2);  // 1 = inner ring
        double angle = 2.0 * kPi * unif(rng);
        double r = label ? 0.5 : 1.0;
        double x = r * std::cos(angle) + task.noise * gauss(rng);
        double y = r * std::sin(angle) + task.noise * gauss(rng);
        data.inputs.push_back({clip(x, geo.input_bounds[0].first, geo.input_bounds[0].second),
                               clip(y, geo.input_bounds[1].first, geo.input_bounds[1].second)});
        data.targets.push_back(static_cast<double>(label));
        break;
      }
      case TaskName::moons: {
        int label = static_cast<int>(s % 2);
        double t = kPi * unif(rng);
        double x = label ? 1.0 - std::cos(t) : std::cos(t);
        double y = label ? 0.5 - std::sin(t) : std::sin(t);
        x += task.noise * gauss(rng);
        y += task.noise * gauss(rng);
        data.inputs.push_back({clip(x, geo.input_bounds[0].first, geo.input_bounds[0].second),
                               clip(y, geo.input_bounds[1].first, geo.input_bounds[1].second)});
        data.targets.push_back(static_cast<double>(label));
        break;
      }
      case TaskName::reg1: {
        double x = 2.0 * unif(rng) - 1.0;
        double y = 2.0 * unif(rng) - 1.0;
        data.inputs.push_back({x, y});
        data.targets.push_back(3.0 * x / (std::exp(y) + std::exp(-y)));
        break;
      }
      case TaskName::reg2_sph: {
        double theta = kPi * unif(rng);
        double phi = 2.0 * kPi * unif(rng);
        data.inputs.push_back({theta, phi});
        data.targets.push_back(0.5 * std::sqrt(3.0 / kPi) * std::cos(theta));
        break;
      }
      case TaskName::reg3: {
        double lo = geo.input_bounds[0].first, hi = geo.input_bounds[0].second;
        double x = lo + (hi - lo) * unif(rng);
        double y = lo + (hi - lo) * unif(rng);
        data.inputs.push_back({x, y});
        data.targets.push_back(2.0 * std::sqrt(1.0 + x * x + y * y));
        break;
      }
    }
  }
  return data;
}

GeneratedTask generate(const TaskSpec& task) {
  GeneratedTask out;
  out.train = generate_batch(task, task.n_train, 0);
  out.val = generate_batch(task, task.n_val, 1);
  out.val.kind = DatasetKind::validation;
  out.test = generate_batch(task, task.n_test, 2);
  TaskGeometry geo = geometry(task.name);
  out.input_bounds = geo.input_bounds;
  if (task.normalize_targets && !is_classification(task.name)) {
    out.target_bounds = geo.target_bounds;
  }
  return out;
}

ClassificationReport classification_metrics(const std::vector<double>& pred,
                                            const std::vector<double>& truth) {
  if (pred.empty() || pred.size() != truth.size()) {
    throw std::invalid_argument("classification_metrics: empty or mismatched inputs");
  }
  ClassificationReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    bool p = pred[i] >= 0.5;
    bool t = truth[i] >= 0.5;
    if (p && t) ++r.tp;
    else if (p && !t) ++r.fp;
    else if (!p && t) ++r.fn;
    else ++r.tn;
  }
  double n = static_cast<double>(pred.size());
  r.accuracy = (r.tp + r.tn) / n;
  r.precision = (r.tp + r.fp) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
  r.recall = (r.tp + r.fn) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.f1 = (r.precision + r.recall) > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                                      : 0.0;
  return r;
}

RegressionReport regression_metrics(const std::vector<double>& pred,
                                    const std::vector<double>& truth) {
  if (pred.empty() || pred.size() != truth.size()) {
    throw std::invalid_argument("regression_metrics: empty or mismatched inputs");
  }
  double mean = 0.0;
  for (double y : truth) mean += y;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - pred[i]) * (truth[i] - pred[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) throw std::invalid_argument("regression_metrics: zero-variance truth, R^2 undefined");
  RegressionReport r;
  r.mse = ss_res / static_cast<double>(truth.size());
  r.r2 = 1.0 - ss_res / ss_tot;
  return r;
}

namespace {

// Shared normalization so every arm sees byte-identical data.
Dataset normalize_for_arms(const Dataset& raw, const GeneratedTask& gen) {
  Dataset out = raw;
  for (auto& row : out.inputs) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto [lo, hi] = gen.input_bounds[i];
      row[i] = (row[i] - lo) / (hi - lo);
    }
  }
  if (gen.target_bounds) {
    auto [lo, hi] = *gen.target_bounds;
    for (double& y : out.targets) y = (y - lo) / (hi - lo);
  }
  return out;
}

std::vector<double> model_predictions(const DecodedModel& model, const Dataset& norm_test) {
  std::vector<double> preds;
  preds.reserve(norm_test.size());
  VariableLayout layout = VariableLayout::build(model.spec, model.encoding);
  for (const auto& row : norm_test.inputs) {
    preds.push_back(numeric_forward(model, row).at(0));
  }
  (void)layout;
  return preds;
}

// Regression metrics are reported in raw target units; predictions and
// targets are mapped back through the recorded bounds before scoring.
RegressionReport score_regression(const std::vector<double>& preds, const Dataset& norm_test,
                                  const std::optional<std::pair<double, double>>& target_bounds) {
  if (!target_bounds) return regression_metrics(preds, norm_test.targets);
  auto [lo, hi] = *target_bounds;
  std::vector<double> p = preds, t = norm_test.targets;
  for (double& v : p) v = lo + (hi - lo) * v;
  for (double& v : t) v = lo + (hi - lo) * v;
  return regression_metrics(p, t);
}

void score_arm(ArmResult& arm, const TaskSpec& task, const Dataset& norm_test,
               const std::optional<std::pair<double, double>>& target_bounds) {
  std::vector<double> preds = model_predictions(arm.model, norm_test);
  if (is_classification(task.name)) {
    arm.classification = classification_metrics(preds, norm_test.targets);
  } else {
    arm.regression = score_regression(preds, norm_test, target_bounds);
  }
}

nlohmann::json arm_json(const ArmResult& a) {
  nlohmann::json j = {{"arm", a.arm}, {"ok", a.ok}};
  if (!a.ok) {
    j["error"] = a.error;
    return j;
  }
  if (a.classification) {
    const auto& c = *a.classification;
    j["metrics"] = {{"accuracy", c.accuracy}, {"precision", c.precision},
                    {"recall", c.recall},     {"f1", c.f1},
                    {"tp", c.tp},             {"fp", c.fp},
                    {"tn", c.tn},             {"fn", c.fn}};
  }
  if (a.regression) {
    j["metrics"] = {{"mse", a.regression->mse}, {"r2", a.regression->r2}};
  }
  j["timing"] = {{"preprocess_s", a.preprocess_s}, {"solve_s", a.solve_s}, {"total_s", a.total_s}};
  if (!a.retrain_s.empty()) j["retrain_s"] = a.retrain_s;
  if (a.qubits > 0) {
    j["qubits"] = a.qubits;
    j["best_energy"] = a.best_energy;
    j["aux_violations"] = a.aux_violations;
  }
  return j;
}

}  // namespace

std::vector<ArmResult> run_experiment(const TaskSpec& task, const std::set<std::string>& arms,
                                      const std::filesystem::path& out_dir,
                                      const ExperimentOptions& opt) {
  std::filesystem::create_directories(out_dir);
  GeneratedTask gen = generate(task);
  Dataset norm_train = normalize_for_arms(gen.train, gen);
  Dataset norm_val = normalize_for_arms(gen.val, gen);
  norm_val.kind = DatasetKind::validation;
  Dataset norm_test = normalize_for_arms(gen.test, gen);

  std::vector<ArmResult> results;
  for (const std::string& name : arms) {
    ArmResult arm;
    arm.arm = name;
    try {
      if (name == "sa" || name == "exact") {
        double t0 = now_s();
        ObjectiveState state = build_state_with_bounds(
            task.kan, task.encoding, ObjectiveConfig{}, gen.train, gen.input_bounds,
            gen.val.size() > 0 ? &gen.val : nullptr, gen.target_bounds);
        VariableLayout layout = VariableLayout::build(task.kan, task.encoding);
        ObjectiveTemplate tmpl = ObjectiveTemplate::build(task.kan, layout);
        BinaryPolynomial obj = assemble_from_moments(
            tmpl, state.train, state.val ? &*state.val : nullptr, state.objective);
        QuboProblem qubo = reduce(obj, opt.w_factor, layout.total_bits());
        double t1 = now_s();
        SolveResult solve = find_solver(name)(qubo, opt.schedule);
        double t2 = now_s();
        arm.model = decode_solution(solve, layout, qubo.registry);
        arm.model.input_bounds = gen.input_bounds;
        arm.model.target_bounds = gen.target_bounds;
        arm.preprocess_s = t1 - t0;
        arm.solve_s = t2 - t1;
        arm.total_s = t2 - t0;
        arm.best_energy = solve.best_energy;
        arm.aux_violations = solve.aux_violations;
        arm.qubits = qubit_count(layout, qubo.registry);

        for (int round = 0; round < opt.retrain_rounds; ++round) {
          Dataset batch = generate_batch(task, opt.retrain_batch, 3 + round);
          double r0 = now_s();
          state = add_samples(state, batch);
          RetrainResult rr = retrain(state, opt.w_factor, opt.schedule, name);
          arm.retrain_s.push_back(now_s() - r0);
          arm.model = rr.model;
        }
      } else {
        GdConfig cfg = opt.gd;
        cfg.optimizer = optimizer_from_name(name);
        double t0 = now_s();
        GdOutcome run;
        if (opt.gd_lr_sweep) {
          run = lr_sweep(task.kan, task.encoding, norm_train,
                         norm_val.size() > 0 ? &norm_val : nullptr, cfg)
                    .outcome;
        } else {
          run = train_gd(task.kan, task.encoding, norm_train,
                         norm_val.size() > 0 ? &norm_val : nullptr, cfg);
        }
        arm.total_s = now_s() - t0;
        arm.model = run.model;
        arm.model.input_bounds = gen.input_bounds;
        arm.model.target_bounds = gen.target_bounds;

        // Retraining comparison: gradient descent re-trains on the
        // cumulative dataset each round.
        Dataset cumulative = norm_train;
        for (int round = 0; round < opt.retrain_rounds; ++round) {
          Dataset batch = normalize_for_arms(generate_batch(task, opt.retrain_batch, 3 + round), gen);
          cumulative.inputs.insert(cumulative.inputs.end(), batch.inputs.begin(), batch.inputs.end());
          cumulative.targets.insert(cumulative.targets.end(), batch.targets.begin(),
                                    batch.targets.end());
          double r0 = now_s();
          run = train_gd(task.kan, task.encoding, cumulative,
                         norm_val.size() > 0 ? &norm_val : nullptr, cfg);
          arm.retrain_s.push_back(now_s() - r0);
          arm.model = run.model;
          arm.model.input_bounds = gen.input_bounds;
          arm.model.target_bounds = gen.target_bounds;
        }
      }
      score_arm(arm, task, norm_test, gen.target_bounds);
    } catch (const std::exception& e) {
      arm.ok = false;
      arm.error = e.what();
    }
    results.push_back(std::move(arm));
  }

  nlohmann::json report = {{"task", task.to_json()}, {"arms", nlohmann::json::array()}};
  for (const auto& a : results) report["arms"].push_back(arm_json(a));
  std::ofstream(out_dir / "report.json") << report.dump(2) << "\n";

  std::ofstream csv(out_dir / "metrics.csv");
  csv << "arm,metric,value\n";
  for (const auto& a : results) {
    if (!a.ok) {
      csv << a.arm << ",error,1\n";
      continue;
    }
    if (a.classification) {
      csv << a.arm << ",accuracy," << a.classification->accuracy << "\n"
          << a.arm << ",precision," << a.classification->precision << "\n"
          << a.arm << ",recall," << a.classification->recall << "\n"
          << a.arm << ",f1," << a.classification->f1 << "\n";
    }
    if (a.regression) {
      csv << a.arm << ",mse," << a.regression->mse << "\n"
          << a.arm << ",r2," << a.regression->r2 << "\n";
    }
    csv << a.arm << ",total_s," << a.total_s << "\n";
    for (std::size_t i = 0; i < a.retrain_s.size(); ++i) {
      csv << a.arm << ",retrain_s_" << i << "," << a.retrain_s[i] << "\n";
    }
  }
  return results;
}

std::map<int, std::vector<SweepRun>> run_degree_sweep(const TaskSpec& base, int runs,
                                                      const std::filesystem::path& out_dir,
                                                      const ExperimentOptions& opt) {
  std::filesystem::create_directories(out_dir);
  std::map<int, std::vector<SweepRun>> all;

  for (int degree : {1, 2}) {
    TaskSpec task = base;
    task.kan = reg3_kan(degree);
    GeneratedTask gen = generate(task);
    Dataset norm_test = normalize_for_arms(gen.test, gen);

    ObjectiveState state = build_state_with_bounds(
        task.kan, task.encoding, ObjectiveConfig{}, gen.train, gen.input_bounds,
        gen.val.size() > 0 ? &gen.val : nullptr, gen.target_bounds);
    VariableLayout layout = VariableLayout::build(task.kan, task.encoding);
    ObjectiveTemplate tmpl = ObjectiveTemplate::build(task.kan, layout);
    BinaryPolynomial obj = assemble_from_moments(tmpl, state.train,
                                                 state.val ? &*state.val : nullptr, state.objective);
    QuboProblem qubo = reduce(obj, opt.w_factor, layout.total_bits());

    for (int r = 0; r < runs; ++r) {
      AnnealSchedule sched = opt.schedule;
      sched.seed = opt.schedule.seed + static_cast<std::uint64_t>(r) * 1000003ULL;
      SolveResult solve = anneal(qubo, sched);
      DecodedModel model = decode_solution(solve, layout, qubo.registry);
      model.input_bounds = gen.input_bounds;
      model.target_bounds = gen.target_bounds;
      std::vector<double> preds = model_predictions(model, norm_test);
      RegressionReport rep = score_regression(preds, norm_test, gen.target_bounds);
      all[degree].push_back({sched.seed, rep.mse, rep.r2, solve.best_energy});
    }
  }

  std::ofstream csv(out_dir / "sweep.csv");
  csv << "degree,seed,mse,r2,energy\n";
  for (const auto& [degree, v] : all) {
    for (const auto& run : v) {
      csv << degree << "," << run.seed << "," << run.mse << "," << run.r2 << "," << run.energy
          << "\n";
    }
  }
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [degree, v] : all) {
    double best_mse = v.front().mse, best_r2 = v.front().r2;
    for (const auto& run : v) {
      if (run.mse < best_mse) {
        best_mse = run.mse;
        best_r2 = run.r2;
      }
    }
    summary[std::to_string(degree)] = {{"runs", v.size()}, {"best_mse", best_mse}, {"best_r2", best_r2}};
  }
  std::ofstream(out_dir / "sweep.json") << summary.dump(2) << "\n";
  return all;
}

}  // namespace qkan
