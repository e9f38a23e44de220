// qkan: train Bezier KAN models by QUBO annealing, retrain from saved
// objective state, evaluate models, and run benchmark experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include "qkan/baseline.hpp"
#include "qkan/bench.hpp"
#include "qkan/dataset_io.hpp"
#include "qkan/session.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qkan;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

// Marks an error as solver-side for the exit-code contract.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_shape(const std::string& s) {
  std::vector<int> widths;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) widths.push_back(std::stoi(tok));
  if (widths.size() < 2) throw CLI::ValidationError("--shape needs at least two layer widths");
  return widths;
}

// "2" = uniform degree; "0:0:0=1,0:1:0=2,1:0:0=1" = per-edge.
KanSpec parse_kan(const std::string& shape, const std::string& degrees) {
  std::vector<int> widths = parse_shape(shape);
  if (degrees.find('=') == std::string::npos) {
    return KanSpec::uniform(widths, std::stoi(degrees));
  }
  KanSpec spec = KanSpec::uniform(widths, 1);
  std::stringstream in(degrees);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("bad --degrees entry: " + tok);
    std::string key = tok.substr(0, eq);
    int deg = std::stoi(tok.substr(eq + 1));
    int l, i, o;
    char c1, c2;
    std::stringstream ks(key);
    if (!(ks >> l >> c1 >> i >> c2 >> o) || c1 != ':' || c2 != ':') {
      throw CLI::ValidationError("bad --degrees edge key: " + key);
    }
    if (spec.degrees.find({l, i, o}) == spec.degrees.end()) {
      throw CLI::ValidationError("--degrees names edge outside the shape: " + key);
    }
    spec.degrees[{l, i, o}] = deg;
  }
  spec.validate();
  return spec;
}

void write_resolved_config(const fs::path& out_dir, const json& cfg) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream f(out_dir / "config.resolved.json");
  f << cfg.dump(2) << "\n";
}

fs::path out_dir_of(const fs::path& out_path) {
  fs::path parent = out_path.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

bool looks_like_labels(const std::vector<double>& targets) {
  for (double y : targets) {
    if (y != 0.0 && y != 1.0) return false;
  }
  return true;
}

json metrics_json(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (looks_like_labels(truth)) {
    ClassificationReport r = classification_metrics(pred, truth);
    return {{"kind", "classification"}, {"accuracy", r.accuracy}, {"precision", r.precision},
            {"recall", r.recall},       {"f1", r.f1},             {"tp", r.tp},
            {"fp", r.fp},               {"tn", r.tn},             {"fn", r.fn}};
  }
  RegressionReport r = regression_metrics(pred, truth);
  return {{"kind", "regression"}, {"mse", r.mse}, {"r2", r.r2}};
}

// Flags shared by every annealing path.
struct SolveFlags {
  std::string solver = "sa";
  AnnealSchedule schedule;
  double w_factor = 20.0;

  void attach(CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--solver", solver, "sa or exact")->default_val("sa");
    cmd->add_option("--reads", schedule.reads, "annealing restarts per solve");
    cmd->add_option("--sweeps", schedule.sweeps, "Metropolis sweeps per read");
    if (with_seed) cmd->add_option("--seed", schedule.seed, "solver seed");
    cmd->add_option("--beta-start", schedule.beta_start, "initial inverse temperature (0 = auto)");
    cmd->add_option("--beta-end", schedule.beta_end, "final inverse temperature (0 = auto)");
    cmd->add_option("--w-factor", w_factor, "penalty weight factor")->default_val(20.0);
  }

  json to_json() const {
    return {{"solver", solver},
            {"reads", schedule.reads},
            {"sweeps", schedule.sweeps},
            {"seed", schedule.seed},
            {"beta_start", schedule.beta_start},
            {"beta_end", schedule.beta_end},
            {"w_factor", w_factor}};
  }
};

struct EncodingFlags {
  int low = -2, high = 0;
  bool unsigned_rep = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--enc-low", low, "lowest power-of-two exponent");
    cmd->add_option("--enc-high", high, "highest power-of-two exponent");
    cmd->add_flag("--unsigned", unsigned_rep, "single-rail (non-negative) control points");
  }
  EncodingSpec spec() const { return EncodingSpec{low, high, !unsigned_rep}; }
};

SolverFn solver_or_fail(const std::string& name) {
  try {
    return find_solver(name);
  } catch (const std::invalid_argument& e) {
    throw SolverFailure(e.what());
  }
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string task;
  std::string data;
  std::string shape = "2,1";
  std::string degrees = "2";
  bool shape_set = false, enc_set = false;
  EncodingFlags enc;
  SolveFlags solve;
  double lambda_val = 1.0;
  double val_frac = 0.0;
  std::size_t n_train = 2000, n_test = 1000;
  double noise = 0.05;
  std::uint64_t data_seed = 1;
  std::string optimizer;  // non-empty switches to the gradient baseline
  double lr = 0.01;
  int steps = 100;
  bool lr_sweep = false;
  std::string save_state;
  std::string out;
};

int run_train(const TrainArgs& a) {
  Dataset raw_train, raw_test;
  std::vector<std::pair<double, double>> input_bounds;
  std::optional<std::pair<double, double>> target_bounds;
  KanSpec kan;
  EncodingSpec enc = a.enc.spec();

  if (!a.task.empty()) {
    TaskSpec task = TaskSpec::defaults(task_from_name(a.task));
    task.n_train = a.n_train;
    task.n_test = a.n_test;
    task.noise = a.noise;
    task.seed = a.data_seed;
    if (a.shape_set) task.kan = parse_kan(a.shape, a.degrees);
    if (a.enc_set) task.encoding = enc;
    GeneratedTask gen = generate(task);
    raw_train = gen.train;
    raw_test = gen.test;
    input_bounds = gen.input_bounds;
    target_bounds = gen.target_bounds;
    kan = task.kan;
    enc = task.encoding;
  } else {
    raw_train = read_csv(a.data);
    input_bounds = input_bounds_of(raw_train);
    kan = parse_kan(a.shape, a.degrees);
    if (static_cast<int>(raw_train.inputs.front().size()) != kan.input_width()) {
      throw std::runtime_error("dataset width does not match --shape input width");
    }
  }

  Dataset raw_val;
  if (a.val_frac > 0.0) {
    auto [t, v] = split_validation(raw_train, a.val_frac);
    raw_train = t;
    raw_val = v;
  }

  json resolved = {{"command", "train"},
                   {"task", a.task},
                   {"data", a.data},
                   {"kan", kan.to_json()},
                   {"encoding", enc.to_json()},
                   {"objective", ObjectiveConfig{a.lambda_val, true}.to_json()},
                   {"val_frac", a.val_frac},
                   {"n_train", a.n_train},
                   {"n_test", a.n_test},
                   {"noise", a.noise},
                   {"data_seed", a.data_seed},
                   {"out", a.out},
                   {"save_state", a.save_state}};

  DecodedModel model;
  json extras;

  if (!a.optimizer.empty()) {
    // Continuous-parameter baseline arm.
    GdConfig cfg;
    cfg.optimizer = optimizer_from_name(a.optimizer);
    cfg.learning_rate = a.lr;
    cfg.steps = a.steps;
    cfg.seed = a.solve.schedule.seed;
    resolved["gd"] = {{"optimizer", a.optimizer}, {"lr", a.lr}, {"steps", a.steps},
                      {"lr_sweep", a.lr_sweep}, {"seed", cfg.seed}};

    ObjectiveState bounds_only;  // reuse the normalization helper
    bounds_only.input_bounds = input_bounds;
    bounds_only.target_bounds = target_bounds;
    Dataset norm_train = normalize_with_bounds(raw_train, bounds_only);
    Dataset norm_val = raw_val.size() ? normalize_with_bounds(raw_val, bounds_only) : Dataset{};

    GdOutcome outcome;
    double used_lr = a.lr;
    try {
      if (a.lr_sweep) {
        SweepOutcome sw = lr_sweep(kan, enc, norm_train, norm_val.size() ? &norm_val : nullptr, cfg);
        outcome = std::move(sw.outcome);
        used_lr = sw.best_lr;
      } else {
        outcome = train_gd(kan, enc, norm_train, norm_val.size() ? &norm_val : nullptr, cfg);
      }
    } catch (const DivergenceError& e) {
      throw SolverFailure(e.what());
    }
    model = outcome.model;
    model.input_bounds = input_bounds;
    model.target_bounds = target_bounds;
    extras = {{"learning_rate", used_lr},
              {"final_train_mse", outcome.trace.train_mse.back()}};

    // loss trace beside the model file
    std::ofstream trace(out_dir_of(a.out) / "trace.csv");
    trace << "step,train_mse,val_mse\n";
    for (std::size_t i = 0; i < outcome.trace.train_mse.size(); ++i) {
      trace << (i + 1) << "," << outcome.trace.train_mse[i] << ",";
      if (i < outcome.trace.val_mse.size()) trace << outcome.trace.val_mse[i];
      trace << "\n";
    }
  } else {
    resolved["schedule"] = a.solve.to_json();
    SolverFn solver = solver_or_fail(a.solve.solver);
    ObjectiveConfig obj_cfg{a.lambda_val, true};
    ObjectiveState state = build_state_with_bounds(kan, enc, obj_cfg, raw_train, input_bounds,
                                                   raw_val.size() ? &raw_val : nullptr,
                                                   target_bounds);
    VariableLayout layout = VariableLayout::build(kan, enc);
    ObjectiveTemplate tmpl = ObjectiveTemplate::build(kan, layout);
    BinaryPolynomial obj =
        assemble_from_moments(tmpl, state.train, state.val ? &*state.val : nullptr, obj_cfg);
    QuboProblem qubo = reduce(obj, a.solve.w_factor, layout.total_bits());
    SolveResult solve;
    try {
      solve = solver(qubo, a.solve.schedule);
    } catch (const TooManyVariablesError& e) {
      throw SolverFailure(e.what());
    }
    model = decode_solution(solve, layout, qubo.registry);
    model.input_bounds = input_bounds;
    model.target_bounds = target_bounds;
    extras = {{"best_energy", solve.best_energy},
              {"aux_violations", solve.aux_violations},
              {"qubits", qubit_count(layout, qubo.registry)}};
    if (!a.save_state.empty()) save_state(state, a.save_state);
  }

  std::ofstream(a.out) << model.to_json().dump(2) << "\n";
  write_resolved_config(out_dir_of(a.out), resolved);

  json summary = {{"model", a.out}};
  for (auto& [k, v] : extras.items()) summary[k] = v;
  const Dataset& score_on = raw_test.size() ? raw_test : raw_train;
  std::vector<double> pred;
  for (const auto& row : score_on.inputs) pred.push_back(predict_raw(model, row));
  summary["metrics"] = metrics_json(pred, score_on.targets);
  summary["split"] = raw_test.size() ? "test" : "train";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---- retrain --------------------------------------------------------------

struct RetrainArgs {
  std::string state_path;
  std::vector<std::string> add;
  std::vector<std::string> remove;
  SolveFlags solve;
  std::string out;
  std::string save_state_path;
};

int run_retrain(const RetrainArgs& a) {
  ObjectiveState state = load_state(a.state_path);
  for (const std::string& path : a.add) {
    Dataset batch = read_csv(path);
    state = add_samples(state, batch);
  }
  for (const std::string& path : a.remove) {
    Dataset batch = read_csv(path);
    state = remove_samples(state, batch);
  }

  RetrainResult result;
  try {
    result = retrain(state, a.solve.w_factor, a.solve.schedule, a.solve.solver);
  } catch (const std::invalid_argument& e) {
    throw SolverFailure(e.what());
  } catch (const TooManyVariablesError& e) {
    throw SolverFailure(e.what());
  }

  std::ofstream(a.out) << result.model.to_json().dump(2) << "\n";
  if (!a.save_state_path.empty()) save_state(state, a.save_state_path);

  json resolved = {{"command", "retrain"}, {"state", a.state_path},     {"add", a.add},
                   {"remove", a.remove},   {"schedule", a.solve.to_json()}, {"out", a.out},
                   {"save_state", a.save_state_path}};
  write_resolved_config(out_dir_of(a.out), resolved);

  json summary = {{"model", a.out},
                  {"n_train", state.train.count},
                  {"n_val", state.val ? state.val->count : 0},
                  {"best_energy", result.solve.best_energy},
                  {"aux_violations", result.solve.aux_violations}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---- eval -----------------------------------------------------------------

int run_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out) {
  json mj;
  {
    std::ifstream f(model_path);
    if (!f) throw std::runtime_error("cannot open model file: " + model_path);
    f >> mj;
  }
  DecodedModel model = DecodedModel::from_json(mj);
  Dataset data = read_csv(data_path);
  std::vector<double> pred;
  for (const auto& row : data.inputs) pred.push_back(predict_raw(model, row));
  json metrics = metrics_json(pred, data.targets);
  metrics["n"] = data.size();
  if (!out.empty()) {
    std::ofstream(out) << metrics.dump(2) << "\n";
    write_resolved_config(out_dir_of(out),
                          {{"command", "eval"}, {"model", model_path}, {"data", data_path},
                           {"out", out}});
  }
  std::cout << metrics.dump(2) << "\n";
  return 0;
}

// ---- inspect --------------------------------------------------------------

bool is_state_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  char magic[4] = {};
  f.read(magic, 4);
  return f && std::string(magic, 4) == "QKS1";
}

int run_inspect(const std::string& path) {
  if (!fs::exists(path)) throw std::runtime_error("no such file: " + path);
  if (is_state_file(path)) {
    ObjectiveState state = load_state(path);
    VariableLayout layout = VariableLayout::build(state.spec, state.encoding);
    ObjectiveTemplate tmpl = ObjectiveTemplate::build(state.spec, layout);
    BinaryPolynomial obj = assemble_from_moments(tmpl, state.train,
                                                 state.val ? &*state.val : nullptr,
                                                 state.objective);
    QuboProblem qubo = reduce(obj, 20.0, layout.total_bits());
    std::cout << "objective state (version " << ObjectiveState::kVersion << ")\n";
    std::cout << "  widths:";
    for (int w : state.spec.widths) std::cout << " " << w;
    std::cout << "\n  control points: " << layout.total_control_points()
              << "  bits/point: " << state.encoding.bits_per_point() << "\n";
    std::cout << "  train samples folded in: " << state.train.count << "\n";
    if (state.val) std::cout << "  validation samples folded in: " << state.val->count << "\n";
    std::cout << "  moment entries: " << state.train.sums.size() << "\n";
    std::cout << "  control bits: " << layout.total_bits()
              << "  aux (registry): " << qubo.registry.size()
              << "  qubits: " << qubit_count(layout, qubo.registry) << "\n";
    return 0;
  }

  json mj;
  {
    std::ifstream f(path);
    f >> mj;
  }
  DecodedModel model = DecodedModel::from_json(mj);
  VariableLayout layout = VariableLayout::build(model.spec, model.encoding);
  std::cout << "model\n  widths:";
  for (int w : model.spec.widths) std::cout << " " << w;
  std::cout << "\n  edges:\n";
  for (const auto& [e, d] : model.spec.degrees) {
    std::cout << "    " << e.layer << ":" << e.in << ":" << e.out << " degree " << d << "\n";
  }
  std::cout << "  encoding: exponents " << model.encoding.low_exp << ".." << model.encoding.high_exp
            << (model.encoding.signed_rep ? " signed" : " unsigned") << "\n";
  std::cout << "  control bits: " << layout.total_bits() << "\n";
  std::cout << "  control points:";
  for (double c : model.control) std::cout << " " << c;
  std::cout << "\n";
  return 0;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string task;
  std::string arms = "sa,adam";
  std::string out;
  std::uint64_t seed = 0;
  std::size_t n_train = 2000, n_val = 0, n_test = 1000;
  double noise = 0.05;
  SolveFlags solve;
  std::string optimizer = "adam";
  double lr = 0.01;
  int steps = 100;
  bool lr_sweep = false;
  int retrain_rounds = 0;
  std::size_t retrain_batch = 0;
  int runs = 50;  // sweep mode
};

TaskSpec bench_task(const BenchArgs& a) {
  TaskSpec task = TaskSpec::defaults(task_from_name(a.task));
  task.n_train = a.n_train;
  task.n_val = a.n_val;
  task.n_test = a.n_test;
  task.noise = a.noise;
  task.seed = a.seed;
  return task;
}

ExperimentOptions bench_options(const BenchArgs& a) {
  ExperimentOptions opt;
  opt.schedule = a.solve.schedule;
  opt.schedule.seed = a.seed;
  opt.w_factor = a.solve.w_factor;
  opt.gd.optimizer = optimizer_from_name(a.optimizer);
  opt.gd.learning_rate = a.lr;
  opt.gd.steps = a.steps;
  opt.gd.seed = a.seed;
  opt.gd_lr_sweep = a.lr_sweep;
  opt.retrain_rounds = a.retrain_rounds;
  opt.retrain_batch = a.retrain_batch;
  return opt;
}

json bench_resolved(const BenchArgs& a, const std::string& mode) {
  return {{"command", "bench " + mode},
          {"task", a.task},
          {"arms", a.arms},
          {"seed", a.seed},
          {"n_train", a.n_train},
          {"n_val", a.n_val},
          {"n_test", a.n_test},
          {"noise", a.noise},
          {"schedule", a.solve.to_json()},
          {"gd", {{"optimizer", a.optimizer}, {"lr", a.lr}, {"steps", a.steps},
                  {"lr_sweep", a.lr_sweep}}},
          {"retrain_rounds", a.retrain_rounds},
          {"retrain_batch", a.retrain_batch},
          {"runs", a.runs},
          {"out", a.out}};
}

int run_bench_run(const BenchArgs& a) {
  std::set<std::string> arms;
  std::stringstream in(a.arms);
  std::string tok;
  while (std::getline(in, tok, ',')) arms.insert(tok);
  auto results = run_experiment(bench_task(a), arms, a.out, bench_options(a));
  write_resolved_config(a.out, bench_resolved(a, "run"));
  bool any_failed = false;
  for (const auto& r : results) {
    std::cout << r.arm << ": " << (r.ok ? "ok" : ("FAILED: " + r.error)) << "\n";
    any_failed = any_failed || !r.ok;
  }
  std::cout << "report: " << (fs::path(a.out) / "report.json").string() << "\n";
  return any_failed ? kExitSolver : 0;
}

int run_bench_sweep(const BenchArgs& a) {
  auto all = run_degree_sweep(bench_task(a), a.runs, a.out, bench_options(a));
  write_resolved_config(a.out, bench_resolved(a, "sweep"));
  for (const auto& [degree, runs] : all) {
    double best = runs.front().mse;
    for (const auto& r : runs) best = std::min(best, r.mse);
    std::cout << "degree " << degree << ": " << runs.size() << " runs, best mse " << best << "\n";
  }
  std::cout << "report: " << (fs::path(a.out) / "sweep.json").string() << "\n";
  return 0;
}

// Merge a JSON config file into argv: flags given on the command line win.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot open config file: " + config_path);
  json cfg;
  f >> cfg;
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    bool present = false;
    for (const auto& arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) present = true;
    }
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag + "=" + value.get<std::string>());
    } else {
      args.push_back(flag + "=" + value.dump());
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bezier KAN training by QUBO annealing"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; command-line flags take precedence");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a model and write it as JSON");
  train->add_option("--config", config_path, "JSON config file");
  train->add_option("--task", train_args.task, "built-in synthetic task");
  train->add_option("--data", train_args.data, "training dataset CSV (x1,...,xd,y)");
  train->add_option("--shape", train_args.shape, "layer widths, e.g. 2,1")
      ->trigger_on_parse()
      ->each([&](const std::string&) { train_args.shape_set = true; });
  train->add_option("--degrees", train_args.degrees,
                    "uniform degree or per-edge list l:i:o=d,...")
      ->trigger_on_parse()
      ->each([&](const std::string&) { train_args.shape_set = true; });
  train->add_option("--enc-low", train_args.enc.low, "lowest exponent")
      ->trigger_on_parse()
      ->each([&](const std::string&) { train_args.enc_set = true; });
  train->add_option("--enc-high", train_args.enc.high, "highest exponent")
      ->trigger_on_parse()
      ->each([&](const std::string&) { train_args.enc_set = true; });
  train->add_flag("--unsigned", train_args.enc.unsigned_rep, "single-rail control points")
      ->trigger_on_parse()
      ->each([&](const std::string&) { train_args.enc_set = true; });
  train_args.solve.attach(train);
  train->add_option("--lambda", train_args.lambda_val, "validation term weight");
  train->add_option("--val-frac", train_args.val_frac, "validation fraction of training data");
  train->add_option("--n-train", train_args.n_train, "task mode: training samples");
  train->add_option("--n-test", train_args.n_test, "task mode: test samples");
  train->add_option("--noise", train_args.noise, "task mode: classification noise");
  train->add_option("--data-seed", train_args.data_seed, "task mode: generator seed");
  train->add_option("--optimizer", train_args.optimizer,
                    "adam/sgd/adagrad: train the continuous baseline instead of annealing");
  train->add_option("--lr", train_args.lr, "baseline learning rate");
  train->add_option("--steps", train_args.steps, "baseline training steps");
  train->add_flag("--lr-sweep", train_args.lr_sweep, "baseline: sweep the learning-rate grid");
  train->add_option("--save-state", train_args.save_state, "persist the collapsed objective");
  train->add_option("--out", train_args.out, "model JSON path")->required();

  RetrainArgs retrain_args;
  CLI::App* retrain_cmd = app.add_subcommand("retrain", "re-solve a persisted objective state");
  retrain_cmd->add_option("--config", config_path, "JSON config file");
  retrain_cmd->add_option("--state", retrain_args.state_path, "objective state file")->required();
  retrain_cmd->add_option("--add", retrain_args.add, "CSV batch(es) to fold in");
  retrain_cmd->add_option("--remove", retrain_args.remove, "previously-added CSV batch(es) to subtract");
  retrain_args.solve.attach(retrain_cmd);
  retrain_cmd->add_option("--out", retrain_args.out, "model JSON path")->required();
  retrain_cmd->add_option("--save-state", retrain_args.save_state_path,
                          "write the updated state here");

  std::string eval_model, eval_data, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a model file on a CSV dataset");
  eval_cmd->add_option("--model", eval_model, "model JSON file")->required();
  eval_cmd->add_option("--data", eval_data, "dataset CSV")->required();
  eval_cmd->add_option("--out", eval_out, "write metrics JSON here too");

  std::string inspect_path;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "summarize a model or state file");
  inspect_cmd->add_option("path", inspect_path, "model JSON or objective state file")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "benchmark experiments");
  bench->require_subcommand(1);
  auto attach_bench = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--task", bench_args.task, "task name")->required();
    cmd->add_option("--seed", bench_args.seed, "experiment seed (required for replayable reports)")
        ->required();
    cmd->add_option("--n-train", bench_args.n_train, "training samples");
    cmd->add_option("--n-val", bench_args.n_val, "validation samples");
    cmd->add_option("--n-test", bench_args.n_test, "test samples");
    cmd->add_option("--noise", bench_args.noise, "classification noise");
    bench_args.solve.attach(cmd, /*with_seed=*/false);
    cmd->add_option("--out", bench_args.out, "output directory")->required();
  };
  CLI::App* bench_run = bench->add_subcommand("run", "train arms on one task and report metrics");
  attach_bench(bench_run);
  bench_run->add_option("--arms", bench_args.arms, "comma list from {sa, exact, adam, sgd, adagrad}");
  bench_run->add_option("--optimizer", bench_args.optimizer, "default GD optimizer");
  bench_run->add_option("--lr", bench_args.lr, "GD learning rate");
  bench_run->add_option("--steps", bench_args.steps, "GD steps");
  bench_run->add_flag("--lr-sweep", bench_args.lr_sweep, "sweep the GD learning-rate grid");
  bench_run->add_option("--retrain-rounds", bench_args.retrain_rounds, "incremental rounds");
  bench_run->add_option("--retrain-batch", bench_args.retrain_batch, "samples per round");
  CLI::App* bench_sweep = bench->add_subcommand("sweep", "bottom-edge degree sweep distributions");
  attach_bench(bench_sweep);
  bench_sweep->add_option("--runs", bench_args.runs, "seeded solver runs per degree");

  std::vector<std::string> args;
  try {
    args = merge_config_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) return run_train(train_args);
    if (*retrain_cmd) return run_retrain(retrain_args);
    if (*eval_cmd) return run_eval(eval_model, eval_data, eval_out);
    if (*inspect_cmd) return run_inspect(inspect_path);
    if (*bench_run) return run_bench_run(bench_args);
    if (*bench_sweep) return run_bench_sweep(bench_args);
  } catch (const SolverFailure& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const TooManyVariablesError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DivergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
