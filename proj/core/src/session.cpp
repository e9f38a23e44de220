#include "qkan/session.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

namespace qkan {

namespace {

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double read_f64(const std::string& in, std::size_t off) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
  }
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

nlohmann::json moment_keys_json(const MomentTable& t) {
  nlohmann::json keys = nlohmann::json::array();
  for (const auto& [k, v] : t.sums) keys.push_back(k.to_json());
  return keys;
}

}  // namespace

std::vector<std::pair<double, double>> input_bounds_of(const Dataset& a, const Dataset* b) {
  if (a.size() == 0) throw EmptyDatasetError();
  std::size_t d = a.inputs.front().size();
  std::vector<std::pair<double, double>> bounds(d, {std::numeric_limits<double>::infinity(),
                                                    -std::numeric_limits<double>::infinity()});
  auto feed = [&](const Dataset& ds) {
    for (const auto& row : ds.inputs) {
      for (std::size_t i = 0; i < d; ++i) {
        bounds[i].first = std::min(bounds[i].first, row[i]);
        bounds[i].second = std::max(bounds[i].second, row[i]);
      }
    }
  };
  feed(a);
  if (b != nullptr && b->size() > 0) feed(*b);
  return bounds;
}

Dataset normalize_with_bounds(const Dataset& raw, const ObjectiveState& state) {
  Dataset out = raw;
  const auto& bounds = state.input_bounds;
  for (auto& row : out.inputs) {
    if (row.size() != bounds.size()) {
      throw std::invalid_argument("batch feature count does not match state's network input width");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto [lo, hi] = bounds[i];
      double v = hi > lo ? (row[i] - lo) / (hi - lo) : 0.0;
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument(
            "batch feature outside the state's frozen normalization range; "
            "rebuild the state instead of renormalizing");
      }
      row[i] = v;
    }
  }
  if (state.target_bounds) {
    auto [lo, hi] = *state.target_bounds;
    for (double& y : out.targets) y = hi > lo ? (y - lo) / (hi - lo) : 0.0;
  }
  return out;
}

ObjectiveState build_state(const KanSpec& spec, const EncodingSpec& enc,
                           const ObjectiveConfig& cfg, const Dataset& raw_train,
                           const Dataset* raw_val,
                           std::optional<std::pair<double, double>> target_bounds) {
  return build_state_with_bounds(spec, enc, cfg, raw_train, input_bounds_of(raw_train, raw_val),
                                 raw_val, target_bounds);
}

ObjectiveState build_state_with_bounds(const KanSpec& spec, const EncodingSpec& enc,
                                       const ObjectiveConfig& cfg, const Dataset& raw_train,
                                       std::vector<std::pair<double, double>> input_bounds,
                                       const Dataset* raw_val,
                                       std::optional<std::pair<double, double>> target_bounds) {
  ObjectiveState state;
  state.spec = spec;
  state.encoding = enc;
  state.objective = cfg;
  state.input_bounds = std::move(input_bounds);
  state.target_bounds = target_bounds;

  VariableLayout layout = VariableLayout::build(spec, enc);
  ObjectiveTemplate tmpl = ObjectiveTemplate::build(spec, layout);
  state.train = tmpl.collapse(normalize_with_bounds(raw_train, state));
  if (raw_val != nullptr && raw_val->size() > 0) {
    state.val = tmpl.collapse(normalize_with_bounds(*raw_val, state));
  }
  return state;
}

namespace {

ObjectiveState apply_batch(const ObjectiveState& state, const Dataset& raw_batch, bool add) {
  ObjectiveState out = state;
  if (raw_batch.size() == 0) return out;
  VariableLayout layout = VariableLayout::build(state.spec, state.encoding);
  ObjectiveTemplate tmpl = ObjectiveTemplate::build(state.spec, layout);
  MomentTable delta = tmpl.collapse(normalize_with_bounds(raw_batch, state));
  if (raw_batch.kind == DatasetKind::validation) {
    if (!out.val) out.val = MomentTable{};
    add ? out.val->add(delta) : out.val->subtract(delta);
  } else {
    add ? out.train.add(delta) : out.train.subtract(delta);
  }
  return out;
}

}  // namespace

ObjectiveState add_samples(const ObjectiveState& state, const Dataset& raw_batch) {
  return apply_batch(state, raw_batch, true);
}

ObjectiveState remove_samples(const ObjectiveState& state, const Dataset& raw_batch) {
  return apply_batch(state, raw_batch, false);
}

void save_state(const ObjectiveState& state, const std::filesystem::path& path) {
  nlohmann::json header = {
      {"version", ObjectiveState::kVersion},
      {"spec", state.spec.to_json()},
      {"encoding", state.encoding.to_json()},
      {"objective", state.objective.to_json()},
      {"n_t", state.train.count},
      {"keys", moment_keys_json(state.train)},
      {"has_val", state.val.has_value()},
  };
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& [lo, hi] : state.input_bounds) bounds.push_back({lo, hi});
  header["input_bounds"] = bounds;
  if (state.target_bounds) {
    header["target_bounds"] = {state.target_bounds->first, state.target_bounds->second};
  }
  if (state.val) {
    header["n_v"] = state.val->count;
    header["val_keys"] = moment_keys_json(*state.val);
  }

  std::string blob = "QKS1";
  std::string hs = header.dump();
  append_u32(blob, static_cast<std::uint32_t>(hs.size()));
  blob += hs;
  for (const auto& [k, v] : state.train.sums) append_f64(blob, v);
  if (state.val) {
    for (const auto& [k, v] : state.val->sums) append_f64(blob, v);
  }
  std::uint64_t digest = fnv1a(blob);
  for (int i = 0; i < 8; ++i) blob.push_back(static_cast<char>((digest >> (8 * i)) & 0xff));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StateIoError("cannot open for writing: " + path.string());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw StateIoError("write failed: " + path.string());
}

ObjectiveState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateIoError("cannot open for reading: " + path.string());
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (blob.size() < 16 || blob.compare(0, 4, "QKS1") != 0) {
    throw StateIoError("not an objective state file: " + path.string());
  }
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) {
    stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[blob.size() - 8 + i]))
              << (8 * i);
  }
  std::string body = blob.substr(0, blob.size() - 8);
  if (fnv1a(body) != stored) {
    throw StateDigestError("digest mismatch (truncated or corrupted): " + path.string());
  }

  std::uint32_t hlen = 0;
  for (int i = 0; i < 4; ++i) {
    hlen |= static_cast<std::uint32_t>(static_cast<unsigned char>(body[4 + i])) << (8 * i);
  }
  nlohmann::json header = nlohmann::json::parse(body.substr(8, hlen));
  if (header.at("version").get<int>() != ObjectiveState::kVersion) {
    throw StateVersionError("unsupported state version " +
                            std::to_string(header.at("version").get<int>()));
  }

  ObjectiveState state;
  state.spec = KanSpec::from_json(header.at("spec"));
  state.encoding = EncodingSpec::from_json(header.at("encoding"));
  state.objective = ObjectiveConfig::from_json(header.at("objective"));
  for (const auto& b : header.at("input_bounds")) {
    state.input_bounds.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
  }
  if (header.contains("target_bounds")) {
    state.target_bounds = {header["target_bounds"].at(0).get<double>(),
                           header["target_bounds"].at(1).get<double>()};
  }

  std::size_t off = 8 + hlen;
  auto read_table = [&](const nlohmann::json& keys, std::size_t count) {
    MomentTable t;
    t.count = count;
    for (const auto& kj : keys) {
      if (off + 8 > body.size()) throw StateDigestError("payload shorter than header declares");
      t.sums[FactorMonomial::from_json(kj)] = read_f64(body, off);
      off += 8;
    }
    return t;
  };
  state.train = read_table(header.at("keys"), header.at("n_t").get<std::size_t>());
  if (header.at("has_val").get<bool>()) {
    state.val = read_table(header.at("val_keys"), header.at("n_v").get<std::size_t>());
  }
  return state;
}

RetrainResult retrain(const ObjectiveState& state, double w_factor, const AnnealSchedule& schedule,
                      const std::string& solver) {
  if (state.train.count < 1) throw EmptyDatasetError();
  VariableLayout layout = VariableLayout::build(state.spec, state.encoding);
  ObjectiveTemplate tmpl = ObjectiveTemplate::build(state.spec, layout);
  BinaryPolynomial obj = assemble_from_moments(
      tmpl, state.train, state.val && state.val->count > 0 ? &*state.val : nullptr,
      state.objective);

  RetrainResult result;
  result.qubo = reduce(obj, w_factor, layout.total_bits());
  result.solve = find_solver(solver)(result.qubo, schedule);
  result.model = decode_solution(result.solve, layout, result.qubo.registry);
  result.model.input_bounds = state.input_bounds;
  result.model.target_bounds = state.target_bounds;
  return result;
}

}  // namespace qkan
