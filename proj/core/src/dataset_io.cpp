#include "qkan/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qkan {

Dataset read_csv(const std::filesystem::path& path, DatasetKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
  Dataset data;
  data.kind = kind;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path.string());
  // Header row "x1,...,xd,y" is required and skipped.
  std::size_t width = std::count(line.begin(), line.end(), ',') + 1;
  if (width < 2) throw std::runtime_error("dataset needs at least one feature and a target column");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<double> values;
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": not a number: '" + cell + "'");
      }
    }
    if (values.size() != width) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(width) + " columns");
    }
    data.targets.push_back(values.back());
    values.pop_back();
    data.inputs.push_back(std::move(values));
  }
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path.string());
  out.precision(17);
  std::size_t d = data.inputs.empty() ? 1 : data.inputs.front().size();
  for (std::size_t i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
  out << "y\n";
  for (std::size_t s = 0; s < data.size(); ++s) {
    for (double v : data.inputs[s]) out << v << ",";
    out << data.targets[s] << "\n";
  }
}

std::pair<Dataset, Dataset> split_validation(const Dataset& data, double frac) {
  if (frac < 0.0 || frac >= 1.0) throw std::invalid_argument("validation fraction must be in [0,1)");
  std::size_t n_val = static_cast<std::size_t>(frac * static_cast<double>(data.size()));
  std::size_t n_train = data.size() - n_val;
  Dataset train, val;
  train.kind = DatasetKind::train;
  val.kind = DatasetKind::validation;
  train.inputs.assign(data.inputs.begin(), data.inputs.begin() + n_train);
  train.targets.assign(data.targets.begin(), data.targets.begin() + n_train);
  val.inputs.assign(data.inputs.begin() + n_train, data.inputs.end());
  val.targets.assign(data.targets.begin() + n_train, data.targets.end());
  return {train, val};
}

}  // namespace qkan
