#pragma once

#include "qkan/objective.hpp"

#include <filesystem>

namespace qkan {

/// CSV with header "x1,...,xd,y": one row per sample, target last.
Dataset read_csv(const std::filesystem::path& path,
                 DatasetKind kind = DatasetKind::train);
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Deterministic tail split: the last floor(frac * n) rows become the
/// validation set.
std::pair<Dataset, Dataset> split_validation(const Dataset& data, double frac);

}  // namespace qkan
