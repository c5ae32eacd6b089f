#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiknn/dataset.hpp"
#include "aiknn/point.hpp"

namespace aiknn {

/// Dataset CSV: a header naming coordinate columns x1..xd and a response
/// column y (any order), then one row per observation. Coordinates are
/// parsed exactly; y is parsed as a double.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Query CSV: same layout; a y column is allowed and ignored. When `dim` is
/// given the x-column count must match it.
std::vector<Point> read_points_csv(std::istream& in, std::optional<std::size_t> dim = std::nullopt);
std::vector<Point> read_points_csv(const std::filesystem::path& path,
                                   std::optional<std::size_t> dim = std::nullopt);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip text form ("%.17g").
std::string format_double(double value);

}  // namespace aiknn
