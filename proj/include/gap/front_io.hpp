#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gap/metrics.hpp"

namespace gap {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// Front CSV: header `cost,distance,volume,genes`, one row per point, genes
/// as space-separated configuration ids (empty when the point has no plan).
void write_front_csv(std::ostream& out, const Front& front);
void write_front_csv(const std::filesystem::path& path, const Front& front);

/// Reads rows back as-is (no filtering). Throws std::runtime_error with the
/// line number on malformed input.
Front read_front_csv(std::istream& in);
Front read_front_csv(const std::filesystem::path& path);

}  // namespace gap
