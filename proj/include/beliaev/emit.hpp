#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace beliaev {

// Tabular scan output: named columns, numeric rows, ordered metadata.
// CSV carries the metadata as a '#'-prefixed block before the header row;
// JSON emits one object {meta:{...}, columns:[...], rows:[[...]...]}.
// All numbers print with 17 significant digits so both encodings parse back
// to the exact binary values, and identical inputs produce byte-identical
// files (no timestamps inside the payload).
struct ScanResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> meta;

  void add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
  }
};

std::string format17(double v);

void write_csv(const ScanResult& table, std::ostream& os);
void write_json(const ScanResult& table, std::ostream& os);

// Minimal static SVG plot of column ycol against column xcol (polyline plus
// frame and range labels).  Log axes take log10 of the absolute value and
// drop zero entries.
void write_svg(const ScanResult& table, std::size_t xcol, std::size_t ycol,
               bool logx, bool logy, std::ostream& os);

// FNV-1a over the canonical parameter string; stamps output headers so a
// file can be traced back to the exact invocation.
std::string fnv1a_hex(const std::string& payload);

}  // namespace beliaev
