#pragma once

#include <string>
#include <vector>

namespace subgeom {

// One machine-checked inequality: pass iff lhs + tail <= rhs (up to a
// relative epsilon); slack = rhs - lhs - tail.
struct CheckRow {
  std::string check_id;
  std::string chain_id;
  std::string pair;
  double lhs = 0.0;
  double tail = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<CheckRow> rows;

  bool all_pass() const;
  double min_slack() const;
  void append(const Report& other);
};

// 17-significant-digit float formatting (round-trip exact doubles).
std::string format_double(double x);

std::string report_to_csv(const Report& report);

}  // namespace subgeom
