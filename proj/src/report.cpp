#include "subgeom/report.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace subgeom {

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

double Report::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.slack);
  return m;
}

void Report::append(const Report& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string report_to_csv(const Report& report) {
  std::string out = "check_id,chain_id,pair,lhs,tail,rhs,slack,pass\n";
  for (const auto& r : report.rows) {
    out += r.check_id + ',' + r.chain_id + ',' + r.pair + ',' +
           format_double(r.lhs) + ',' + format_double(r.tail) + ',' +
           format_double(r.rhs) + ',' + format_double(r.slack) + ',' +
           (r.pass ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace subgeom
