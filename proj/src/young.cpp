#include "subgeom/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subgeom {

namespace {

// x^p with the 0^0 := 1 convention so xi in {0, 1} is exact.
double pow01(double x, double p) {
  if (p == 0.0) return 1.0;
  if (p == 1.0) return x;
  return std::pow(x, p);
}

}  // namespace

double YoungPair::psi1(double x) const { return a1 * pow01(x, xi); }

double YoungPair::psi2(double y) const { return a2 * pow01(y, 1.0 - xi); }

YoungPair make_pair(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw std::domain_error("make_pair: xi must lie in [0, 1]");
  }
  YoungPair pair;
  pair.xi = xi;
  pair.a1 = (xi == 0.0) ? 1.0 : std::pow(xi, -xi);
  pair.a2 = (xi == 1.0) ? 1.0 : std::pow(1.0 - xi, -(1.0 - xi));
  return pair;
}

double check_young(const YoungPair& pair, int grid) {
  if (grid < 2) throw std::invalid_argument("check_young: grid must be >= 2");
  const double log_hi = std::log(1e8);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double x = std::exp(log_hi * i / (grid - 1));
    const double p1 = pair.psi1(x);
    for (int j = 0; j < grid; ++j) {
      const double y = std::exp(log_hi * j / (grid - 1));
      double d = p1 * pair.psi2(y) - (x + y);
      // Along the equality line the product lands within rounding of x + y;
      // clamp those so the sign of the result is meaningful.
      if (std::abs(d) <=
          32.0 * std::numeric_limits<double>::epsilon() * (x + y)) {
        d = 0.0;
      }
      worst = std::max(worst, d);
    }
  }
  return worst;
}

WeightW make_weight(const PhiSpec& phi, const YoungPair& pair,
                    const std::vector<double>& v) {
  WeightW w;
  w.values.reserve(v.size());
  const double phi1 = eval_phi(phi, 1.0);
  for (double vx : v) {
    w.values.push_back(pair.psi2(eval_phi(phi, vx) / phi1));
  }
  return w;
}

double weighted_norm(const std::vector<double>& f, const WeightW& w) {
  if (f.size() != w.values.size()) {
    throw std::invalid_argument("weighted_norm: dimension mismatch");
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(w.values[i]) || !(w.values[i] > 0.0)) {
      throw std::runtime_error("weighted_norm: non-finite or non-positive W");
    }
    norm = std::max(norm, std::abs(f[i]) / w.values[i]);
  }
  return norm;
}

}  // namespace subgeom
