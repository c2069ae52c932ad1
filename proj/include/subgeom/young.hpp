#pragma once

#include <vector>

#include "subgeom/ratefn.hpp"

namespace subgeom {

// Pair of power-family Young functions
//   Psi1(x) = a1 * x^xi,  Psi2(y) = a2 * y^(1-xi),
// required to satisfy Psi1(x) * Psi2(y) <= x + y for all x, y >= 1.
struct YoungPair {
  double xi;
  double a1;
  double a2;

  double psi1(double x) const;
  double psi2(double y) const;
};

// Canonical pair with a1 = xi^-xi, a2 = (1-xi)^-(1-xi) (0^0 := 1), which
// satisfies the Young inequality by weighted AM-GM. xi in [0, 1].
YoungPair make_pair(double xi);

// Max of Psi1(x)*Psi2(y) - (x + y) over a grid x grid log-spaced set of
// points in [1, 1e8]^2. <= 0 for pairs from make_pair.
double check_young(const YoungPair& pair, int grid);

// Weight W(x) = Psi2(phi(V(x)) / phi(1)) per state.
struct WeightW {
  std::vector<double> values;
};

WeightW make_weight(const PhiSpec& phi, const YoungPair& pair,
                    const std::vector<double>& v);

// ||f||_W = max_x |f(x)| / W(x).
double weighted_norm(const std::vector<double>& f, const WeightW& w);

}  // namespace subgeom
