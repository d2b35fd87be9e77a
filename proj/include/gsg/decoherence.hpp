#pragma once

// Scattering decoherence applied once over the interaction window tau, as
// elementwise damping of rho_{m,m',n,n'}. Both masses see the same rate.

#include <cmath>
#include <vector>

#include "gsg/entanglement.hpp"
#include "gsg/errors.hpp"

namespace gsg {

struct DecoherenceModel {
  double gamma_short = 0.0;  // Hz
  double gamma_long = 0.0;   // Hz / m^2
  double delta_x = 0.0;      // m
  double tau = 0.0;          // s

  void validate() const {
    if (!(gamma_short >= 0.0)) throw DomainError("DecoherenceModel: gamma_short must be non-negative");
    if (!(gamma_long >= 0.0)) throw DomainError("DecoherenceModel: gamma_long must be non-negative");
    if (!(delta_x >= 0.0) || !(tau >= 0.0)) throw DomainError("DecoherenceModel: delta_x and tau must be non-negative");
  }
  bool is_trivial() const { return gamma_short == 0.0 && gamma_long == 0.0; }
};

namespace detail {
template <typename Factor>
DensityMatrix damp(const DensityMatrix& rho, Factor&& factor) {
  const int d = rho.local_dim();
  CMatrix out = rho.matrix();
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int mp = 0; mp < d; ++mp)
        for (int np = 0; np < d; ++np) out(m * d + n, mp * d + np) *= factor(m, mp, n, np);
  return DensityMatrix(rho.spin(), std::move(out));
}
}  // namespace detail

/// Short-wavelength limit: rho_{m,m',n,n'} e^{-(2 - delta_mm' - delta_nn') gamma tau}.
inline DensityMatrix apply_short(const DensityMatrix& rho, double gamma_short, double tau) {
  if (!(gamma_short >= 0.0) || !(tau >= 0.0)) throw DomainError("apply_short: rate and time must be non-negative");
  if (gamma_short == 0.0 || tau == 0.0) return rho;
  const double e1 = std::exp(-gamma_short * tau);
  const double table[3] = {1.0, e1, e1 * e1};
  return detail::damp(rho, [&](int m, int mp, int n, int np) { return table[(m != mp) + (n != np)]; });
}

/// Long-wavelength limit: rho_{m,m',n,n'} e^{-Gamma dx^2 [(m-m')^2 + (n-n')^2] tau}.
inline DensityMatrix apply_long(const DensityMatrix& rho, double gamma_long, double delta_x, double tau) {
  if (!(gamma_long >= 0.0) || !(tau >= 0.0)) throw DomainError("apply_long: rate and time must be non-negative");
  if (gamma_long == 0.0 || tau == 0.0 || delta_x == 0.0) return rho;
  const double rate = gamma_long * delta_x * delta_x * tau;
  const int d = rho.local_dim();
  std::vector<double> decay(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) decay[s] = std::exp(-rate * s * s);
  return detail::damp(rho, [&](int m, int mp, int n, int np) {
    return decay[std::abs(m - mp)] * decay[std::abs(n - np)];
  });
}

inline DensityMatrix apply(const DensityMatrix& rho, const DecoherenceModel& model) {
  model.validate();
  return apply_long(apply_short(rho, model.gamma_short, model.tau), model.gamma_long, model.delta_x, model.tau);
}

}  // namespace gsg
