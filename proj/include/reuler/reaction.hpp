// Fractional reaction substep: given U and a step length h, produce U~ with
// W(U~) = W(U) + G(U) h, reduced to closed form. The rate is evaluated at the
// pre-reaction temperature, matching the explicit source coupling of the
// marching scheme.
#pragma once

#include <cmath>

#include "gas.hpp"

namespace reuler {

struct ReactionOutcome {
  State state;                 // post-reaction state
  double heat_released = 0.0;  // q0 rho phi(T) Z h
  double z_factor = 1.0;       // (1 - phi(T) h / u)
};

inline ReactionOutcome react(const State& a, double h, const GasModel& g) {
  require_supersonic(a, g, "react");
  if (a.z < 0.0 || a.z > 1.0) throw RangeError("react: Z outside [0,1]");
  double T = temperature(a, g);
  double phi = rate(T, g);
  double factor = 1.0 - phi * h / a.u;

  if (a.z == 0.0 || h == 0.0) return {a, 0.0, factor};

  if (factor <= 0.0)
    throw StepTooLarge("react: phi(T) h / u >= 1");

  double z_new = factor * a.z;
  if (z_new < 0.0) {
    if (-z_new > 1e-14) throw SolverError("react: Z clamp exceeds 1e-14");
    z_new = 0.0;
  }

  // Mass and momentum fluxes are invariant; the Bernoulli function gains the
  // released heat per unit mass flux.
  double m = a.rho * a.u;
  double pbig = a.rho * a.u * a.u + a.p;
  double bern = g.gamma * a.p / ((g.gamma - 1.0) * a.rho) + 0.5 * a.u * a.u +
                g.q0 * phi * a.z * h / a.u;

  // u^2 - 2 gamma P / ((gamma+1) m) u + 2 (gamma-1) B / (gamma+1) = 0
  double half_b = g.gamma * pbig / ((g.gamma + 1.0) * m);
  double c0 = 2.0 * (g.gamma - 1.0) * bern / (g.gamma + 1.0);
  double disc = half_b * half_b - c0;
  if (disc < 0.0) throw StepTooLarge("react: heat release exceeds the supersonic branch");
  double root = std::sqrt(disc);
  double u_hi = half_b + root;
  double u_lo = half_b - root;
  double u_new = (std::abs(u_hi - a.u) <= std::abs(u_lo - a.u)) ? u_hi : u_lo;

  State out{u_new, a.v, pbig - m * u_new, m / u_new, z_new};
  if (!(out.p > 0.0)) throw StepTooLarge("react: pressure left the admissible range");
  double c_new = sound_speed(out, g);
  if (out.u - c_new < kSonicTol * c_new)
    throw SonicError("react: post-reaction state is not supersonic");

  return {out, g.q0 * a.rho * phi * a.z * h, factor};
}

}  // namespace reuler
