// Thermodynamic state model, eigenstructure, fluxes, and reaction rate for a
// polytropic reacting gas, steady supersonic x-marching form.
#pragma once

#include <array>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "numeric.hpp"

namespace reuler {

using Vec5 = VecN<5>;

// Treat u - c below this relative margin as sonic: the eigenvalue
// denominators u^2 - c^2 degenerate there.
inline constexpr double kSonicTol = 1e-10;

struct GasModel {
  double gamma = 1.4;  // ratio of specific heats, > 1
  double R = 1.0;      // gas constant
  double q0 = 1.0;     // specific binding energy of unburned gas, > 0
  double mu = 1.0;     // rate exponent, > 0
  double eact = 0.0;   // activation energy, >= 0

  double cv() const { return R / (gamma - 1.0); }

  void validate() const {
    if (!(gamma > 1.0)) throw DomainError("gas: gamma must exceed 1");
    if (!(R > 0.0)) throw DomainError("gas: R must be positive");
    if (!(q0 > 0.0)) throw DomainError("gas: q0 must be positive");
    if (!(mu > 0.0)) throw DomainError("gas: mu must be positive");
    if (!(eact >= 0.0)) throw DomainError("gas: eact must be nonnegative");
  }
};

// Primitive flow state U = (u, v, p, rho, Z).
struct State {
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
  double rho = 0.0;
  double z = 0.0;

  Vec5 as_array() const { return {u, v, p, rho, z}; }
  static State from_array(const Vec5& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

  friend bool operator==(const State& a, const State& b) {
    return a.u == b.u && a.v == b.v && a.p == b.p && a.rho == b.rho && a.z == b.z;
  }
};

inline double sound_speed(double p, double rho, const GasModel& g) {
  if (!(p > 0.0) || !(rho > 0.0))
    throw DomainError("sound_speed: p and rho must be positive");
  return std::sqrt(g.gamma * p / rho);
}

inline double sound_speed(const State& s, const GasModel& g) {
  return sound_speed(s.p, s.rho, g);
}

inline double temperature(double p, double rho, const GasModel& g) {
  if (!(p > 0.0) || !(rho > 0.0))
    throw DomainError("temperature: p and rho must be positive");
  return p / (g.R * rho);
}

inline double temperature(const State& s, const GasModel& g) {
  return temperature(s.p, s.rho, g);
}

// Arrhenius rate phi(T) = T^mu exp(-E/(R T)); positive and increasing on the
// operating band.
inline double rate(double T, const GasModel& g) {
  if (!(T > 0.0)) throw DomainError("rate: temperature must be positive");
  return std::pow(T, g.mu) * std::exp(-g.eact / (g.R * T));
}

inline bool is_supersonic(const State& s, const GasModel& g) {
  if (!(s.p > 0.0) || !(s.rho > 0.0)) return false;
  double c = sound_speed(s, g);
  return s.u - c >= kSonicTol * c;
}

inline void require_supersonic(const State& s, const GasModel& g,
                               const char* where = "state") {
  double c = sound_speed(s, g);  // throws DomainError on bad p, rho
  if (s.u - c < kSonicTol * c)
    throw SonicError(std::string(where) + ": state is sonic or subsonic (u <= c)");
}

// Polytropic entropy S = cv ln(p rho^-gamma).
inline double entropy(const State& s, const GasModel& g) {
  if (!(s.p > 0.0) || !(s.rho > 0.0))
    throw DomainError("entropy: p and rho must be positive");
  return g.cv() * std::log(s.p * std::pow(s.rho, -g.gamma));
}

// x-direction characteristic slope of the genuinely nonlinear family
// (fam = 1 or 5); the linearly degenerate families share v/u.
inline double lambda_gnl(int fam, const State& s, const GasModel& g) {
  require_supersonic(s, g, "lambda");
  double c = sound_speed(s, g);
  double q2 = s.u * s.u + s.v * s.v;
  double w = std::sqrt(q2 - c * c);
  double sign = (fam == 5) ? 1.0 : -1.0;
  return (s.u * s.v + sign * c * w) / (s.u * s.u - c * c);
}

inline double lambda_contact(const State& s) { return s.v / s.u; }

// All five slopes in increasing order.
inline Vec5 eigenvalues(const State& s, const GasModel& g) {
  double l1 = lambda_gnl(1, s, g);
  double lc = lambda_contact(s);
  double l5 = lambda_gnl(5, s, g);
  return {l1, lc, lc, lc, l5};
}

// Gradient of lambda_i with respect to (u, v, p, rho, Z).
inline Vec5 grad_lambda_gnl(int fam, const State& s, const GasModel& g) {
  double c = sound_speed(s, g);
  double q2 = s.u * s.u + s.v * s.v;
  double w2 = q2 - c * c;
  if (w2 <= 0.0) throw SonicError("grad_lambda: flow speed at or below c");
  double w = std::sqrt(w2);
  double sign = (fam == 5) ? 1.0 : -1.0;
  double den = s.u * s.u - c * c;
  double num = s.u * s.v + sign * c * w;

  double dnum_du = s.v + sign * c * s.u / w;
  double dnum_dv = s.u + sign * c * s.v / w;
  double dnum_dc = sign * (w2 - c * c) / w;

  double dl_du = (dnum_du * den - num * 2.0 * s.u) / (den * den);
  double dl_dv = dnum_dv / den;
  double dl_dc = (dnum_dc * den + num * 2.0 * c) / (den * den);

  double dc_dp = g.gamma / (2.0 * s.rho * c);
  double dc_drho = -c / (2.0 * s.rho);
  return {dl_du, dl_dv, dl_dc * dc_dp, dl_dc * dc_drho, 0.0};
}

// Unnormalized right eigenvector of the genuinely nonlinear family.
inline Vec5 eigvec_gnl_raw(int fam, const State& s, const GasModel& g) {
  double c = sound_speed(s, g);
  double lam = lambda_gnl(fam, s, g);
  double m = s.rho * (lam * s.u - s.v);
  return {-lam, 1.0, m, m / (c * c), 0.0};
}

// Normalization factor kappa_i with r_i . grad(lambda_i) = 1.
inline double kappa(int fam, const State& s, const GasModel& g) {
  Vec5 r = eigvec_gnl_raw(fam, s, g);
  Vec5 gl = grad_lambda_gnl(fam, s, g);
  double dot = 0.0;
  for (int i = 0; i < 5; ++i) dot += r[i] * gl[i];
  if (dot == 0.0) throw SolverError("kappa: degenerate normalization");
  return 1.0 / dot;
}

inline Vec5 eigvec_gnl(int fam, const State& s, const GasModel& g) {
  Vec5 r = eigvec_gnl_raw(fam, s, g);
  double k = kappa(fam, s, g);
  for (double& x : r) x *= k;
  return r;
}

// Total specific enthalpy (u^2+v^2)/2 + gamma p / ((gamma-1) rho).
inline double total_enthalpy(const State& s, const GasModel& g) {
  return 0.5 * (s.u * s.u + s.v * s.v) + g.gamma * s.p / ((g.gamma - 1.0) * s.rho);
}

// Conserved x-flux W(U).
inline Vec5 flux_w(const State& s, const GasModel& g) {
  if (!(s.p > 0.0) || !(s.rho > 0.0)) throw DomainError("flux_w: invalid state");
  double b = total_enthalpy(s, g);
  return {s.rho * s.u, s.rho * s.u * s.u + s.p, s.rho * s.u * s.v,
          s.rho * s.u * b, s.rho * s.u * s.z};
}

// Conserved y-flux H(U).
inline Vec5 flux_h(const State& s, const GasModel& g) {
  if (!(s.p > 0.0) || !(s.rho > 0.0)) throw DomainError("flux_h: invalid state");
  double b = total_enthalpy(s, g);
  return {s.rho * s.v, s.rho * s.u * s.v, s.rho * s.v * s.v + s.p,
          s.rho * s.v * b, s.rho * s.v * s.z};
}

// Reaction source G(U) = (0, 0, 0, q0 rho phi(T) Z, -rho phi(T) Z).
inline Vec5 source_g(const State& s, const GasModel& g) {
  double phi = rate(temperature(s, g), g);
  double rz = s.rho * phi * s.z;
  return {0.0, 0.0, 0.0, g.q0 * rz, -rz};
}

struct FluxSet {
  Vec5 w, h, src;
};

inline FluxSet fluxes(const State& s, const GasModel& g) {
  return {flux_w(s, g), flux_h(s, g), source_g(s, g)};
}

}  // namespace reuler
