// Elementary wave curves through a below state: three explicit contact
// families, rarefaction curves by ODE integration, shock curves by a
// bracketed solve of the jump conditions, unified in the Lax map wave_curve.
//
// Strength convention for the genuinely nonlinear families (i = 1, 5):
// alpha = lambda_i(downstream) - lambda_i(below) on both branches, so
// alpha > 0 is a rarefaction and alpha < 0 a shock.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gas.hpp"

namespace reuler {

// C2: scales (u, v) by e^sigma; p, rho, Z unchanged.
inline State contact_2(double sigma, const State& a, const GasModel& g) {
  State r{a.u * std::exp(sigma), a.v * std::exp(sigma), a.p, a.rho, a.z};
  require_supersonic(r, g, "contact_2");
  return r;
}

// C3: scales rho by e^sigma.
inline State contact_3(double sigma, const State& a, const GasModel& g) {
  State r{a.u, a.v, a.p, a.rho * std::exp(sigma), a.z};
  require_supersonic(r, g, "contact_3");
  return r;
}

// C4: shifts Z additively; the flow variables are untouched.
inline State contact_4(double alpha4, const State& a) {
  double z = a.z + alpha4;
  if (z < -1e-12 || z > 1.0 + 1e-12)
    throw RangeError("contact_4: reactant fraction left [0,1]");
  return {a.u, a.v, a.p, a.rho, std::clamp(z, 0.0, 1.0)};
}

namespace detail {

// Right-hand side of the rarefaction ODE dU/dalpha = kappa_i r_i(U).
inline Vec5 rarefaction_rhs(int fam, const Vec5& y, const GasModel& g) {
  State s = State::from_array(y);
  if (!(s.p > 0.0) || !(s.rho > 0.0))
    throw IntegrationError("rarefaction: nonpositive p or rho along curve");
  Vec5 r = eigvec_gnl_raw(fam, s, g);
  Vec5 gl = grad_lambda_gnl(fam, s, g);
  double dot = 0.0;
  for (int i = 0; i < 5; ++i) dot += r[i] * gl[i];
  for (double& x : r) x /= dot;
  return r;
}

inline Vec5 rk4_sweep(int fam, double alpha, const Vec5& y0, int nsteps,
                      const GasModel& g) {
  Vec5 y = y0;
  double dt = alpha / nsteps;
  for (int n = 0; n < nsteps; ++n) {
    Vec5 k1 = rarefaction_rhs(fam, y, g);
    Vec5 t;
    for (int i = 0; i < 5; ++i) t[i] = y[i] + 0.5 * dt * k1[i];
    Vec5 k2 = rarefaction_rhs(fam, t, g);
    for (int i = 0; i < 5; ++i) t[i] = y[i] + 0.5 * dt * k2[i];
    Vec5 k3 = rarefaction_rhs(fam, t, g);
    for (int i = 0; i < 5; ++i) t[i] = y[i] + dt * k3[i];
    Vec5 k4 = rarefaction_rhs(fam, t, g);
    for (int i = 0; i < 5; ++i)
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(y)) throw IntegrationError("rarefaction: step produced non-finite state");
  }
  return y;
}

}  // namespace detail

// Rarefaction curve point at parameter alpha >= 0. RK4 with fixed step
// alpha/64; when `check` is set the result is verified against one halved
// step to 1e-10 (Richardson).
inline State rarefaction(int fam, double alpha, const State& a, const GasModel& g,
                         bool check = true) {
  if (alpha < 0.0) throw DomainError("rarefaction: alpha must be nonnegative");
  require_supersonic(a, g, "rarefaction");
  if (alpha == 0.0) return a;
  Vec5 coarse = detail::rk4_sweep(fam, alpha, a.as_array(), 64, g);
  if (check) {
    Vec5 fine = detail::rk4_sweep(fam, alpha, a.as_array(), 128, g);
    double err = 0.0;
    for (int i = 0; i < 5; ++i) err = std::max(err, std::abs(fine[i] - coarse[i]));
    if (err > 1e-10)
      throw IntegrationError("rarefaction: Richardson check failed, err=" +
                             std::to_string(err));
    coarse = fine;
  }
  State r = State::from_array(coarse);
  require_supersonic(r, g, "rarefaction result");
  return r;
}

// States along one rarefaction curve at several parameters (ascending,
// nonnegative), integrated in a single sweep.
inline std::vector<State> rarefaction_path(int fam, const std::vector<double>& alphas,
                                           const State& a, const GasModel& g) {
  std::vector<State> out;
  out.reserve(alphas.size());
  Vec5 y = a.as_array();
  double pos = 0.0;
  double amax = alphas.empty() ? 0.0 : alphas.back();
  double step_cap = std::max(amax / 64.0, 1e-300);
  for (double al : alphas) {
    if (al < pos) throw DomainError("rarefaction_path: alphas must ascend");
    double span = al - pos;
    if (span > 0.0) {
      int n = std::max(1, (int)std::ceil(span / step_cap));
      y = detail::rk4_sweep(fam, span, y, n, g);
    }
    pos = al;
    out.push_back(State::from_array(y));
  }
  return out;
}

struct ShockPoint {
  State state;   // downstream state
  double slope;  // discontinuity slope s_i
};

namespace detail {

// Downstream state and front slope for the i-shock through `a`, parametrized
// by the downstream density. The pressure jump follows the Hugoniot adiabat
// [p] = c_a^2 [rho] / gamma_hat and the front slope uses the effective speed
// c_hat with c_hat^2 = rho c_a^2 / (gamma_hat rho_a), which is the normal
// velocity of the upstream flow relative to the front.
inline std::optional<ShockPoint> shock_from_density(int fam, double rho_b,
                                                    const State& a, const GasModel& g) {
  double r = rho_b / a.rho;
  double gh = 0.5 * (g.gamma + 1.0) - 0.5 * (g.gamma - 1.0) * r;
  if (gh <= 0.0) return std::nullopt;
  double ca2 = g.gamma * a.p / a.rho;
  double chat2 = ca2 * r / gh;
  double q2 = a.u * a.u + a.v * a.v;
  if (q2 - chat2 <= 0.0) return std::nullopt;    // front faster than the flow
  double den = a.u * a.u - chat2;
  if (std::abs(den) < 1e-14 * q2) return std::nullopt;
  double sign = (fam == 5) ? 1.0 : -1.0;
  double s = (a.u * a.v + sign * std::sqrt(chat2) * std::sqrt(q2 - chat2)) / den;

  double dp = ca2 / gh * (rho_b - a.rho);
  double mflux = a.rho * (s * a.u - a.v);
  if (mflux == 0.0) return std::nullopt;
  double dv = dp / mflux;
  double du = -s * dv;
  State b{a.u + du, a.v + dv, a.p + dp, rho_b, a.z};
  if (!(b.p > 0.0)) return std::nullopt;
  return ShockPoint{b, s};
}

}  // namespace detail

inline ShockPoint shock_from_density(int fam, double rho_b, const State& a,
                                     const GasModel& g) {
  auto sp = detail::shock_from_density(fam, rho_b, a, g);
  if (!sp) throw NoRootError("shock_from_density: parameters outside the branch");
  return *sp;
}

// i-shock of strength alpha < 0: bracketed solve on the downstream density.
// The admissible branch compresses along the gas path: density rises with
// the curve parameter for the 1-family and falls for the 5-family (the gas
// crosses a 5-front from above), so lambda decreases along both branches.
inline ShockPoint shock(int fam, double alpha, const State& a, const GasModel& g) {
  if (!(alpha < 0.0)) throw DomainError("shock: alpha must be negative");
  require_supersonic(a, g, "shock");
  double lam_a = lambda_gnl(fam, a, g);

  // f(rho_b) = lambda(downstream) - lambda(a) - alpha; f -> -alpha > 0 as
  // rho_b -> rho_a and decreases along the branch.
  auto eval = [&](double rho_b) -> std::optional<double> {
    auto sp = detail::shock_from_density(fam, rho_b, a, g);
    if (!sp) return std::nullopt;
    if (!is_supersonic(sp->state, g)) return std::nullopt;
    return lambda_gnl(fam, sp->state, g) - lam_a - alpha;
  };

  double dir = (fam == 1) ? 1.0 : -1.0;
  // gamma_hat > 0 caps the compression; p_b > 0 caps the other side.
  double rho_cap = (fam == 1) ? a.rho * (g.gamma + 1.0) / (g.gamma - 1.0)
                              : a.rho * (g.gamma - 1.0) / (g.gamma + 1.0);
  double near = a.rho * (1.0 + dir * 1e-14);
  double far_valid = near;
  double f_far = -alpha;
  double hi = 0.0, fhi = 0.0;  // first point past the root
  bool bracketed = false;
  double step = std::max(1e-6 * a.rho, std::abs(alpha) * 0.01 * a.rho);
  while (!bracketed) {
    double cand = far_valid + dir * step;
    if (dir > 0.0 ? cand >= rho_cap : cand <= rho_cap)
      cand = rho_cap * (1.0 - dir * 1e-12);
    auto fc = eval(cand);
    if (!fc) break;  // left the admissible branch
    if (*fc <= 0.0) {
      hi = cand;
      fhi = *fc;
      bracketed = true;
    } else {
      far_valid = cand;
      f_far = *fc;
      step *= 2.0;
      if (dir > 0.0 ? far_valid >= rho_cap * (1.0 - 2e-12)
                    : far_valid <= rho_cap * (1.0 + 2e-12))
        break;
    }
  }
  if (!bracketed)
    throw NoRootError("shock: no downstream density matches alpha=" +
                      std::to_string(alpha));

  double lo = far_valid, flo = f_far;
  for (int it = 0; it < 100 && std::abs(hi - lo) > 1e-16 * a.rho; ++it) {
    double mid = 0.5 * (lo + hi);
    auto fm = eval(mid);
    if (!fm) {  // should not happen inside a valid bracket
      hi = mid;
      continue;
    }
    if (*fm > 0.0) {
      lo = mid;
      flo = *fm;
    } else {
      hi = mid;
      fhi = *fm;
    }
  }
  (void)flo;
  (void)fhi;
  ShockPoint sp = shock_from_density(fam, 0.5 * (lo + hi), a, g);
  require_supersonic(sp.state, g, "shock downstream");
  return sp;
}

// Lax map Phi_i(alpha; U_a): dispatches on family and branch.
inline State wave_curve(int fam, double alpha, const State& a, const GasModel& g,
                        bool check = false) {
  switch (fam) {
    case 1:
    case 5:
      if (alpha == 0.0) return a;
      if (alpha > 0.0) return rarefaction(fam, alpha, a, g, check);
      return shock(fam, alpha, a, g).state;
    case 2:
      return contact_2(alpha, a, g);
    case 3:
      return contact_3(alpha, a, g);
    case 4:
      return contact_4(alpha, a);
    default:
      throw DomainError("wave_curve: family must be 1..5");
  }
}

// Ordered wave strengths of one Riemann fan, applied below-to-above.
struct Strengths {
  double a1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double a4 = 0.0;
  double a5 = 0.0;

  double max_abs() const {
    return std::max({std::abs(a1), std::abs(s2), std::abs(s3), std::abs(a4),
                     std::abs(a5)});
  }
};

// Phi_5(a5; Phi_4(a4; Phi_3(s3; Phi_2(s2; Phi_1(a1; U_a))))).
inline State compose(const Strengths& st, const State& a, const GasModel& g,
                     bool check = false) {
  State s = wave_curve(1, st.a1, a, g, check);
  s = contact_2(st.s2, s, g);
  s = contact_3(st.s3, s, g);
  s = contact_4(st.a4, s);
  return wave_curve(5, st.a5, s, g, check);
}

}  // namespace reuler
