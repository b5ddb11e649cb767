// Riemann solvers: weak-wave interior solve, wall-boundary solve, and the
// strong-contact solve, plus self-similar sampling of the resolved fan.
#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "numeric.hpp"
#include "waves.hpp"

namespace reuler {

// Resolved Riemann fan: strengths, the constant states between waves, and
// the wave slope data needed for sampling.
struct WaveFan {
  State below;
  Strengths alpha;
  bool strong = false;  // the (s2, s3, a4) block is the strong contact

  State after1, after2, after3, after4, above;

  double s1_lo = 0.0, s1_hi = 0.0;  // shock slope (equal) or rarefaction edges
  bool w1_shock = false;
  double contact_slope = 0.0;       // v/u, continuous across the contact block
  double s5_lo = 0.0, s5_hi = 0.0;
  bool w5_shock = false;

  bool trivial() const { return alpha.max_abs() == 0.0 && !strong; }
};

inline WaveFan make_fan(const State& below, const Strengths& st, bool strong,
                        const GasModel& g) {
  WaveFan f;
  f.below = below;
  f.alpha = st;
  f.strong = strong;

  if (st.a1 < 0.0) {
    ShockPoint sp = shock(1, st.a1, below, g);
    f.after1 = sp.state;
    f.s1_lo = f.s1_hi = sp.slope;
    f.w1_shock = true;
  } else if (st.a1 > 0.0) {
    f.after1 = rarefaction(1, st.a1, below, g, false);
    f.s1_lo = lambda_gnl(1, below, g);
    f.s1_hi = lambda_gnl(1, f.after1, g);
  } else {
    f.after1 = below;
    f.s1_lo = f.s1_hi = lambda_gnl(1, below, g);
  }

  f.after2 = (st.s2 == 0.0) ? f.after1 : contact_2(st.s2, f.after1, g);
  f.after3 = (st.s3 == 0.0) ? f.after2 : contact_3(st.s3, f.after2, g);
  f.after4 = (st.a4 == 0.0) ? f.after3 : contact_4(st.a4, f.after3);
  f.contact_slope = lambda_contact(f.after1);

  if (st.a5 < 0.0) {
    ShockPoint sp = shock(5, st.a5, f.after4, g);
    f.above = sp.state;
    f.s5_lo = f.s5_hi = sp.slope;
    f.w5_shock = true;
  } else if (st.a5 > 0.0) {
    f.above = rarefaction(5, st.a5, f.after4, g, false);
    f.s5_lo = lambda_gnl(5, f.after4, g);
    f.s5_hi = lambda_gnl(5, f.above, g);
  } else {
    f.above = f.after4;
    f.s5_lo = f.s5_hi = lambda_gnl(5, f.after4, g);
  }

  // 1-wave < contact < 5-wave; small slack for shock slopes of weak waves.
  double slack = 1e-9 * (1.0 + std::abs(f.contact_slope));
  if (!(f.s1_hi <= f.contact_slope + slack) || !(f.contact_slope <= f.s5_lo + slack))
    throw SolverError("make_fan: wave speeds out of order");
  return f;
}

namespace detail {

// First four components of compose (Z plays no role in the V-system).
inline VecN<4> compose_v(const VecN<4>& x /* a1, s2, s3, a5 */, const State& a,
                         const GasModel& g) {
  Strengths st{x[0], x[1], x[2], 0.0, x[3]};
  State r = compose(st, a, g, false);
  return {r.u, r.v, r.p, r.rho};
}

inline VecN<4> solve_fan_strengths(const State& a, const State& b, VecN<4> guess,
                                   const GasModel& g, const char* who) {
  VecN<4> target{b.u, b.v, b.p, b.rho};
  double scale = std::max({1.0, std::abs(b.u), std::abs(b.v), b.p, b.rho});
  auto residual = [&](const VecN<4>& x) -> VecN<4> {
    VecN<4> r = compose_v(x, a, g);
    for (int i = 0; i < 4; ++i) r[i] -= target[i];
    return r;
  };
  NewtonOptions opt;
  opt.tol = 1e-12 * scale;
  opt.max_iter = 50;
  try {
    return newton_solve<4>(residual, guess, opt);
  } catch (const NoConvergence& e) {
    throw NoConvergence(std::string(who) + ": " + e.what());
  }
}

}  // namespace detail

// Interior Riemann problem between two nearby supersonic states.
inline WaveFan solve_weak(const State& a, const State& b, const GasModel& g) {
  if (a == b) {
    WaveFan f = make_fan(a, Strengths{}, false, g);
    // keep the data bitwise intact for exact steady propagation
    f.after1 = f.after2 = f.after3 = f.after4 = f.above = a;
    return f;
  }
  require_supersonic(a, g, "solve_weak below");
  require_supersonic(b, g, "solve_weak above");
  VecN<4> x = detail::solve_fan_strengths(a, b, {0.0, 0.0, 0.0, 0.0}, g, "solve_weak");
  Strengths st{x[0], x[1], x[2], b.z - a.z, x[3]};
  WaveFan f = make_fan(a, st, false, g);
  f.above = b;  // pin the above state to the data
  return f;
}

// Strong-contact Riemann problem: below state near the lower background,
// above state near the upper one. Refuses pairs whose pressure ratio
// exceeds 1.5; the solver is a small-perturbation instrument.
inline WaveFan solve_strong_contact(const State& a, const State& b, const GasModel& g) {
  require_supersonic(a, g, "solve_strong_contact below");
  require_supersonic(b, g, "solve_strong_contact above");
  double pr = std::max(a.p, b.p) / std::min(a.p, b.p);
  if (pr > 1.5)
    throw ConfigError("solve_strong_contact: pressure ratio " + std::to_string(pr) +
                      " exceeds 1.5");
  VecN<4> guess{0.0, std::log(b.u / a.u), std::log(b.rho / a.rho), 0.0};
  VecN<4> x = detail::solve_fan_strengths(a, b, guess, g, "solve_strong_contact");

  // Jacobian determinant in the order (a5, s3, s2, a1) at the solution.
  auto fmap = [&](const VecN<4>& y) -> VecN<4> {
    return detail::compose_v({y[3], y[2], y[1], y[0]}, a, g);
  };
  MatN<4> jac = fd_jacobian<4>(fmap, {x[3], x[2], x[1], x[0]}, 1e-7);
  double det = determinant<4>(jac);
  if (std::abs(det) < 1e-10)
    throw DegenerateJacobian("solve_strong_contact: |det| = " + std::to_string(det));
  if (det < 0.0)
    throw SolverError("solve_strong_contact: Jacobian determinant negative");

  Strengths st{x[0], x[1], x[2], b.z - a.z, x[3]};
  WaveFan f = make_fan(a, st, true, g);
  f.above = b;
  return f;
}

// Wall-boundary Riemann problem on a segment of angle omega: a single 1-wave
// brings the data to a state tangent to the wall.
struct BoundaryFan {
  State data;
  double gamma1 = 0.0;
  State wall_state;
  double omega = 0.0;
  double s_lo = 0.0, s_hi = 0.0;
  bool is_shock = false;
};

inline BoundaryFan solve_boundary(const State& a, double omega, const GasModel& g) {
  require_supersonic(a, g, "solve_boundary");
  double nx = -std::sin(omega), ny = std::cos(omega);
  BoundaryFan bf;
  bf.data = a;
  bf.omega = omega;
  if (a.u * nx + a.v * ny == 0.0) {  // already tangent to this segment
    bf.gamma1 = 0.0;
    bf.wall_state = a;
    bf.s_lo = bf.s_hi = lambda_gnl(1, a, g);
    return bf;
  }
  auto f = [&](double gamma) {
    State s = wave_curve(1, gamma, a, g, false);
    return s.u * nx + s.v * ny;
  };
  NewtonOptions opt;
  opt.tol = 2e-13 * std::max(1.0, std::hypot(a.u, a.v));
  bf.gamma1 = newton_scalar(f, 0.0, opt);
  if (bf.gamma1 < 0.0) {
    ShockPoint sp = shock(1, bf.gamma1, a, g);
    bf.wall_state = sp.state;
    bf.s_lo = bf.s_hi = sp.slope;
    bf.is_shock = true;
  } else if (bf.gamma1 > 0.0) {
    bf.wall_state = rarefaction(1, bf.gamma1, a, g, false);
    bf.s_lo = lambda_gnl(1, a, g);
    bf.s_hi = lambda_gnl(1, bf.wall_state, g);
  } else {
    bf.wall_state = a;
    bf.s_lo = bf.s_hi = lambda_gnl(1, a, g);
  }
  return bf;
}

namespace detail {

// State inside a rarefaction fan at self-similar slope xi: bisection on the
// curve parameter until the bracket shrinks to 1e-10.
inline State rarefaction_fan_state(int fam, double alpha_max, const State& base,
                                   double xi, const GasModel& g) {
  double lo = 0.0, hi = alpha_max;
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    State s = rarefaction(fam, mid, base, g, false);
    if (lambda_gnl(fam, s, g) < xi)
      lo = mid;
    else
      hi = mid;
  }
  return rarefaction(fam, 0.5 * (lo + hi), base, g, false);
}

}  // namespace detail

// State of the fan region containing the self-similar slope xi. A xi exactly
// on a discontinuity slope returns the state below it.
inline State sample_fan(const WaveFan& f, double xi, const GasModel& g) {
  if (xi <= f.s1_lo) return f.below;
  if (xi < f.s1_hi)  // inside a 1-rarefaction
    return detail::rarefaction_fan_state(1, f.alpha.a1, f.below, xi, g);
  if (xi <= f.contact_slope) return f.after1;
  if (xi <= f.s5_lo) return f.after4;
  if (xi < f.s5_hi)  // inside a 5-rarefaction
    return detail::rarefaction_fan_state(5, f.alpha.a5, f.after4, xi, g);
  return f.above;
}

inline State sample_boundary_fan(const BoundaryFan& f, double xi, const GasModel& g) {
  if (xi <= f.s_lo) return f.data;
  if (xi < f.s_hi)
    return detail::rarefaction_fan_state(1, f.gamma1, f.data, xi, g);
  return f.wall_state;
}

}  // namespace reuler
