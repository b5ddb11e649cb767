// Runtime verification instruments: total variation, the Glimm-type
// functional F and F_c, slab conservation residuals, discrete entropy
// residuals, and finite-difference probes for the interaction coefficients.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "scheme.hpp"

namespace reuler {

// ---------------------------------------------------------------------------
// Total variation of one column (componentwise sum of absolute jumps).
// ---------------------------------------------------------------------------

inline double total_variation(const MeshColumn& col) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < col.cells.size(); ++i) {
    const State& a = col.cells[i];
    const State& b = col.cells[i + 1];
    tv += std::abs(a.u - b.u) + std::abs(a.v - b.v) + std::abs(a.p - b.p) +
          std::abs(a.rho - b.rho) + std::abs(a.z - b.z);
  }
  return tv;
}

// ---------------------------------------------------------------------------
// Interaction-coefficient probes (finite differences on the solvers)
// ---------------------------------------------------------------------------

namespace detail {

// State X with wave_curve(5, alpha, X) = target; 4-dim Newton on (u,v,p,rho).
inline State invert_wave5(double alpha, const State& target, const GasModel& g) {
  VecN<4> goal{target.u, target.v, target.p, target.rho};
  auto resid = [&](const VecN<4>& x) -> VecN<4> {
    State s{x[0], x[1], x[2], x[3], target.z};
    State r = wave_curve(5, alpha, s, g, false);
    return {r.u - goal[0], r.v - goal[1], r.p - goal[2], r.rho - goal[3]};
  };
  NewtonOptions opt;
  opt.tol = 1e-13 * std::max(1.0, max_abs<4>(goal));
  VecN<4> x = newton_solve<4>(resid, goal, opt);
  return State{x[0], x[1], x[2], x[3], target.z};
}

}  // namespace detail

struct BoundaryCoefficients {
  double Kb = 0.0;   // d gamma1 / d omega at the flat wall
  double Kb0 = 0.0;  // corner-turn coefficient (equals Kb at the background)
  double Kb2 = 0.0;
  double Kb3 = 0.0;
  double Kb5 = 0.0;
};

inline BoundaryCoefficients probe_boundary_coefficients(const State& u,
                                                        const GasModel& g,
                                                        double step = 1e-5) {
  BoundaryCoefficients k;
  auto gamma_of_omega = [&](double w) { return solve_boundary(u, w, g).gamma1; };
  k.Kb = (gamma_of_omega(step) - gamma_of_omega(-step)) / (2.0 * step);
  k.Kb0 = k.Kb;

  auto gamma_incident = [&](int fam, double a) {
    State below;
    switch (fam) {
      case 2: below = contact_2(-a, u, g); break;
      case 3: below = contact_3(-a, u, g); break;
      case 5: below = detail::invert_wave5(a, u, g); break;
      default: throw DomainError("probe_boundary: family");
    }
    return solve_boundary(below, 0.0, g).gamma1;
  };
  k.Kb2 = (gamma_incident(2, step) - gamma_incident(2, -step)) / (2.0 * step);
  k.Kb3 = (gamma_incident(3, step) - gamma_incident(3, -step)) / (2.0 * step);
  k.Kb5 = (gamma_incident(5, step) - gamma_incident(5, -step)) / (2.0 * step);
  return k;
}

struct ContactCoefficients {
  double K11 = 0.0;  // reflected 1-strength per incident 5-wave from below
  double K15 = 0.0;  // transmitted 5-strength per incident 5-wave from below
  double K21 = 0.0;  // transmitted 1-strength per incident 1-wave from above
  double K25 = 0.0;  // reflected 5-strength per incident 1-wave from above
};

inline ContactCoefficients probe_contact_coefficients(const State& u1, const State& u2,
                                                      const GasModel& g,
                                                      double step = 1e-4) {
  ContactCoefficients k;
  auto from_above = [&](double b1) {
    State above = wave_curve(1, b1, u2, g, false);
    return solve_strong_contact(u1, above, g).alpha;
  };
  Strengths ap = from_above(step), am = from_above(-step);
  k.K25 = (ap.a5 - am.a5) / (2.0 * step);
  k.K21 = (ap.a1 - am.a1) / (2.0 * step);

  auto from_below = [&](double a5) {
    State below = detail::invert_wave5(a5, u1, g);
    return solve_strong_contact(below, u2, g).alpha;
  };
  Strengths bp = from_below(step), bm = from_below(-step);
  k.K15 = (bp.a5 - bm.a5) / (2.0 * step);
  k.K11 = (bp.a1 - bm.a1) / (2.0 * step);
  return k;
}

struct ReflectionProbe {
  double numeric = 0.0;  // finite-difference d gamma5 / d beta1
  double closed = 0.0;   // closed form from the background eigenvalues
};

// Reflection coefficient of a weak 1-wave hitting the strong contact from
// above; |K25| < 1 is the stability condition.
inline ReflectionProbe probe_reflection(const State& u1, const State& u2,
                                        const GasModel& g) {
  ReflectionProbe r;
  r.numeric = probe_contact_coefficients(u1, u2, g).K25;
  double s20 = std::log(u2.u / u1.u);
  double s30 = std::log(u2.rho / u1.rho);
  double l51 = lambda_gnl(5, u1, g);
  double l52 = lambda_gnl(5, u2, g);
  double e = std::exp(2.0 * s20 + s30);
  r.closed = (l51 - l52 * e) / (l51 + l52 * e);
  return r;
}

// ---------------------------------------------------------------------------
// Glimm-type functional
// ---------------------------------------------------------------------------

struct FunctionalWeights {
  double C1s = 0.1, C2s = 1.0;
  double K11s = 0.5, K12s = 10.0, K13s = 10.0, K14s = 2.0, K15s = 1.0;
  double K20s = 2.0, K22s = 10.0, K23s = 10.0, K24s = 2.0, K25s = 1.0;
  double K = 100.0;
  double Kz = 100.0;

  // Consistency condition of the weight choice: K11* |K21| + K25* |K25| < 1.
  bool consistent(const ContactCoefficients& c) const {
    return K11s * std::abs(c.K21) + K25s * std::abs(c.K25) < 1.0;
  }
};

// Default weights probed at the configured backgrounds; Kz is rescaled by the
// largest per-column interaction potential observed in `field` (if given).
inline FunctionalWeights default_weights(const State& bg1, const State& bg2,
                                         const GasModel& g) {
  FunctionalWeights w;
  BoundaryCoefficients b = probe_boundary_coefficients(bg2, g);
  ContactCoefficients c = probe_contact_coefficients(bg1, bg2, g);

  double cap = 1.0 / std::max(std::abs(c.K25), 1e-9);
  w.K25s = 0.5 * (1.0 + b.Kb5);
  if (!(w.K25s > b.Kb5 && w.K25s < cap))
    w.K25s = std::min(1.1 * b.Kb5, 0.5 * (b.Kb5 + cap));
  w.K11s = 0.9 * (1.0 - w.K25s * std::abs(c.K25)) / std::max(std::abs(c.K21), 1e-9);
  w.K12s = w.K13s = 10.0;
  w.C1s = 0.1;
  w.C2s = 1.0;
  w.K14s = w.K24s = 2.0 * w.C2s;
  w.K15s = w.K25s * std::abs(c.K15) + w.K11s * std::abs(c.K11) + 0.5;
  w.K20s = 2.0 * std::max(1.0, std::abs(b.Kb0));
  w.K22s = w.K23s = 10.0;
  w.K = 100.0;
  w.Kz = 100.0;
  return w;
}

struct FunctionalSnapshot {
  int k = 0;
  double Lc = 0.0, L1 = 0.0, L2 = 0.0, L0 = 0.0, Q = 0.0;
  double F = 0.0, Fc = 0.0;
};

namespace detail {

struct WaveRef {
  int diamond;      // boundary fan uses diamond 0 (topmost)
  int family;       // 1..5
  double strength;
  int region;       // 1 below the contact, 2 above
  bool strong_block;
};

// Weak waves crossing the k-mesh curve, ordered bottom-to-top. Also yields
// the strong-contact strengths.
inline std::vector<WaveRef> gather_waves(const SolutionField& f, int k,
                                         Strengths* strong_out) {
  if (k < 1 || k >= (int)f.columns.size())
    throw MissingWaveData("gather_waves: column has no stored fans");
  const MeshColumn& col = f.columns[k];
  int nc = f.columns[k - 1].contact_n;
  std::vector<int> keys;
  keys.reserve(col.fans.size());
  for (const auto& [n, fan] : col.fans) keys.push_back(n);
  std::sort(keys.begin(), keys.end());

  std::vector<WaveRef> out;
  for (int n : keys) {
    const WaveFan& fan = col.fans.at(n);
    int region_low = (n <= nc) ? 1 : 2;
    int region_high = (n < nc) ? 1 : 2;
    if (fan.alpha.a1 != 0.0) out.push_back({n, 1, fan.alpha.a1, region_low, false});
    if (fan.strong) {
      if (strong_out) *strong_out = fan.alpha;
      out.push_back({n, 2, fan.alpha.s2, 2, true});
      out.push_back({n, 3, fan.alpha.s3, 2, true});
      out.push_back({n, 4, fan.alpha.a4, 2, true});
    } else {
      int r = region_high;
      if (fan.alpha.s2 != 0.0) out.push_back({n, 2, fan.alpha.s2, r, false});
      if (fan.alpha.s3 != 0.0) out.push_back({n, 3, fan.alpha.s3, r, false});
      if (fan.alpha.a4 != 0.0) out.push_back({n, 4, fan.alpha.a4, r, false});
    }
    if (fan.alpha.a5 != 0.0) out.push_back({n, 5, fan.alpha.a5, region_high, false});
  }
  if (col.bfan && col.bfan->gamma1 != 0.0)
    out.push_back({0, 1, col.bfan->gamma1, 2, false});
  return out;
}

// Classical approaching-waves rule: the below wave's family exceeds the
// above one's, or same genuinely nonlinear family with a shock in the pair.
inline bool approaching(const WaveRef& below, const WaveRef& above) {
  if (below.strong_block || above.strong_block) return false;
  if (below.family == 4 || above.family == 4) return false;
  if (below.family > above.family) return true;
  if (below.family == above.family && (below.family == 1 || below.family == 5))
    return below.strength < 0.0 || above.strength < 0.0;
  return false;
}

}  // namespace detail

inline FunctionalSnapshot glimm_functional(const SolutionField& f, int k,
                                           const FunctionalWeights& w) {
  FunctionalSnapshot snap;
  snap.k = k;
  Strengths strong{};
  std::vector<detail::WaveRef> waves = detail::gather_waves(f, k, &strong);

  double s20 = f.sigma20(), s30 = f.sigma30();
  snap.Lc = w.C1s * (std::abs(strong.s2 - s20) + std::abs(strong.s3 - s30)) +
            w.C2s * std::abs(strong.a4);

  auto weight1 = [&](int fam) {
    switch (fam) {
      case 1: return w.K11s;
      case 2: return w.K12s;
      case 3: return w.K13s;
      case 4: return w.K14s;
      default: return w.K15s;
    }
  };
  auto weight2 = [&](int fam) {
    switch (fam) {
      case 1: return 1.0;
      case 2: return w.K22s;
      case 3: return w.K23s;
      case 4: return w.K24s;
      default: return w.K25s;
    }
  };
  for (const auto& wave : waves) {
    if (wave.strong_block) continue;
    double a = std::abs(wave.strength);
    if (wave.region == 1)
      snap.L1 += weight1(wave.family) * a;
    else
      snap.L2 += weight2(wave.family) * a;
  }

  const auto& corners = f.cfg.wall.corner;
  for (int kk = k; kk < (int)corners.size(); ++kk) snap.L0 += std::abs(corners[kk]);
  snap.L2 += w.K20s * snap.L0;

  for (std::size_t i = 0; i < waves.size(); ++i)
    for (std::size_t j = i + 1; j < waves.size(); ++j)
      if (detail::approaching(waves[i], waves[j]))
        snap.Q += std::abs(waves[i].strength) * std::abs(waves[j].strength);

  snap.F = snap.Lc + snap.L1 + snap.L2 + w.K * snap.Q;

  // reaction tail: Kz sum_{j>k} e^{-l j h} h ||Z0||
  double tail = 0.0;
  if (f.z0_sup > 0.0 && std::isfinite(f.l_min)) {
    double lh = f.l_min * f.cfg.h;
    tail = f.cfg.h * f.z0_sup * std::exp(-lh * (k + 1)) / (1.0 - std::exp(-lh));
  }
  snap.Fc = snap.F + w.Kz * tail;
  return snap;
}

// Largest per-column interaction potential, used to scale the Kz default.
inline double max_interaction(const SolutionField& f, const FunctionalWeights& w) {
  double q = 0.0;
  for (int k = 1; k < (int)f.columns.size(); ++k)
    q = std::max(q, glimm_functional(f, k, w).Q);
  return q;
}

// Field-calibrated weights: Kz is sized from the run so that the reaction
// tail dominates the per-step functional growth bound, which scales with
// (F + 2)^2 times the interaction magnitude.
inline FunctionalWeights default_weights(const SolutionField& f) {
  FunctionalWeights w = default_weights(f.cfg.bg1, f.cfg.bg2, f.cfg.gas);
  double q = max_interaction(f, w);
  double f1 = (f.columns.size() > 1) ? glimm_functional(f, 1, w).F : 0.0;
  w.Kz = std::max({100.0, 100.0 * q * q, 100.0 * (f1 + 2.0) * (f1 + 2.0)});
  return w;
}

// ---------------------------------------------------------------------------
// Slab conservation residuals
// ---------------------------------------------------------------------------

// Residuals of the four integral identities over slab i (between columns i-1
// and i), in the region bounded by the wall and the strong contact: mass,
// x-momentum (with the wall and contact pressure line integrals), total
// enthalpy flux, and reactant flux. The outflow side uses the freshly sampled
// (pre-reaction) data, so the residual is exactly the sampling error of the
// slab; it vanishes on the background solution.
inline std::array<double, 4> slab_conservation(const SolutionField& f, int i) {
  if (i < 1 || i >= (int)f.columns.size())
    throw MissingWaveData("slab_conservation: slab index out of range");
  const MeshColumn& ca = f.columns[i - 1];
  const MeshColumn& cb = f.columns[i];
  const GasModel& g = f.cfg.gas;
  double s = f.s;
  double h = f.cfg.h;

  auto integrate = [&](const MeshColumn& col, bool reacted) -> Vec5 {
    Vec5 acc{};
    for (int n = col.contact_n; n <= -1; ++n) {
      const State& st = reacted ? col.cell(n, f.far_field) : col.raw_cell(n, f.far_field);
      Vec5 wflux = flux_w(st, g);
      for (int c = 0; c < 5; ++c) acc[c] += 2.0 * s * wflux[c];
    }
    return acc;
  };

  Vec5 in = integrate(ca, true);
  Vec5 out = integrate(cb, false);

  const WaveFan& strong = cb.fans.at(ca.contact_n);
  double p_contact = strong.after1.p;
  double s_contact = strong.contact_slope;
  double p_wall = cb.bfan ? cb.bfan->wall_state.p : 0.0;
  double b_wall = f.cfg.wall.slope(i - 1);
  double line = h * (-b_wall * p_wall + s_contact * p_contact);

  return {out[0] - in[0], out[1] - in[1] + line, out[3] - in[3], out[4] - in[4]};
}

// ---------------------------------------------------------------------------
// Entropy residual over mesh-aligned control windows
// ---------------------------------------------------------------------------

namespace detail {

// 8-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 8> kGaussX = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussW = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Gauss quadrature of `density` across a rarefaction wedge. Ordinates are
// relative to the fan center; y = lambda h inside the wedge and the curve
// parameter is affine in lambda (unit normalization).
template <typename F>
inline double fan_wedge_integral(int fam, double a_lo, double a_hi, const State& base,
                                 double lam_lo, double lam_hi, double y_lo, double y_hi,
                                 double h, const GasModel& g, F&& density) {
  double lam1 = y_lo / h, lam2 = y_hi / h;
  double scale = (a_hi - a_lo) / (lam_hi - lam_lo);
  std::vector<double> alphas(8);
  for (int q = 0; q < 8; ++q) {
    double lam = 0.5 * (lam1 + lam2) + 0.5 * (lam2 - lam1) * kGaussX[q];
    alphas[q] = std::clamp(a_lo + (lam - lam_lo) * scale, a_lo, a_hi);
  }
  std::vector<State> states = rarefaction_path(fam, alphas, base, g);  // ascending nodes
  double acc = 0.0;
  for (int q = 0; q < 8; ++q) acc += kGaussW[q] * density(states[(std::size_t)q]);
  return acc * 0.5 * (y_hi - y_lo);
}

// Integral of `density` over the trace of one fan at x = center_x + h,
// restricted to the window [w_lo, w_hi] (ordinates relative to the fan
// center).
template <typename F>
inline double fan_trace_integral(const WaveFan& fan, double h, double w_lo, double w_hi,
                                 const GasModel& g, F&& density) {
  if (w_hi <= w_lo) return 0.0;
  struct Piece {
    double lo, hi;
    const State* st;
  };
  double y1l = fan.s1_lo * h, y1h = fan.s1_hi * h;
  double yc = fan.contact_slope * h;
  double y5l = fan.s5_lo * h, y5h = fan.s5_hi * h;
  double acc = 0.0;
  auto flat = [&](double lo, double hi, const State& st) {
    lo = std::max(lo, w_lo);
    hi = std::min(hi, w_hi);
    if (hi > lo) acc += (hi - lo) * density(st);
  };
  flat(w_lo, y1l, fan.below);
  if (y1h > y1l && fan.alpha.a1 > 0.0) {
    double lo = std::max(y1l, w_lo), hi = std::min(y1h, w_hi);
    if (hi > lo)
      acc += fan_wedge_integral(1, 0.0, fan.alpha.a1, fan.below, fan.s1_lo, fan.s1_hi,
                                lo, hi, h, g, density);
  }
  flat(y1h, yc, fan.after1);
  flat(yc, y5l, fan.after4);
  if (y5h > y5l && fan.alpha.a5 > 0.0) {
    double lo = std::max(y5l, w_lo), hi = std::min(y5h, w_hi);
    if (hi > lo)
      acc += fan_wedge_integral(5, 0.0, fan.alpha.a5, fan.after4, fan.s5_lo, fan.s5_hi,
                                lo, hi, h, g, density);
  }
  flat(y5h, w_hi, fan.above);
  return acc;
}

}  // namespace detail

// Divergence-theorem residual of the entropy inequality over the window
// [ka h, kb h] x [window bottom, wall]: net outflow of (rho u S, rho v S)
// minus the lumped reaction source at the interior column interfaces.
// Windows spanning a single slab are source- and sampling-free, so the
// residual reduces to the entropy produced by the slab's shocks.
inline double entropy_residual(const SolutionField& f, int ka, int kb) {
  if (ka < 0 || kb <= ka || kb >= (int)f.columns.size())
    throw MissingWaveData("entropy_residual: bad window");
  const GasModel& g = f.cfg.gas;
  double s = f.s;
  double h = f.cfg.h;

  auto s_flux = [&](const State& st) { return st.rho * st.u * entropy(st, g); };

  double y_bot = f.columns[ka].y_wall + 2.0 * f.columns[ka].n_bot() * s;
  for (int k = ka; k <= kb; ++k)
    y_bot = std::min(y_bot, f.columns[k].y_wall + 2.0 * f.columns[k].n_bot() * s);

  auto column_integral = [&](const MeshColumn& col, bool reacted) {
    double acc = 0.0;
    double lo = y_bot;
    for (int n = col.n_bot(); n <= -1; ++n) {
      double clo = std::max(col.y_lo(n, s), lo);
      double chi = col.y_hi(n, s);
      if (chi > clo)
        acc += (chi - clo) *
               s_flux(reacted ? col.cell(n, f.far_field) : col.raw_cell(n, f.far_field));
    }
    if (col.y_lo(col.n_bot(), s) > y_bot)
      acc += (col.y_lo(col.n_bot(), s) - y_bot) * s_flux(f.far_field);
    return acc;
  };

  // inflow at ka h+ (post-reaction slab data)
  double influx = column_integral(f.columns[ka], true);

  // outflow at kb h-: exact traces of slab kb-1
  const MeshColumn& prev = f.columns[kb - 1];
  const MeshColumn& colb = f.columns[kb];
  double outflux = 0.0;
  {
    int n_bot = prev.n_bot();
    // below the lowest diamond: constant far-field
    double lowest = colb.y_wall + (2.0 * n_bot - 1.0) * s;
    if (lowest > y_bot) outflux += (lowest - y_bot) * s_flux(f.far_field);
    for (int n = n_bot; n <= -1; ++n) {
      double span_lo = colb.y_wall + (2.0 * n - 1.0) * s;
      double span_hi = colb.y_wall + (2.0 * n + 1.0) * s;
      span_lo = std::max(span_lo, y_bot);
      if (span_hi <= span_lo) continue;
      auto it = colb.fans.find(n);
      if (it == colb.fans.end()) {
        outflux += (span_hi - span_lo) * s_flux(prev.cell(n, f.far_field));
      } else {
        double center = prev.y_wall + 2.0 * n * s;
        outflux += detail::fan_trace_integral(it->second, h, span_lo - center,
                                              span_hi - center, g, s_flux);
      }
    }
    // boundary diamond strip [y_wall - s, y_wall]
    double span_lo = std::max(colb.y_wall - s, y_bot);
    double span_hi = colb.y_wall;
    if (span_hi > span_lo && colb.bfan) {
      const BoundaryFan& bf = *colb.bfan;
      double lo = span_lo - prev.y_wall, hi = span_hi - prev.y_wall;
      double y1l = bf.s_lo * h, y1h = bf.s_hi * h;
      auto flat = [&](double a, double b, const State& st) {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (b > a) outflux += (b - a) * s_flux(st);
      };
      flat(lo, y1l, bf.data);
      if (y1h > y1l && bf.gamma1 > 0.0) {
        double wl = std::max(y1l, lo), wh = std::min(y1h, hi);
        if (wh > wl)
          outflux += detail::fan_wedge_integral(1, 0.0, bf.gamma1, bf.data, bf.s_lo,
                                                bf.s_hi, wl, wh, h, g, s_flux);
      }
      flat(y1h, hi, bf.wall_state);
    }
  }

  // bottom boundary flux (outward normal (0,-1)); the strip is far-field.
  double bottom = -(f.far_field.rho * f.far_field.v * entropy(f.far_field, g)) *
                  (kb - ka) * h;

  // lumped reaction sources at interior interfaces
  double source = 0.0;
  for (int j = ka + 1; j < kb; ++j) {
    const MeshColumn& col = f.columns[j];
    for (int n = col.n_bot(); n <= -1; ++n) {
      const State& st = col.raw_cell(n, f.far_field);
      if (st.z == 0.0) continue;
      double clo = std::max(col.y_lo(n, s), y_bot);
      double chi = col.y_hi(n, s);
      if (chi <= clo) continue;
      double T = temperature(st, g);
      source += h * (chi - clo) * g.q0 * st.rho * rate(T, g) * st.z / T;
    }
  }

  return outflux - influx + bottom - source;
}

}  // namespace reuler
