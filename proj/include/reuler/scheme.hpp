// Fractional-step Glimm marching loop: wall discretization, random-offset
// column sampling, diamond-by-diamond Riemann solves (boundary, interior,
// strong-contact), reaction substep, and contact-path tracking.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "reaction.hpp"
#include "riemann.hpp"

namespace reuler {

// ---------------------------------------------------------------------------
// Wall discretization
// ---------------------------------------------------------------------------

struct WallPolyline {
  double h = 0.0;
  std::vector<double> y;          // vertices y_k = g(kh), k = 0..K
  std::vector<double> seg_angle;  // omega_{k,k+1}, k = 0..K-1
  std::vector<double> corner;     // omega_k = omega_{k,k+1} - omega_{k-1,k}
  double m = 0.0;                 // sup_k |y_{k+1}-y_k| / h
  double tv = 0.0;                // sum |omega_k|

  int segments() const { return (int)seg_angle.size(); }
  double slope(int k) const { return std::tan(seg_angle[k]); }
  // outward normal of segment k
  std::pair<double, double> normal(int k) const {
    return {-std::sin(seg_angle[k]), std::cos(seg_angle[k])};
  }
  // g_{k,h}(x) on segment k
  double at(int k, double x) const { return y[k] + (x - k * h) * slope(k); }
};

inline WallPolyline build_wall(const std::function<double(double)>& g, double h,
                               double x_max, double delta0) {
  if (!(h > 0.0) || !(x_max > 0.0)) throw ConfigError("build_wall: h and x_max must be positive");
  int K = (int)std::llround(x_max / h);
  if (K < 1) throw ConfigError("build_wall: x_max shorter than one step");
  WallPolyline w;
  w.h = h;
  w.y.resize(K + 1);
  for (int k = 0; k <= K; ++k) w.y[k] = g(k * h);
  if (w.y[0] != 0.0) throw ConfigError("build_wall: g(0) must vanish");
  w.seg_angle.resize(K);
  w.corner.resize(K);
  double prev = 0.0;  // omega_{-1,0} = 0
  for (int k = 0; k < K; ++k) {
    double dy = w.y[k + 1] - w.y[k];
    w.seg_angle[k] = std::atan(dy / h);
    w.corner[k] = w.seg_angle[k] - prev;
    prev = w.seg_angle[k];
    w.m = std::max(w.m, std::abs(dy) / h);
    w.tv += std::abs(w.corner[k]);
  }
  if (w.tv >= delta0)
    throw ConfigError("build_wall: wall turning variation " + std::to_string(w.tv) +
                      " violates the slope budget " + std::to_string(delta0));
  if (w.m >= delta0)
    throw ConfigError("build_wall: wall slope exceeds the slope budget");
  return w;
}

// ---------------------------------------------------------------------------
// Sampling offsets theta_k in (-1, 1)
// ---------------------------------------------------------------------------

struct ThetaSpec {
  enum class Source { vdc, mt19937 };
  Source source = Source::vdc;
  std::uint64_t seed = 0;

  std::string describe() const {
    if (source == Source::vdc) return "vdc(base2,offset=" + std::to_string(seed) + ")";
    return "mt19937_64(seed=" + std::to_string(seed) + ")";
  }
};

inline double van_der_corput2(std::uint64_t n) {
  double r = 0.0, f = 0.5;
  while (n) {
    if (n & 1) r += f;
    f *= 0.5;
    n >>= 1;
  }
  return r;
}

class ThetaSequence {
 public:
  explicit ThetaSequence(const ThetaSpec& spec) : spec_(spec), rng_(spec.seed) {}

  // offset for the sampling at x = k h, k >= 1
  double next(int k) {
    if (spec_.source == ThetaSpec::Source::vdc)
      return 2.0 * van_der_corput2(spec_.seed + (std::uint64_t)k) - 1.0;
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    return dist(rng_);
  }

 private:
  ThetaSpec spec_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

// Piecewise-constant profile: states[i] holds on (breaks[i-1], breaks[i]),
// with the first and last pieces extending to the domain ends.
struct PiecewiseStates {
  std::vector<double> breaks;
  std::vector<State> states;

  const State& eval(double y) const {
    std::size_t i = 0;
    while (i < breaks.size() && y >= breaks[i]) ++i;
    return states[i];
  }
};

struct SchemeConfig {
  GasModel gas;
  WallPolyline wall;
  PiecewiseStates u1, u2;  // below / above the initial contact ordinate
  State bg1, bg2;          // background states (p-matched pair)
  double y0 = -0.5;        // initial contact ordinate, < 0
  double h = 1e-3;
  double cfl_ratio = 1.25;
  double x_max = 1.0;
  std::optional<double> y_min;  // default: below the domain of influence
  double eps_ball = 0.3;        // admissible distance from the backgrounds
  double delta0 = 0.05;
  ThetaSpec theta;
};

// ---------------------------------------------------------------------------
// Columns and the solution field
// ---------------------------------------------------------------------------

// Piecewise-constant data at x = k h. Cells are indexed by n <= -1 with cell n
// covering (y_wall + 2 n s, y_wall + 2 (n+1) s); idx(n) = -1 - n.
struct MeshColumn {
  int k = 0;
  double x = 0.0;
  double y_wall = 0.0;
  std::vector<State> raw;    // sampled at kh- (column 0: cell averages)
  std::vector<State> cells;  // post-reaction data feeding slab k
  double contact_y = 0.0;    // tracked contact ordinate chi(kh-)
  int contact_n = -1;        // diamond hosting the strong-contact solve in slab k
  double theta = 0.0;        // offset used to sample this column (0 for k = 0)

  // waves of the previous slab (k-1), retained for diagnostics
  std::unordered_map<int, WaveFan> fans;
  std::optional<BoundaryFan> bfan;

  int n_bot() const { return -(int)cells.size(); }
  const State& cell(int n, const State& far_field) const {
    if (n > -1) throw SolverError("MeshColumn::cell: index above the wall");
    if (n < n_bot()) return far_field;
    return cells[(std::size_t)(-1 - n)];
  }
  const State& raw_cell(int n, const State& far_field) const {
    if (n > -1) throw SolverError("MeshColumn::raw_cell: index above the wall");
    if (n < n_bot()) return far_field;
    return raw[(std::size_t)(-1 - n)];
  }
  double y_lo(int n, double s) const { return y_wall + 2.0 * n * s; }
  double y_hi(int n, double s) const { return y_wall + 2.0 * (n + 1) * s; }
};

struct DiamondFailure {
  int k = 0;
  int n = 0;
  std::string what;
};

struct SolutionField {
  SchemeConfig cfg;
  double s = 0.0;  // half cell height
  State far_field;
  std::vector<MeshColumn> columns;
  std::vector<double> thetas;     // theta_k used at k = 1..K
  double l_min = std::numeric_limits<double>::infinity();  // min phi(T)/u seen
  double z0_sup = 0.0;            // sup of Z over the initial data
  double max_abs_slope = 0.0;     // largest wave slope encountered

  double sigma20() const { return std::log(cfg.bg2.u / cfg.bg1.u); }
  double sigma30() const { return std::log(cfg.bg2.rho / cfg.bg1.rho); }
};

struct RunResult {
  SolutionField field;
  std::optional<DiamondFailure> error;

  const SolutionField& value() const {
    if (error)
      throw SolverError("run failed at diamond (" + std::to_string(error->k) + "," +
                        std::to_string(error->n) + "): " + error->what);
    return field;
  }
};

// ---------------------------------------------------------------------------
// Sampling helpers
// ---------------------------------------------------------------------------

// Sample ordinates y_{k,n} = y_wall + (2n + 1 + theta) s for the cells of one
// column, n = -1 down to the truncation depth.
inline std::vector<double> sample_points(double y_wall, double s, double theta,
                                         double y_min) {
  if (!(theta > -1.0 && theta < 1.0))
    throw DomainError("sample_points: theta must lie in (-1,1)");
  std::vector<double> pts;
  for (int n = -1;; --n) {
    double y = y_wall + (2.0 * n + 1.0 + theta) * s;
    if (y_wall + 2.0 * n * s < y_min) break;
    pts.push_back(y);
  }
  return pts;
}

namespace detail {

struct PairKey {
  std::uint64_t w[10];
  bool operator==(const PairKey& o) const {
    for (int i = 0; i < 10; ++i)
      if (w[i] != o.w[i]) return false;
    return true;
  }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < 10; ++i) {
      h ^= k.w[i];
      h *= 1099511628211ull;
    }
    return (std::size_t)h;
  }
};

inline std::uint64_t bits(double x) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(x));
  __builtin_memcpy(&u, &x, sizeof(u));
  return u;
}

inline PairKey pair_key(const State& a, const State& b) {
  return PairKey{bits(a.u), bits(a.v), bits(a.p), bits(a.rho), bits(a.z),
                 bits(b.u), bits(b.v), bits(b.p), bits(b.rho), bits(b.z)};
}

// Memoized interior solves: quiet regions repeat the same data pair column
// after column.
class FanCache {
 public:
  const WaveFan& weak(const State& a, const State& b, const GasModel& g) {
    auto key = pair_key(a, b);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    return map_.emplace(key, solve_weak(a, b, g)).first->second;
  }
  const WaveFan& strong(const State& a, const State& b, const GasModel& g) {
    auto key = pair_key(a, b);
    auto it = strong_map_.find(key);
    if (it != strong_map_.end()) return it->second;
    return strong_map_.emplace(key, solve_strong_contact(a, b, g)).first->second;
  }

 private:
  std::unordered_map<PairKey, WaveFan, PairKeyHash> map_;
  std::unordered_map<PairKey, WaveFan, PairKeyHash> strong_map_;
};

inline double state_distance(const State& a, const State& b) {
  return std::max({std::abs(a.u - b.u), std::abs(a.v - b.v), std::abs(a.p - b.p),
                   std::abs(a.rho - b.rho), std::abs(a.z - b.z)});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scheme driver
// ---------------------------------------------------------------------------

class GlimmScheme {
 public:
  explicit GlimmScheme(const SchemeConfig& cfg) : f_{} {
    cfg.gas.validate();
    if (!(cfg.y0 < 0.0)) throw ConfigError("scheme: y0 must be negative");
    if (cfg.bg1.v != 0.0 || cfg.bg2.v != 0.0)
      throw ConfigError("scheme: background states must have v = 0");
    if (std::abs(cfg.bg1.p - cfg.bg2.p) > 1e-12 * cfg.bg1.p)
      throw ConfigError("scheme: background pressures must match");
    require_supersonic(cfg.bg1, cfg.gas, "background 1");
    require_supersonic(cfg.bg2, cfg.gas, "background 2");

    f_.cfg = cfg;
    f_.far_field = cfg.u1.states.front();

    // CFL: s/h must exceed the largest slope plus the wall slope bound.
    double lam = 0.0;
    auto consider = [&](const State& s) {
      lam = std::max({lam, std::abs(lambda_gnl(1, s, cfg.gas)),
                      std::abs(lambda_gnl(5, s, cfg.gas))});
    };
    consider(cfg.bg1);
    consider(cfg.bg2);
    for (const auto& s : cfg.u1.states) consider(s);
    for (const auto& s : cfg.u2.states) consider(s);
    double bound = lam + cfg.wall.m;
    double s_target = cfg.cfl_ratio * bound * cfg.h;
    // y0 / s must be an even integer
    int half_cells = (int)std::floor(-cfg.y0 / (2.0 * s_target));
    if (half_cells < 1)
      throw ConfigError("scheme: |y0| smaller than one sampling cell at this h");
    f_.s = -cfg.y0 / (2.0 * half_cells);
    contact_n0_ = -half_cells;
    if (!(f_.s / cfg.h > bound))
      throw ConfigError("scheme: CFL ratio too small after grid alignment");

    double auto_ymin = cfg.y0 - (f_.s / cfg.h) * cfg.x_max - 4.0 * f_.s;
    for (double br : cfg.u1.breaks)
      auto_ymin = std::min(auto_ymin, br - (f_.s / cfg.h) * cfg.x_max - 4.0 * f_.s);
    y_min_ = cfg.y_min ? std::min(*cfg.y_min, cfg.y0) : auto_ymin;

    if (f_.far_field.z != 0.0)
      throw ConfigError("scheme: far-field reactant fraction must vanish");

    for (double z : {sup_z(cfg.u1), sup_z(cfg.u2)}) f_.z0_sup = std::max(f_.z0_sup, z);
  }

  // Builds column 0 from the cell averages of the initial data.
  MeshColumn initial_column() const {
    const SchemeConfig& cfg = f_.cfg;
    MeshColumn col;
    col.k = 0;
    col.x = 0.0;
    col.y_wall = cfg.wall.y[0];
    col.contact_y = cfg.y0;
    col.contact_n = contact_n0_;
    int count = cell_count(col.y_wall);
    col.raw.resize(count);
    for (int i = 0; i < count; ++i) {
      int n = -1 - i;
      col.raw[i] = average_initial(col.y_lo(n, f_.s), col.y_hi(n, f_.s));
    }
    col.cells = col.raw;
    check_confinement(col);
    return col;
  }

  // One marching step: solve the diamonds of slab k, sample at (k+1)h with
  // offset theta, apply the reaction, and commit column k+1.
  MeshColumn advance_column(const MeshColumn& col, double theta) {
    const SchemeConfig& cfg = f_.cfg;
    const GasModel& g = cfg.gas;
    int k = col.k;
    if (k >= cfg.wall.segments())
      throw ConfigError("advance_column: wall polyline exhausted");
    double h = cfg.h;
    double s = f_.s;
    double y_next = cfg.wall.y[k + 1];
    double dy_wall = y_next - col.y_wall;

    MeshColumn out;
    out.k = k + 1;
    out.x = (k + 1) * h;
    out.y_wall = y_next;
    out.theta = theta;

    // --- solve the slab's diamonds ---
    BoundaryFan bfan;
    try {
      bfan = solve_boundary(col.cell(-1, f_.far_field), cfg.wall.seg_angle[k], g);
    } catch (const Error& e) {
      throw annotate(e, k, 0);
    }
    check_cfl_slope(bfan.s_lo, dy_wall, k, 0);
    check_cfl_slope(bfan.s_hi, dy_wall, k, 0);
    out.bfan = bfan;

    int n_bot = col.n_bot();
    for (int n = -1; n >= n_bot; --n) {
      const State& below = col.cell(n - 1, f_.far_field);
      const State& above = col.cell(n, f_.far_field);
      try {
        if (n == col.contact_n) {
          out.fans.emplace(n, cache_.strong(below, above, g));
        } else if (!(below == above)) {
          out.fans.emplace(n, cache_.weak(below, above, g));
        }
      } catch (const Error& e) {
        throw annotate(e, k, n);
      }
      auto it = out.fans.find(n);
      if (it != out.fans.end()) {
        const WaveFan& f = it->second;
        for (double sl : {f.s1_lo, f.s1_hi, f.contact_slope, f.s5_lo, f.s5_hi})
          check_cfl_slope(sl, dy_wall, k, n);
      }
    }

    // --- contact path update ---
    // Two bookkeeping quantities coexist. The mesh host diamond follows the
    // contact ray of the hosting fan (which emanates from the diamond
    // center); the next host is the diamond whose sample ordinate lies above
    // that ray, so cell states and region labels agree with the samples.
    // The committed contact_y integrates the fan's contact slope without
    // re-anchoring to the wall-following grid: the grid quantization is
    // mean-zero around it and would otherwise leak the wall motion into the
    // extracted cross-section A(x).
    const WaveFan& strong = out.fans.at(col.contact_n);
    double s_contact = strong.contact_slope;
    out.contact_y = col.contact_y + h * s_contact;
    double mesh_ray = col.y_wall + 2.0 * col.contact_n * s + h * s_contact;
    if (!(out.contact_y < y_next - s) || !(mesh_ray < y_next - s))
      throw annotate(SolverError("contact reached the boundary layer"), k, col.contact_n);
    double c = (mesh_ray - y_next) / s;
    out.contact_n = (int)std::floor((c - 1.0 - theta) / 2.0) + 1;
    if (out.contact_n > -1) throw annotate(SolverError("contact diamond above the wall"), k, -1);
    if (std::abs(out.contact_n - col.contact_n) > 1)
      throw annotate(SolverError("contact moved more than one diamond"), k, col.contact_n);

    // --- sample the new column ---
    int count = cell_count(y_next);
    out.raw.resize(count);
    for (int i = 0; i < count; ++i) {
      int n = -1 - i;
      double yhat = y_next + (2.0 * n + 1.0 + theta) * s;
      int m = (theta > 0.0) ? n + 1 : n;
      State sample;
      if (m == 0) {
        double xi = (yhat - col.y_wall) / h;
        sample = sample_boundary_fan(bfan, xi, g);
      } else {
        auto it = out.fans.find(m);
        if (it == out.fans.end()) {
          sample = col.cell(m, f_.far_field);  // trivial diamond
        } else {
          double xi = (yhat - (col.y_wall + 2.0 * m * s)) / h;
          sample = sample_fan(it->second, xi, g);
        }
      }
      out.raw[i] = sample;
    }

    // --- reaction substep ---
    out.cells.resize(count);
    for (int i = 0; i < count; ++i) {
      const State& u = out.raw[i];
      double phi_over_u = rate(temperature(u, g), g) / u.u;
      f_.l_min = std::min(f_.l_min, phi_over_u);
      try {
        out.cells[i] = react(u, h, g).state;
      } catch (const Error& e) {
        throw annotate(e, k + 1, -1 - i);
      }
    }

    check_confinement(out);
    return out;
  }

  RunResult run() {
    RunResult rr;
    SolutionField& f = f_;
    int K = (int)std::llround(f.cfg.x_max / f.cfg.h);
    ThetaSequence theta(f.cfg.theta);
    f.columns.clear();
    f.columns.reserve(K + 1);
    f.columns.push_back(initial_column());
    for (int k = 0; k < K; ++k) {
      double th = theta.next(k + 1);
      f.thetas.push_back(th);
      try {
        f.columns.push_back(advance_column(f.columns.back(), th));
      } catch (const Error& e) {
        rr.error = DiamondFailure{k, 0, e.what()};
        break;
      }
    }
    rr.field = std::move(f_);
    return rr;
  }

  const SolutionField& field() const { return f_; }
  double s() const { return f_.s; }
  double y_min() const { return y_min_; }

 private:
  static double sup_z(const PiecewiseStates& p) {
    double z = 0.0;
    for (const auto& s : p.states) z = std::max(z, s.z);
    return z;
  }

  static Error annotate(const Error& e, int k, int n) {
    return SolverError("diamond (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                       "): " + e.what());
  }

  void check_cfl_slope(double slope, double dy_wall, int k, int n) const {
    f_.max_abs_slope = std::max(f_.max_abs_slope, std::abs(slope));
    if (!(std::abs(slope * f_.cfg.h - dy_wall) < f_.s))
      throw CFLViolation("wave reaches a diamond side at (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }

  int cell_count(double y_wall) const {
    int count = (int)std::ceil((y_wall - y_min_) / (2.0 * f_.s));
    return std::max(count, 2);
  }

  State average_initial(double ylo, double yhi) const {
    const SchemeConfig& cfg = f_.cfg;
    // breakpoints of the initial data inside the cell
    std::vector<double> cuts{ylo};
    auto add = [&](double b) {
      if (b > ylo && b < yhi) cuts.push_back(b);
    };
    for (double b : cfg.u1.breaks) add(b);
    add(cfg.y0);
    for (double b : cfg.u2.breaks) add(b);
    cuts.push_back(yhi);
    std::sort(cuts.begin(), cuts.end());
    Vec5 acc{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      const State& s = (mid > cfg.y0) ? cfg.u2.eval(mid) : cfg.u1.eval(mid);
      double w = (cuts[i + 1] - cuts[i]) / (yhi - ylo);
      Vec5 a = s.as_array();
      for (int j = 0; j < 5; ++j) acc[j] += w * a[j];
    }
    return State::from_array(acc);
  }

  void check_confinement(const MeshColumn& col) const {
    const SchemeConfig& cfg = f_.cfg;
    for (int i = 0; i < (int)col.cells.size(); ++i) {
      int n = -1 - i;
      const State& bg = (n >= col.contact_n) ? cfg.bg2 : cfg.bg1;
      double dist = detail::state_distance(col.cells[i], bg);
      if (dist > cfg.eps_ball)
        throw SolverError("state confinement violated at (k=" + std::to_string(col.k) +
                          ", n=" + std::to_string(n) + "), distance " +
                          std::to_string(dist));
    }
  }

  mutable SolutionField f_;
  detail::FanCache cache_;
  int contact_n0_ = -1;
  double y_min_ = 0.0;
};

inline RunResult run(const SchemeConfig& cfg) {
  GlimmScheme scheme(cfg);
  return scheme.run();
}

}  // namespace reuler
