// Configuration ingestion: one structured-text (JSON) file describes the gas,
// the wall, the upstream data, and the scheme; every hypothesis violation is
// reported with the label of the assumption it breaks.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasi1d.hpp"
#include "scheme.hpp"

namespace reuler {

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct WallConfig {
  std::string type = "flat";  // flat | corner | expbump | table
  double x0 = 0.0;            // corner abscissa
  double angle = 0.0;         // corner turn (radians)
  double a = 0.0, b = 1.0;    // expbump: g(x) = a x exp(-b x)
  std::vector<double> xs, ys;

  std::function<double(double)> evaluator() const {
    if (type == "flat") return [](double) { return 0.0; };
    if (type == "corner") {
      double x0c = x0, tanw = std::tan(angle);
      return [x0c, tanw](double x) { return x <= x0c ? 0.0 : (x - x0c) * tanw; };
    }
    if (type == "expbump") {
      double aa = a, bb = b;
      return [aa, bb](double x) { return aa * x * std::exp(-bb * x); };
    }
    if (type == "table") {
      auto xsv = xs;
      auto ysv = ys;
      return [xsv, ysv](double x) {
        if (x <= xsv.front()) return ysv.front();
        if (x >= xsv.back()) return ysv.back();
        std::size_t i = 1;
        while (xsv[i] < x) ++i;
        double t = (x - xsv[i - 1]) / (xsv[i] - xsv[i - 1]);
        return (1.0 - t) * ysv[i - 1] + t * ysv[i];
      };
    }
    throw ConfigError("wall: unknown type '" + type + "'");
  }

  void scale(double factor) {
    angle *= factor;
    a *= factor;
    for (double& y : ys) y *= factor;
  }
};

struct DuctConfig {
  std::string type = "from_field";  // from_field | constant | expbump | table
  double A0 = 0.5;
  double a = 0.0, b = 1.0;  // expbump: A(x) = A0 + a x exp(-b x)
  std::vector<double> xs, as;

  DuctGeometry build(double dx, double x_max) const {
    DuctGeometry geom;
    geom.dx = dx;
    int n = (int)std::llround(x_max / dx);
    geom.x.resize(n + 1);
    geom.A.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      double x = j * dx;
      geom.x[j] = x;
      if (type == "constant") {
        geom.A[j] = A0;
      } else if (type == "expbump") {
        geom.A[j] = A0 + a * x * std::exp(-b * x);
      } else if (type == "table") {
        if (x <= xs.front())
          geom.A[j] = as.front();
        else if (x >= xs.back())
          geom.A[j] = as.back();
        else {
          std::size_t i = 1;
          while (xs[i] < x) ++i;
          double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
          geom.A[j] = (1.0 - t) * as[i - 1] + t * as[i];
        }
      } else {
        throw ConfigError("duct: type '" + type + "' cannot be built analytically");
      }
    }
    return geom;
  }
};

struct RunConfig {
  GasModel gas;
  double T0 = 0.0;  // temperature floor of (H3)
  WallConfig wall;
  PiecewiseStates u1, u2;
  State bg1, bg2;
  double y0 = -0.5;
  double h = 2e-3;
  double cfl_ratio = 1.25;
  double x_max = 1.0;
  std::optional<double> y_min;
  double eps_ball = 0.3;
  double delta0 = 0.05;
  ThetaSpec theta;
  std::optional<FunctionalWeights> weight_overrides;
  DuctConfig duct;
  double q1d_tol = 1e-12;
  int q1d_max_iter = 200;
  std::vector<double> scaling_deltas{0.04, 0.02, 0.01};
  std::string out_dir = "out";
  int precision = 17;

  std::string raw_text;
  std::uint64_t hash = 0;
};

namespace detail {

inline State state_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 5)
    throw ParseError(std::string(what) + ": expected [u, v, p, rho, Z]");
  return State{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
               j[3].get<double>(), j[4].get<double>()};
}

inline PiecewiseStates pieces_from_json(const nlohmann::json& j, const char* what) {
  PiecewiseStates p;
  if (!j.contains("states")) throw ParseError(std::string(what) + ": missing states");
  for (const auto& s : j["states"]) p.states.push_back(state_from_json(s, what));
  if (j.contains("breaks"))
    for (const auto& b : j["breaks"]) p.breaks.push_back(b.get<double>());
  if (p.states.size() != p.breaks.size() + 1)
    throw ParseError(std::string(what) + ": need one more state than breaks");
  for (std::size_t i = 1; i < p.breaks.size(); ++i)
    if (!(p.breaks[i] > p.breaks[i - 1]))
      throw ParseError(std::string(what) + ": breaks must ascend");
  return p;
}

}  // namespace detail

// Validates the hypotheses on the data; collects every violation.
inline void validate_config(const RunConfig& cfg) {
  std::vector<std::string> bad;
  auto check_state = [&](const State& s, const std::string& name) {
    if (!(s.p > 0.0) || !(s.rho > 0.0)) {
      bad.push_back("(H2) " + name + ": p and rho must be positive");
      return;
    }
    double c = std::sqrt(cfg.gas.gamma * s.p / s.rho);
    if (!(s.u > c)) bad.push_back("(H2) " + name + ": u > c > 0 fails");
    if (s.z < 0.0 || s.z > 1.0) bad.push_back("(H2) " + name + ": Z outside [0,1]");
    if (cfg.T0 > 0.0 && !(s.p / (cfg.gas.R * s.rho) > cfg.T0))
      bad.push_back("(H3) " + name + ": T <= T0");
  };

  try {
    cfg.gas.validate();
  } catch (const Error& e) {
    bad.push_back(std::string("(gas) ") + e.what());
  }
  if (!(cfg.y0 < 0.0)) bad.push_back("(H2) y0 must be negative");
  if (!(cfg.T0 > 0.0)) bad.push_back("(H3) requires a positive temperature floor T0");

  for (std::size_t i = 0; i < cfg.u1.states.size(); ++i)
    check_state(cfg.u1.states[i], "U1[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < cfg.u2.states.size(); ++i)
    check_state(cfg.u2.states[i], "U2[" + std::to_string(i) + "]");
  check_state(cfg.bg1, "U1 background");
  check_state(cfg.bg2, "U2 background");
  if (!cfg.u1.states.empty() && cfg.u1.states.front().z != 0.0)
    bad.push_back("(H2) Z of U1 must vanish as y -> -infinity");
  if (std::abs(cfg.bg1.p - cfg.bg2.p) > 1e-12 * std::max(cfg.bg1.p, cfg.bg2.p))
    bad.push_back("(background) p1 and p2 must match");
  if (cfg.bg1.v != 0.0 || cfg.bg2.v != 0.0)
    bad.push_back("(background) background states must have v = 0");

  // wall slope budget (1.5): TV of g' measured on a fine sampling
  try {
    auto g = cfg.wall.evaluator();
    double fine = std::min(cfg.h, cfg.x_max / 4096.0);
    double tv = 0.0, prev = 0.0, sup = 0.0;
    int n = (int)std::llround(cfg.x_max / fine);
    for (int k = 0; k < n; ++k) {
      double slope = (g((k + 1) * fine) - g(k * fine)) / fine;
      tv += std::abs(std::atan(slope) - prev);
      prev = std::atan(slope);
      sup = std::max(sup, std::abs(slope));
    }
    if (!(tv < cfg.delta0))
      bad.push_back("(1.5) T.V.{g'} = " + std::to_string(tv) +
                    " is not below delta0 = " + std::to_string(cfg.delta0));
    if (!(sup < cfg.delta0)) bad.push_back("(1.5) sup|g'| is not below delta0");
    if (g(0.0) != 0.0) bad.push_back("(H1) g(0) must vanish");
  } catch (const Error& e) {
    bad.push_back(std::string("(H1) wall: ") + e.what());
  }

  // data deviation and variation budgets (1.6)-(1.7)
  auto dev = [&](const PiecewiseStates& p, const State& bg) {
    double d = 0.0;
    for (const auto& s : p.states) d = std::max(d, detail::state_distance(s, bg));
    return d;
  };
  auto var = [&](const PiecewiseStates& p) {
    double v = 0.0;
    for (std::size_t i = 1; i < p.states.size(); ++i)
      v += detail::state_distance(p.states[i], p.states[i - 1]);
    return v;
  };
  if (!(dev(cfg.u1, cfg.bg1) + dev(cfg.u2, cfg.bg2) < cfg.delta0))
    bad.push_back("(1.6) sup|U_i - U_i^(0)| is not below delta0");
  if (!(var(cfg.u1) + var(cfg.u2) < cfg.delta0))
    bad.push_back("(1.7) T.V. of the initial data is not below delta0");

  if (!bad.empty()) {
    std::string msg = "configuration violates the standing hypotheses:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw ValidationError(msg);
  }
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  cfg.raw_text = text;
  cfg.hash = fnv1a64(text);
  try {
    const auto& gas = j.at("gas");
    cfg.gas.gamma = gas.at("gamma").get<double>();
    cfg.gas.R = gas.at("R").get<double>();
    cfg.gas.q0 = gas.at("q0").get<double>();
    cfg.gas.mu = gas.at("mu").get<double>();
    cfg.gas.eact = gas.value("eact", 0.0);
    cfg.T0 = gas.value("T0", 0.0);

    const auto& wall = j.at("wall");
    cfg.wall.type = wall.value("type", "flat");
    cfg.wall.x0 = wall.value("x0", 0.0);
    cfg.wall.angle = wall.value("angle", 0.0);
    cfg.wall.a = wall.value("a", 0.0);
    cfg.wall.b = wall.value("b", 1.0);
    if (wall.contains("x")) cfg.wall.xs = wall["x"].get<std::vector<double>>();
    if (wall.contains("y")) cfg.wall.ys = wall["y"].get<std::vector<double>>();

    const auto& up = j.at("upstream");
    cfg.y0 = up.at("y0").get<double>();
    cfg.bg1 = detail::state_from_json(up.at("U1_background"), "U1_background");
    cfg.bg2 = detail::state_from_json(up.at("U2_background"), "U2_background");
    cfg.u1 = detail::pieces_from_json(up.at("U1"), "U1");
    cfg.u2 = detail::pieces_from_json(up.at("U2"), "U2");

    const auto& sch = j.at("scheme");
    cfg.h = sch.at("h").get<double>();
    cfg.x_max = sch.at("x_max").get<double>();
    cfg.cfl_ratio = sch.value("cfl_ratio", 1.25);
    if (sch.contains("y_min") && !sch["y_min"].is_null())
      cfg.y_min = sch["y_min"].get<double>();
    cfg.eps_ball = sch.value("eps_ball", 0.3);
    cfg.delta0 = sch.value("delta0", 0.05);
    if (sch.contains("theta")) {
      std::string src = sch["theta"].value("source", "vdc");
      if (src == "vdc")
        cfg.theta.source = ThetaSpec::Source::vdc;
      else if (src == "mt19937")
        cfg.theta.source = ThetaSpec::Source::mt19937;
      else
        throw ParseError("scheme.theta.source must be 'vdc' or 'mt19937'");
      cfg.theta.seed = sch["theta"].value("seed", (std::uint64_t)0);
    }

    if (j.contains("quasi1d")) {
      const auto& q = j["quasi1d"];
      cfg.duct.type = q.value("type", "from_field");
      cfg.duct.A0 = q.value("A0", -cfg.y0);
      cfg.duct.a = q.value("a", 0.0);
      cfg.duct.b = q.value("b", 1.0);
      if (q.contains("x")) cfg.duct.xs = q["x"].get<std::vector<double>>();
      if (q.contains("A")) cfg.duct.as = q["A"].get<std::vector<double>>();
      cfg.q1d_tol = q.value("tol", 1e-12);
      cfg.q1d_max_iter = q.value("max_iter", 200);
    } else {
      cfg.duct.A0 = -cfg.y0;
    }

    if (j.contains("scaling") && j["scaling"].contains("deltas"))
      cfg.scaling_deltas = j["scaling"]["deltas"].get<std::vector<double>>();

    if (j.contains("output")) {
      cfg.out_dir = j["output"].value("dir", "out");
      cfg.precision = j["output"].value("precision", 17);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

inline SchemeConfig to_scheme_config(const RunConfig& cfg) {
  SchemeConfig sc;
  sc.gas = cfg.gas;
  sc.wall = build_wall(cfg.wall.evaluator(), cfg.h, cfg.x_max, cfg.delta0);
  sc.u1 = cfg.u1;
  sc.u2 = cfg.u2;
  sc.bg1 = cfg.bg1;
  sc.bg2 = cfg.bg2;
  sc.y0 = cfg.y0;
  sc.h = cfg.h;
  sc.cfl_ratio = cfg.cfl_ratio;
  sc.x_max = cfg.x_max;
  sc.y_min = cfg.y_min;
  sc.eps_ball = cfg.eps_ball;
  sc.delta0 = cfg.delta0;
  sc.theta = cfg.theta;
  return sc;
}

// Rescales every perturbation away from the backgrounds by `factor`:
// the wall amplitude and the deviations of the initial data.
inline RunConfig scale_perturbations(RunConfig cfg, double factor) {
  cfg.wall.scale(factor);
  auto scale_pieces = [&](PiecewiseStates& p, const State& bg) {
    for (State& s : p.states) {
      s.u = bg.u + factor * (s.u - bg.u);
      s.v = bg.v + factor * (s.v - bg.v);
      s.p = bg.p + factor * (s.p - bg.p);
      s.rho = bg.rho + factor * (s.rho - bg.rho);
      s.z = bg.z + factor * (s.z - bg.z);
    }
  };
  scale_pieces(cfg.u1, cfg.bg1);
  scale_pieces(cfg.u2, cfg.bg2);
  return cfg;
}

// Aggregate perturbation size: wall-slope variation plus data variation plus
// the upper-state deviation.
inline double measured_delta_star(const RunConfig& cfg) {
  auto g = cfg.wall.evaluator();
  double fine = std::min(cfg.h, cfg.x_max / 4096.0);
  int n = (int)std::llround(cfg.x_max / fine);
  double tv = 0.0, prev = 0.0;
  for (int k = 0; k < n; ++k) {
    double w = std::atan((g((k + 1) * fine) - g(k * fine)) / fine);
    tv += std::abs(w - prev);
    prev = w;
  }
  auto var = [&](const PiecewiseStates& p) {
    double v = 0.0;
    for (std::size_t i = 1; i < p.states.size(); ++i)
      v += detail::state_distance(p.states[i], p.states[i - 1]);
    return v;
  };
  double dev2 = 0.0;
  for (const auto& s : cfg.u2.states)
    dev2 = std::max(dev2, detail::state_distance(s, cfg.bg2));
  return tv + var(cfg.u1) + var(cfg.u2) + dev2;
}

}  // namespace reuler
