// Command-line front end: run / probe / quasi1d / compare / scaling.
//
// Exit codes: 0 success, 2 validation failure, 3 solver failure,
// 4 acceptance-check failure (scaling exponent outside its window).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "reuler/reuler.hpp"

namespace fs = std::filesystem;
using namespace reuler;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  bool quiet = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load(const CommonOpts& opts) {
  RunConfig cfg = parse_config(slurp(opts.config_path));
  if (opts.seed) cfg.theta.seed = *opts.seed;
  if (opts.h) cfg.h = *opts.h;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

int cmd_run(const CommonOpts& opts) {
  RunConfig rc = load(opts);
  RunResult rr = run(to_scheme_config(rc));
  const SolutionField& f = rr.field;
  write_columns_csv(join(rc.out_dir, "columns.csv"), rc, f);
  write_contact_csv(join(rc.out_dir, "contact.csv"), rc, f);
  FunctionalWeights w = rc.weight_overrides ? *rc.weight_overrides : default_weights(f);
  write_diagnostics_csv(join(rc.out_dir, "diagnostics.csv"), rc, f, w);
  write_manifest(join(rc.out_dir, "manifest.json"), rc,
                 "  \"columns\": " + std::to_string(f.columns.size()));
  if (rr.error) {
    std::cerr << "solver failure at diamond (k=" << rr.error->k << "): " << rr.error->what
              << "\npartial field written to " << rc.out_dir << "\n";
    return 3;
  }
  if (!opts.quiet)
    std::cout << "run: " << f.columns.size() << " columns, s=" << fmt17(f.s)
              << ", artifacts in " << rc.out_dir << "\n";
  return 0;
}

int cmd_probe(const CommonOpts& opts) {
  RunConfig rc = load(opts);
  BoundaryCoefficients b = probe_boundary_coefficients(rc.bg2, rc.gas);
  ContactCoefficients c = probe_contact_coefficients(rc.bg1, rc.bg2, rc.gas);
  ReflectionProbe r = probe_reflection(rc.bg1, rc.bg2, rc.gas);
  write_probes_csv(join(rc.out_dir, "probes.csv"), rc, b, c, r);
  write_manifest(join(rc.out_dir, "manifest.json"), rc);
  if (!opts.quiet) {
    std::cout << "K_b  = " << fmt17(b.Kb) << "\n"
              << "K_b5 = " << fmt17(b.Kb5) << "  K_b2 = " << fmt17(b.Kb2)
              << "  K_b3 = " << fmt17(b.Kb3) << "\n"
              << "K_25 = " << fmt17(r.numeric) << "  closed form " << fmt17(r.closed)
              << "\n";
  }
  return 0;
}

int cmd_quasi1d(const CommonOpts& opts) {
  RunConfig rc = load(opts);
  DuctGeometry geom;
  if (rc.duct.type == "from_field") {
    RunResult rr = run(to_scheme_config(rc));
    if (rr.error) {
      std::cerr << "solver failure: " << rr.error->what << "\n";
      return 3;
    }
    geom = extract_geometry(rr.field);
  } else {
    geom = rc.duct.build(0.5 * rc.h, rc.x_max);
  }
  Q1DInlet inlet = inlet_from_initial_data(to_scheme_config(rc));
  Quasi1DSolution q = solve_q1d(geom, inlet, rc.gas, rc.q1d_tol, rc.q1d_max_iter);
  write_quasi1d_csv(join(rc.out_dir, "quasi1d.csv"), rc, geom, q);
  write_manifest(join(rc.out_dir, "manifest.json"), rc,
                 "  \"iterations\": " + std::to_string(q.iterations));
  if (!opts.quiet)
    std::cout << "quasi1d: " << q.iterations << " iterations, final update "
              << fmt17(q.final_update) << "\n";
  return 0;
}

int cmd_compare(const CommonOpts& opts) {
  RunConfig rc = load(opts);
  PipelineResult pr = run_and_compare(to_scheme_config(rc));
  write_compare_csv(join(rc.out_dir, "compare.csv"), rc, pr.cmp);
  write_contact_csv(join(rc.out_dir, "contact.csv"), rc, pr.field);
  write_manifest(join(rc.out_dir, "manifest.json"), rc,
                 "  \"sup_diff\": " + fmt17(pr.cmp.sup));
  if (!opts.quiet) std::cout << "compare: sup|avg - duct| = " << fmt17(pr.cmp.sup) << "\n";
  return 0;
}

int cmd_scaling(const CommonOpts& opts) {
  RunConfig rc = load(opts);
  std::vector<std::pair<double, SchemeConfig>> runs;
  double base = measured_delta_star(rc);
  if (!(base > 0.0)) throw ConfigError("scaling: base configuration has no perturbation");
  for (double delta : rc.scaling_deltas) {
    RunConfig scaled = scale_perturbations(rc, delta / base);
    runs.emplace_back(delta, to_scheme_config(scaled));
  }
  ScalingResult sr = scaling_study(runs);
  write_scaling_csv(join(rc.out_dir, "scaling.csv"), rc, sr);
  write_manifest(join(rc.out_dir, "manifest.json"), rc,
                 "  \"exponent\": " + fmt17(sr.exponent));
  if (!opts.quiet) {
    for (const auto& row : sr.rows)
      std::cout << "delta*=" << fmt17(row.delta_star) << "  sup_diff=" << fmt17(row.sup_diff)
                << "\n";
    std::cout << "fitted exponent: " << fmt17(sr.exponent) << "\n";
  }
  if (!(sr.exponent >= 1.7 && sr.exponent <= 2.5)) {
    std::cerr << "scaling exponent " << fmt17(sr.exponent) << " outside [1.7, 2.5]\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady supersonic reacting Euler flow: fractional-step Glimm solver"};
  app.set_help_flag("--help", "print help");  // frees --h for the step override
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", opts.config_path, "configuration file")->required();
    sub->add_option("--out", opts.out_dir, "output directory override");
    sub->add_option("--seed", opts.seed, "offset-sequence seed override");
    sub->add_option("--h", opts.h, "x-step override");
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "march the 2D scheme and emit field CSVs");
  CLI::App* probe_cmd = app.add_subcommand("probe", "interaction-coefficient probes");
  CLI::App* q1d_cmd = app.add_subcommand("quasi1d", "solve the duct model");
  CLI::App* cmp_cmd = app.add_subcommand("compare", "run, average, and compare with the duct model");
  CLI::App* scale_cmd = app.add_subcommand("scaling", "perturbation-scaling study");
  for (CLI::App* sub : {run_cmd, probe_cmd, q1d_cmd, cmp_cmd, scale_cmd}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(opts);
    if (probe_cmd->parsed()) return cmd_probe(opts);
    if (q1d_cmd->parsed()) return cmd_quasi1d(opts);
    if (cmp_cmd->parsed()) return cmd_compare(opts);
    if (scale_cmd->parsed()) return cmd_scaling(opts);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
