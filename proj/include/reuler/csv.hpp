// Bit-stable CSV emission: fixed 17-significant-digit formatting and a
// comment header carrying the config hash and the offset-sequence source.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "quasi1d.hpp"

namespace reuler {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::string& path, const RunConfig& cfg) : out_(path) {
    if (!out_) throw ConfigError("csv: cannot open '" + path + "'");
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx", (unsigned long long)cfg.hash);
    out_ << "# config=" << hash << " theta=" << cfg.theta.describe()
         << " version=" << version() << "\n";
  }

  static const char* version() { return "reuler-0.1.0"; }

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      out_ << (i ? "," : "") << fmt17(vals[i]);
    out_ << "\n";
  }

  void raw_row(const std::string& line) { out_ << line << "\n"; }

 private:
  std::ofstream out_;
};

inline void write_columns_csv(const std::string& path, const RunConfig& rc,
                              const SolutionField& f) {
  CsvFile csv(path, rc);
  csv.header({"k", "x", "y_lo", "y_hi", "u", "v", "p", "rho", "Z"});
  for (const MeshColumn& col : f.columns) {
    for (int n = -1; n >= col.n_bot(); --n) {
      const State& s = col.cell(n, f.far_field);
      csv.row({(double)col.k, col.x, col.y_lo(n, f.s), col.y_hi(n, f.s), s.u, s.v,
               s.p, s.rho, s.z});
    }
  }
}

inline void write_contact_csv(const std::string& path, const RunConfig& rc,
                              const SolutionField& f) {
  CsvFile csv(path, rc);
  csv.header({"x", "chi"});
  for (const MeshColumn& col : f.columns) csv.row({col.x, col.contact_y});
}

inline void write_diagnostics_csv(const std::string& path, const RunConfig& rc,
                                  const SolutionField& f, const FunctionalWeights& w) {
  CsvFile csv(path, rc);
  csv.header({"k", "TV", "L", "Q", "F", "Fc", "res_mass", "res_xmom", "res_energy",
              "res_Z", "entropy_min"});
  for (int k = 0; k < (int)f.columns.size(); ++k) {
    double tv = total_variation(f.columns[k]);
    double L = 0.0, Q = 0.0, F = 0.0, Fc = 0.0;
    std::array<double, 4> res{};
    double ent = 0.0;
    if (k >= 1) {
      FunctionalSnapshot snap = glimm_functional(f, k, w);
      L = snap.Lc + snap.L1 + snap.L2;
      Q = snap.Q;
      F = snap.F;
      Fc = snap.Fc;
      res = slab_conservation(f, k);
      ent = entropy_residual(f, k - 1, k);
    }
    csv.row({(double)k, tv, L, Q, F, Fc, res[0], res[1], res[2], res[3], ent});
  }
}

inline void write_compare_csv(const std::string& path, const RunConfig& rc,
                              const CompareResult& cmp) {
  CsvFile csv(path, rc);
  csv.header({"x", "A", "rho_bar", "u_bar", "p_bar", "Z_bar", "rho_A", "u_A", "p_A",
              "Z_A", "max_abs_diff"});
  for (const CompareRow& r : cmp.rows)
    csv.row({r.x, r.area, r.avg[0], r.avg[1], r.avg[2], r.avg[3], r.duct[0], r.duct[1],
             r.duct[2], r.duct[3], r.max_abs_diff});
}

inline void write_quasi1d_csv(const std::string& path, const RunConfig& rc,
                              const DuctGeometry& geom, const Quasi1DSolution& q) {
  CsvFile csv(path, rc);
  csv.header({"x", "A", "rho_A", "u_A", "p_A", "Z_A"});
  for (std::size_t j = 0; j < q.x.size(); ++j)
    csv.row({q.x[j], geom.A[j], q.rho[j], q.u[j], q.p[j], q.z[j]});
}

inline void write_probes_csv(const std::string& path, const RunConfig& rc,
                             const BoundaryCoefficients& b, const ContactCoefficients& c,
                             const ReflectionProbe& r) {
  CsvFile csv(path, rc);
  csv.header({"name", "numeric", "closed_form"});
  auto line = [&](const char* name, double num, double closed) {
    csv.raw_row(std::string(name) + "," + fmt17(num) + "," + fmt17(closed));
  };
  line("K_b", b.Kb, 0.0);
  line("K_b0", b.Kb0, 0.0);
  line("K_b2", b.Kb2, 0.0);
  line("K_b3", b.Kb3, 0.0);
  line("K_b5", b.Kb5, 1.0);
  line("K_11", c.K11, 0.0);
  line("K_15", c.K15, 0.0);
  line("K_21", c.K21, 0.0);
  line("K_25", r.numeric, r.closed);
}

inline void write_scaling_csv(const std::string& path, const RunConfig& rc,
                              const ScalingResult& sr) {
  CsvFile csv(path, rc);
  csv.header({"delta_star", "h", "sup_diff"});
  for (const ScalingRow& r : sr.rows) csv.row({r.delta_star, r.h, r.sup_diff});
}

inline void write_manifest(const std::string& path, const RunConfig& rc,
                           const std::string& extra = "") {
  std::ofstream out(path);
  if (!out) throw ConfigError("manifest: cannot open '" + path + "'");
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx", (unsigned long long)rc.hash);
  out << "{\n"
      << "  \"version\": \"" << CsvFile::version() << "\",\n"
      << "  \"config_hash\": \"" << hash << "\",\n"
      << "  \"theta\": \"" << rc.theta.describe() << "\",\n"
      << "  \"seed\": " << rc.theta.seed << ",\n"
      << "  \"h\": " << fmt17(rc.h) << ",\n"
      << "  \"x_max\": " << fmt17(rc.x_max) << ",\n"
      << "  \"corner_sum_truncated_at_x_max\": true" << (extra.empty() ? "" : ",")
      << "\n";
  if (!extra.empty()) out << extra << "\n";
  out << "}\n";
}

}  // namespace reuler
