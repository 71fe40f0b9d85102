#include "lorentzw/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lorentzw/canonical.hpp"
#include "lorentzw/catalog.hpp"
#include "lorentzw/curvature.hpp"
#include "lorentzw/errors.hpp"
#include "lorentzw/io.hpp"
#include "lorentzw/pde.hpp"

namespace lorentzw {
namespace {

using nlohmann::json;

struct Source {
  std::string config_path;
  std::string catalog_name;
};

void add_source(CLI::App* sub, Source& src) {
  auto* a = sub->add_option("--config", src.config_path, "JSON config file");
  auto* b =
      sub->add_option("--catalog", src.catalog_name, "built-in surface name");
  a->excludes(b);
  b->excludes(a);
}

struct Job {
  SurfaceConfig cfg;
  const CatalogEntry* entry = nullptr;
};

Job resolve(const Source& src) {
  if (src.config_path.empty() == src.catalog_name.empty())
    throw ConfigError("exactly one of --config and --catalog is required");
  if (!src.config_path.empty()) return {load_config(src.config_path), nullptr};
  const CatalogEntry* e = catalog_find(src.catalog_name);
  if (!e) throw ConfigError("unknown catalog entry '" + src.catalog_name + "'");
  return {SurfaceConfig{e->surface, e->default_grid, Tolerances{}}, e};
}

// Buffered writer: a run that throws mid-way leaves no partial file.
struct Sink {
  std::string path;  // "-" or empty for stdout
  std::ostringstream buffer;

  bool to_stdout() const { return path.empty() || path == "-"; }
  void flush() {
    if (to_stdout()) {
      std::cout << buffer.str();
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << buffer.str();
    if (!out) throw ConfigError("write to '" + path + "' failed");
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string num(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

std::array<int, 3> parse_axes(const std::string& text) {
  std::array<int, 3> keep{};
  int used = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d%n", &keep[0], &keep[1], &keep[2],
                  &used) != 3 ||
      used != static_cast<int>(text.size()))
    throw ConfigError("--project must be three comma-separated axes, e.g. 1,3,4");
  return keep;
}

int cmd_eval(const Source& src, const std::string& out,
             const std::string& format, const std::string& project) {
  const Job job = resolve(src);
  Sink sink{out, {}};
  long live = 0;
  if (format == "csv")
    live = write_surface_csv(sink.buffer, job.cfg.surface, job.cfg.grid,
                             job.cfg.tolerances);
  else if (format == "json")
    live = write_surface_json(sink.buffer, job.cfg.surface, job.cfg.grid,
                              job.cfg.tolerances);
  else
    live = write_surface_obj(sink.buffer, job.cfg.surface, job.cfg.grid,
                             job.cfg.tolerances, parse_axes(project));
  if (live == 0)
    throw DomainError("every grid node is masked; the lattice misses the surface domain",
                      "", 0.0);
  sink.flush();
  return 0;
}

struct CurvRow {
  bool has_a = false, has_b = false, has_class = false;
  CurvatureSample a, b;  // a holds the requested method; with both, b = frame
  SurfaceClass cls{};
};

int cmd_curvature(const Source& src, const std::string& out,
                  const std::string& method) {
  const Job job = resolve(src);
  const WeierstrassSurface& S = job.cfg.surface;
  const GridSpec& grid = job.cfg.grid;
  const bool want_closed = method != "frame";
  const bool want_frame = method != "closed";

  std::vector<CurvRow> rows(grid.nodes());
  parallel_rows(grid.nv, [&](int j) {
    for (int i = 0; i < grid.nu; ++i) {
      const double u = grid.u(i), v = grid.v(j);
      CurvRow r;
      if (S.in_domain(u, v)) {
        if (want_closed) {
          try {
            r.a = curvatures_canonical_closed_form(S, u, v);
            r.has_a = true;
          } catch (const Error&) {
          }
        }
        if (want_frame) {
          try {
            const CurvatureSample s = curvatures_via_frame(S, u, v).first;
            (want_closed ? r.b : r.a) = s;
            (want_closed ? r.has_b : r.has_a) = true;
          } catch (const Error&) {
          }
        }
        try {
          r.cls = classify(S, u, v);
          r.has_class = true;
        } catch (const Error&) {
        }
      }
      rows[static_cast<long>(j) * grid.nu + i] = r;
    }
  });

  const bool both = want_closed && want_frame;
  Sink sink{out, {}};
  sink.buffer << (both ? "u,v,K,kappa,K_frame,kappa_frame,deficit,class,mask\n"
                       : "u,v,K,kappa,deficit,class,mask\n");
  long valued = 0, classified = 0, compared = 0;
  double max_dK = 0.0, max_dkappa = 0.0;
  std::map<std::string, long> classes;
  auto cell = [](bool has, double x) { return has ? num(x) : std::string(); };
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const CurvRow& r = rows[static_cast<long>(j) * grid.nu + i];
      const bool full = both ? (r.has_a && r.has_b) : r.has_a;
      valued += full;
      if (r.has_class) {
        ++classified;
        ++classes[to_string(r.cls)];
      }
      if (both && r.has_a && r.has_b) {
        ++compared;
        max_dK = std::max(max_dK, std::abs(r.a.K - r.b.K));
        max_dkappa = std::max(
            max_dkappa, std::abs(std::abs(r.a.kappa) - std::abs(r.b.kappa)));
      }
      sink.buffer << num(grid.u(i)) << ',' << num(grid.v(j)) << ','
                  << cell(r.has_a, r.a.K) << ',' << cell(r.has_a, r.a.kappa);
      if (both)
        sink.buffer << ',' << cell(r.has_b, r.b.K) << ','
                    << cell(r.has_b, r.b.kappa);
      sink.buffer << ',' << cell(r.has_a, r.a.deficit) << ','
                  << (r.has_class ? to_string(r.cls) : "") << ',' << int(full)
                  << '\n';
    }
  if (valued == 0 && classified == 0)
    throw DomainError("every grid node is masked; the lattice misses the surface domain",
                      "", 0.0);
  sink.flush();

  json summary{{"method", method},
               {"nodes", grid.nodes()},
               {"valued", valued},
               {"classified", classified},
               {"classes", classes}};
  if (both) {
    summary["compared"] = compared;
    summary["max_K_discrepancy"] = max_dK;
    summary["max_kappa_discrepancy"] = max_dkappa;
  }
  (sink.to_stdout() ? std::cerr : std::cout) << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify_pde(const Source& src, double h, const std::string& eps_str,
                   double tol, const std::vector<double>& window,
                   const std::string& fields_prefix, bool test_constant) {
  const Job job = resolve(src);
  if (!(h > 0)) throw ConfigError("--h must be positive");
  if (!(tol > 0)) throw ConfigError("--tol must be positive");

  GridSpec grid;
  if (!window.empty()) {
    grid.u_min = window[0];
    grid.u_max = window[1];
    grid.v_min = window[2];
    grid.v_max = window[3];
  } else if (job.entry && job.entry->has_pde_window) {
    grid = job.entry->pde_window;
  } else {
    grid = job.cfg.grid;
  }
  if (!(grid.u_min < grid.u_max) || !(grid.v_min < grid.v_max))
    throw ConfigError("--window must satisfy umin < umax and vmin < vmax");
  auto nodes_for = [&](double lo, double hi) {
    const long n = std::lround((hi - lo) / h) + 1;
    if (n < 2) throw ConfigError("--h exceeds the window span");
    if (n > 4096) throw ConfigError("--h is too small for the window (over 4096 nodes per axis)");
    return static_cast<int>(n);
  };
  grid.nu = nodes_for(grid.u_min, grid.u_max);
  grid.nv = nodes_for(grid.v_min, grid.v_max);

  GeneratorFields F;
  if (test_constant) {
    F.K = make_field(grid);
    F.kappa = make_field(grid);
    F.sign_e = make_field(grid);
    F.K.values.assign(F.K.values.size(), 2.0);
    F.sign_e.values.assign(F.sign_e.values.size(), 1.0);
  } else {
    try {
      F = solution_from_generators(job.cfg.surface, grid);
    } catch (const ConstructionError& e) {
      throw MaskError(e.what());
    }
  }

  int eps_best = 1;
  ResidualReport best;
  if (eps_str == "auto") {
    ResidualReport plus = natural_system_residual(F.K, F.kappa, 1, &F.sign_e);
    ResidualReport minus =
        natural_system_residual(F.K, F.kappa, -1, &F.sign_e);
    if (minus.max_r2 < plus.max_r2) {
      best = std::move(minus);
      eps_best = -1;
    } else {
      best = std::move(plus);
    }
  } else {
    eps_best = eps_str == "-1" ? -1 : 1;
    best = natural_system_residual(F.K, F.kappa, eps_best, &F.sign_e);
  }

  if (!fields_prefix.empty()) {
    std::ostringstream r1, r2;
    write_field_csv(r1, best.r1);
    write_field_csv(r2, best.r2);
    write_file(fields_prefix + ".r1.csv", r1.str());
    write_file(fields_prefix + ".r2.csv", r2.str());
  }

  const bool pass = best.max_r1 < tol && best.max_r2 < tol;
  const json report{{"h", grid.hu()},          {"epsilon_best", eps_best},
                    {"max_r1", best.max_r1},   {"max_r2", best.max_r2},
                    {"nodes_evaluated", best.nodes}, {"tol", tol},
                    {"pass", pass}};
  std::cout << report.dump(2) << "\n";
  return pass ? 0 : 1;
}

int cmd_canonicalize(const Source& src, double z0, double t0, double s0,
                     double span, double step, const std::string& prefix) {
  const Job job = resolve(src);
  if (!(span > 0) || !(step > 0))
    throw ConfigError("--span and --step must be positive");
  const ReparamSolution sol =
      reparametrize_to_canonical(job.cfg.surface, z0, t0, s0, step, span);

  // verification window inscribed in the new curve domains: |u-z0|+|v| stays
  // below span/2
  const double d = span / 5.0;
  const GridSpec vgrid{z0 - d, z0 + d, 11, -d, d, 11};
  const CanonicalReport rep = verify_canonical(sol.surface, vgrid);
  if (rep.nodes == 0)
    throw MaskError("no admissible node in the verification window");

  const std::string knots_path = prefix + ".knots.csv";
  const std::string surface_path = prefix + ".surface.json";
  std::ostringstream knots;
  write_knots_csv(knots, sol);
  write_file(knots_path, knots.str());
  write_file(surface_path,
             reparam_config_json(job.cfg.surface, sol, rep, vgrid));

  const json summary{{"knots", static_cast<long>(sol.z.size())},
                     {"z", {sol.z_min, sol.z_max}},
                     {"ode_residual", sol.ode_residual},
                     {"constancy_residual", rep.constancy_residual},
                     {"cross_residual", rep.cross_residual},
                     {"metric_residual", rep.metric_residual},
                     {"nodes_checked", rep.nodes},
                     {"files", {knots_path, surface_path}}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_catalog() {
  for (const CatalogEntry& e : catalog_entries()) {
    const GridSpec& g = e.default_grid;
    std::cout << e.name << "\t" << e.blurb << "\n\tgrid [" << g.u_min << ", "
              << g.u_max << "] x [" << g.v_min << ", " << g.v_max << "], "
              << g.nu << "x" << g.nv << " nodes\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"minimal Lorentzian surfaces in R^4_2 built from null curves"};
  app.require_subcommand(1);

  Source src_eval, src_curv, src_pde, src_canon;

  auto* eval = app.add_subcommand(
      "eval", "evaluate the immersion over the grid and export it");
  std::string eval_out = "-", eval_format = "csv", eval_project = "1,2,3";
  add_source(eval, src_eval);
  eval->add_option("--out", eval_out, "output file, - for stdout");
  eval->add_option("--format", eval_format, "csv, json or obj")
      ->check(CLI::IsMember({"csv", "json", "obj"}));
  eval->add_option("--project", eval_project,
                   "OBJ only: the three kept coordinate axes");

  auto* curv = app.add_subcommand(
      "curvature", "per-node K, kappa, deficit and classification");
  std::string curv_out = "-", curv_method = "closed";
  add_source(curv, src_curv);
  curv->add_option("--out", curv_out, "output file, - for stdout");
  curv->add_option("--method", curv_method, "closed, frame or both")
      ->check(CLI::IsMember({"closed", "frame", "both"}));

  auto* pde = app.add_subcommand(
      "verify-pde", "residuals of the natural curvature system on a window");
  double pde_h = 1e-3, pde_tol = 1e-2;
  std::string pde_eps = "auto", pde_fields;
  std::vector<double> pde_window;
  bool pde_constant = false;
  add_source(pde, src_pde);
  pde->set_help_flag("--help", "print this help");  // frees -h for the step
  pde->add_option("--h", pde_h, "lattice step");
  pde->add_option("--epsilon", pde_eps, "auto, +1 or -1")
      ->check(CLI::IsMember({"auto", "+1", "-1", "1"}));
  pde->add_option("--tol", pde_tol, "residual bound for exit 0");
  pde->add_option("--window", pde_window, "umin umax vmin vmax")->expected(4);
  pde->add_option("--fields", pde_fields,
                  "write residual lattices to PREFIX.r1.csv and PREFIX.r2.csv");
  pde->add_flag("--test-constant-fields", pde_constant)->group("");

  auto* canon = app.add_subcommand(
      "canonicalize", "reparametrize to canonical parameters and export");
  double cz0 = 0.0, ct0 = 0.0, cs0 = 0.0, cspan = 2.0, cstep = 1.0 / 64;
  std::string cprefix = "canonical";
  add_source(canon, src_canon);
  canon->add_option("--z0", cz0, "center of the new parameter interval");
  canon->add_option("--t0", ct0, "first-curve parameter at z0");
  canon->add_option("--s0", cs0, "second-curve parameter at z0");
  canon->add_option("--span", cspan, "length of the new parameter interval");
  canon->add_option("--step", cstep, "knot spacing of the maps");
  canon->add_option("--out-prefix", cprefix, "output file prefix");

  auto* cat = app.add_subcommand("catalog", "list built-in surfaces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(eval))
      return cmd_eval(src_eval, eval_out, eval_format, eval_project);
    if (app.got_subcommand(curv))
      return cmd_curvature(src_curv, curv_out, curv_method);
    if (app.got_subcommand(pde))
      return cmd_verify_pde(src_pde, pde_h, pde_eps, pde_tol, pde_window,
                            pde_fields, pde_constant);
    if (app.got_subcommand(canon))
      return cmd_canonicalize(src_canon, cz0, ct0, cs0, cspan, cstep, cprefix);
    if (app.got_subcommand(cat)) return cmd_catalog();
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownIdentifier& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const MaskError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const StiffnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lorentzw
