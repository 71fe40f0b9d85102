#include "lorentzw/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lorentzw/errors.hpp"

namespace lorentzw {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

bool listed(const std::string& k, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (k == n) return true;
  return false;
}

// Strict schema: every present key must be known, every required key present.
void check_keys(const json& j, const std::string& what,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(what + " must be a JSON object");
  for (const auto& item : j.items())
    if (!listed(item.key(), required) && !listed(item.key(), optional))
      fail("unknown key '" + item.key() + "' in " + what);
  for (const char* k : required)
    if (!j.contains(k)) fail("missing key '" + std::string(k) + "' in " + what);
}

double number_field(const json& j, const char* key, const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(what + "." + key + " must be a number");
  return v.get<double>();
}

long integer_field(const json& j, const char* key, const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(what + "." + key + " must be an integer");
  return v.get<long>();
}

std::string string_field(const json& j, const char* key,
                         const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_string()) fail(what + "." + key + " must be a string");
  return v.get<std::string>();
}

expr::Expr expr_field(const json& j, const char* key, const std::string& what) {
  const std::string text = string_field(j, key, what);
  try {
    return expr::parse(text);
  } catch (const SyntaxError& e) {
    fail(what + "." + key + ": " + e.what() + " (offset " +
         std::to_string(e.offset) + ")");
  } catch (const UnknownIdentifier& e) {
    fail(what + "." + key + ": " + e.what());
  }
}

FuncPtr func_field(const json& j, const char* key, const std::string& what) {
  return std::make_shared<ExprFunc>(expr_field(j, key, what));
}

std::pair<double, double> domain_field(const json& j, const std::string& what) {
  const json& v = j.at("domain");
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(what + ".domain must be [min, max]");
  const double a = v[0].get<double>(), b = v[1].get<double>();
  if (!(a < b)) fail(what + ".domain must have min < max");
  return {a, b};
}

double t0_field(const json& j, const std::string& what, double fallback) {
  return j.contains("t0") ? number_field(j, "t0", what) : fallback;
}

std::vector<double> vector_field(const json& j, const char* key,
                                 const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_array()) fail(what + "." + key + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) fail(what + "." + key + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

NullCurve curve_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) fail(what + " must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    fail(what + " needs a string key 'kind'");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "type1") {
    check_keys(j, what, {"kind", "f", "eps", "domain"}, {"t0"});
    const json& e = j.at("eps");
    if (!e.is_array() || e.size() != 3) fail(what + ".eps must be [e1,e2,e3]");
    int eps[3];
    for (int k = 0; k < 3; ++k) {
      if (!e[k].is_number_integer() ||
          (e[k].get<long>() != 1 && e[k].get<long>() != -1))
        fail(what + ".eps entries must be 1 or -1");
      eps[k] = static_cast<int>(e[k].get<long>());
    }
    auto [a, b] = domain_field(j, what);
    return NullCurve::type1(func_field(j, "f", what), eps[0], eps[1], eps[2],
                            a, b, t0_field(j, what, 0.0));
  }

  if (kind == "type2") {
    check_keys(j, what, {"kind", "f", "g", "h", "domain"}, {"t0"});
    auto [a, b] = domain_field(j, what);
    return NullCurve::type2(func_field(j, "f", what), func_field(j, "g", what),
                            func_field(j, "h", what), a, b,
                            t0_field(j, what, 0.0));
  }

  if (kind == "canonical") {
    check_keys(j, what, {"kind", "g", "h", "domain"}, {"t0"});
    const expr::Expr ge = expr_field(j, "g", what);
    const expr::Expr he = expr_field(j, "h", what);
    auto [a, b] = domain_field(j, what);
    return NullCurve::type2(
        std::make_shared<ExprFunc>(symbolic_canonical_weight(ge, he)),
        std::make_shared<ExprFunc>(ge), std::make_shared<ExprFunc>(he), a, b,
        t0_field(j, what, 0.0));
  }

  if (kind == "reparam") {
    check_keys(j, what, {"kind", "base", "map"}, {"t0"});
    const NullCurve base = curve_from_json(j.at("base"), what + ".base");
    if (base.kind() != CurveKind::Type2)
      fail(what + ".base must be a type2 curve");
    const std::string mwhat = what + ".map";
    const json& m = j.at("map");
    check_keys(m, mwhat, {"knots_z", "knots_p", "knots_dp", "sign"});
    auto z = vector_field(m, "knots_z", mwhat);
    auto p = vector_field(m, "knots_p", mwhat);
    auto dp = vector_field(m, "knots_dp", mwhat);
    const long sign = integer_field(m, "sign", mwhat);
    if (sign != 1 && sign != -1) fail(mwhat + ".sign must be 1 or -1");
    std::shared_ptr<const ScalarFunc> map;
    try {
      map = std::make_shared<ReparamMap>(base.f(), base.g(), base.h(),
                                         std::move(z), std::move(p),
                                         std::move(dp),
                                         static_cast<int>(sign));
    } catch (const PreconditionError& e) {
      fail(mwhat + ": " + e.what());
    }
    const auto& mp = static_cast<const ReparamMap&>(*map);
    FuncPtr gc = std::make_shared<ComposedFunc>(base.g(), map);
    FuncPtr hc = std::make_shared<ComposedFunc>(base.h(), map);
    FuncPtr fc = std::make_shared<CanonicalWeight>(gc, hc);
    const double mid = mp.knots_z()[(mp.knots_z().size() - 1) / 2];
    return NullCurve::type2(fc, gc, hc, mp.knots_z().front(),
                            mp.knots_z().back(), t0_field(j, what, mid));
  }

  fail(what + ": unknown curve kind '" + kind + "'");
}

const ExprFunc* as_expr(const FuncPtr& f) {
  return dynamic_cast<const ExprFunc*>(f.get());
}

json curve_to_json(const NullCurve& c) {
  if (c.kind() == CurveKind::Type1) {
    const ExprFunc* f = as_expr(c.f());
    if (!f) fail("curve weight is not an expression; cannot serialize");
    return json{{"kind", "type1"},
                {"f", f->expression().str()},
                {"eps", {c.eps()[0], c.eps()[1], c.eps()[2]}},
                {"domain", {c.t_min(), c.t_max()}},
                {"t0", c.t0()}};
  }
  const ExprFunc* f = as_expr(c.f());
  const ExprFunc* g = as_expr(c.g());
  const ExprFunc* h = as_expr(c.h());
  if (!f || !g || !h)
    fail("curve generators are not expressions; cannot serialize");
  return json{{"kind", "type2"},
              {"f", f->expression().str()},
              {"g", g->expression().str()},
              {"h", h->expression().str()},
              {"domain", {c.t_min(), c.t_max()}},
              {"t0", c.t0()}};
}

json grid_to_json(const GridSpec& g) {
  return json{{"u", {g.u_min, g.u_max, g.nu}}, {"v", {g.v_min, g.v_max, g.nv}}};
}

GridSpec axis_pair(const json& j, const std::string& what) {
  check_keys(j, what, {"u", "v"});
  GridSpec g;
  auto read_axis = [&](const char* key, double& lo, double& hi, int& n) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() ||
        !a[1].is_number() || !a[2].is_number_integer())
      fail(what + "." + key + " must be [min, max, n]");
    lo = a[0].get<double>();
    hi = a[1].get<double>();
    const long count = a[2].get<long>();
    if (!(lo < hi)) fail(what + "." + key + " must have min < max");
    if (count < 2 || count > 65536)
      fail(what + "." + key + " node count must be in [2, 65536]");
    n = static_cast<int>(count);
  };
  read_axis("u", g.u_min, g.u_max, g.nu);
  read_axis("v", g.v_min, g.v_max, g.nv);
  return g;
}

std::string num(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

struct NodeSample {
  Vec4 x{};
  double E = 0.0;
  int sign = 0;
  bool ok = false;
};

// Shared lattice pass behind every exporter. Position caches are internally
// synchronized, so rows can run concurrently.
std::vector<NodeSample> sample_surface(const WeierstrassSurface& S,
                                       const GridSpec& grid,
                                       const Tolerances& tol) {
  if (grid.nu < 2 || grid.nv < 2)
    throw PreconditionError("surface export needs at least a 2x2 grid");
  std::vector<NodeSample> out(grid.nodes());
  parallel_rows(grid.nv, [&](int j) {
    for (int i = 0; i < grid.nu; ++i) {
      const double u = grid.u(i), v = grid.v(j);
      NodeSample s;
      try {
        if (S.in_domain(u, v) && admissible(S, u, v, tol.mask_tol)) {
          s.E = first_form(S, u, v).E;
          s.x = eval_point(S, u, v, tol.quad_tol);
          s.sign = s.E < 0 ? -1 : 1;
          s.ok = true;
        }
      } catch (const DomainError&) {
        s = NodeSample{};
      } catch (const QuadratureError&) {
        s = NodeSample{};
      } catch (const SingularPointError&) {
        s = NodeSample{};
      }
      out[static_cast<long>(j) * grid.nu + i] = s;
    }
  });
  return out;
}

}  // namespace

SurfaceConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"beta", "theta", "grid"},
             {"tolerances", "residuals"});
  SurfaceConfig cfg{WeierstrassSurface{curve_from_json(j.at("beta"), "beta"),
                                       curve_from_json(j.at("theta"), "theta")},
                    axis_pair(j.at("grid"), "grid"), Tolerances{}};
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t, "tolerances", {}, {"quad_tol", "mask_tol"});
    if (t.contains("quad_tol")) {
      cfg.tolerances.quad_tol = number_field(t, "quad_tol", "tolerances");
      if (!(cfg.tolerances.quad_tol > 0)) fail("tolerances.quad_tol must be positive");
    }
    if (t.contains("mask_tol")) {
      cfg.tolerances.mask_tol = number_field(t, "mask_tol", "tolerances");
      if (!(cfg.tolerances.mask_tol > 0)) fail("tolerances.mask_tol must be positive");
    }
  }
  return cfg;
}

SurfaceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

NullCurve curve_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("curve is not valid JSON: ") + e.what());
  }
  return curve_from_json(j, "curve");
}

std::string curve_to_json_text(const NullCurve& c) {
  return curve_to_json(c).dump(2) + "\n";
}

std::string reparam_config_json(const WeierstrassSurface& base,
                                const ReparamSolution& sol,
                                const CanonicalReport& report,
                                const GridSpec& grid) {
  const json jb{{"kind", "reparam"},
                {"base", curve_to_json(base.beta)},
                {"t0", sol.surface.beta.t0()},
                {"map",
                 {{"knots_z", sol.z},
                  {"knots_p", sol.p},
                  {"knots_dp", sol.dp},
                  {"sign", sol.s_p}}}};
  const json jt{{"kind", "reparam"},
                {"base", curve_to_json(base.theta)},
                {"t0", sol.surface.theta.t0()},
                {"map",
                 {{"knots_z", sol.z},
                  {"knots_p", sol.q},
                  {"knots_dp", sol.dq},
                  {"sign", sol.s_q}}}};
  const json out{{"beta", jb},
                 {"theta", jt},
                 {"grid", grid_to_json(grid)},
                 {"residuals",
                  {{"ode", sol.ode_residual},
                   {"constancy", report.constancy_residual},
                   {"cross", report.cross_residual},
                   {"metric", report.metric_residual},
                   {"nodes", report.nodes}}}};
  return out.dump(2) + "\n";
}

long write_surface_csv(std::ostream& os, const WeierstrassSurface& S,
                       const GridSpec& grid, const Tolerances& tol) {
  const auto rows = sample_surface(S, grid, tol);
  os << "u,v,x1,x2,x3,x4,E,sign,mask\n";
  long live = 0;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const NodeSample& s = rows[static_cast<long>(j) * grid.nu + i];
      live += s.ok;
      os << num(grid.u(i)) << ',' << num(grid.v(j));
      for (int k = 0; k < 4; ++k) os << ',' << num(s.x[k]);
      os << ',' << num(s.E) << ',' << s.sign << ',' << int(s.ok) << '\n';
    }
  return live;
}

long write_surface_json(std::ostream& os, const WeierstrassSurface& S,
                        const GridSpec& grid, const Tolerances& tol) {
  const auto rows = sample_surface(S, grid, tol);
  json nodes = json::array();
  long live = 0;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const NodeSample& s = rows[static_cast<long>(j) * grid.nu + i];
      live += s.ok;
      nodes.push_back(json{{"u", grid.u(i)},
                           {"v", grid.v(j)},
                           {"x", json::array({s.x.x1, s.x.x2, s.x.x3, s.x.x4})},
                           {"E", s.E},
                           {"sign", s.sign},
                           {"mask", int(s.ok)}});
    }
  os << json{{"grid", grid_to_json(grid)}, {"nodes", nodes}}.dump(2) << "\n";
  return live;
}

long write_surface_obj(std::ostream& os, const WeierstrassSurface& S,
                       const GridSpec& grid, const Tolerances& tol,
                       const std::array<int, 3>& keep) {
  for (int k : keep)
    if (k < 1 || k > 4) fail("OBJ projection axes must be in 1..4");
  if (keep[0] == keep[1] || keep[0] == keep[2] || keep[1] == keep[2])
    fail("OBJ projection axes must be distinct");
  const auto rows = sample_surface(S, grid, tol);
  os << "# vertex lattice " << grid.nu << " x " << grid.nv
     << ", keeping coordinates " << keep[0] << ' ' << keep[1] << ' ' << keep[2]
     << "\n";
  long live = 0;
  for (long n = 0; n < grid.nodes(); ++n) {
    const NodeSample& s = rows[n];
    live += s.ok;
    os << "v " << num(s.ok ? s.x[keep[0] - 1] : 0.0) << ' '
       << num(s.ok ? s.x[keep[1] - 1] : 0.0) << ' '
       << num(s.ok ? s.x[keep[2] - 1] : 0.0) << '\n';
  }
  for (int j = 0; j + 1 < grid.nv; ++j)
    for (int i = 0; i + 1 < grid.nu; ++i) {
      const long a = static_cast<long>(j) * grid.nu + i;
      const long b = a + 1, c = a + grid.nu + 1, d = a + grid.nu;
      if (rows[a].ok && rows[b].ok && rows[c].ok && rows[d].ok)
        os << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << ' ' << d + 1
           << '\n';
    }
  return live;
}

void write_field_csv(std::ostream& os, const ScalarField& field) {
  os << "u,v,value,mask\n";
  for (int j = 0; j < field.grid.nv; ++j)
    for (int i = 0; i < field.grid.nu; ++i) {
      const bool ok = field.valid(i, j);
      os << num(field.grid.u(i)) << ',' << num(field.grid.v(j)) << ','
         << num(ok ? field.value(i, j) : 0.0) << ',' << int(ok) << '\n';
    }
}

void write_knots_csv(std::ostream& os, const ReparamSolution& sol) {
  os << "z,p,q\n";
  for (std::size_t k = 0; k < sol.z.size(); ++k)
    os << num(sol.z[k]) << ',' << num(sol.p[k]) << ',' << num(sol.q[k])
       << '\n';
}

int thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("LORENTZW_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0')
      n = cap < 1 ? 1u : std::min(static_cast<unsigned long>(n),
                                  static_cast<unsigned long>(cap));
  }
  return static_cast<int>(n);
}

void parallel_rows(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int j = 0; j < n; ++j) fn(j);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto drain = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= n) return;
      try {
        fn(j);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace lorentzw
