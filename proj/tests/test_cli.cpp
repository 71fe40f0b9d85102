#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lorentzw/canonical.hpp"
#include "lorentzw/cli.hpp"
#include "lorentzw/errors.hpp"
#include "lorentzw/io.hpp"
#include "lorentzw/pde.hpp"
#include "lorentzw/surface.hpp"

using namespace lorentzw;
using nlohmann::json;

namespace {

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "lorentzw_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

int run(const std::vector<std::string>& args, std::string* out = nullptr,
        std::string* err = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("lorentzw");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream so, se;
  std::streambuf* old_out = std::cout.rdbuf(so.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(se.rdbuf());
  int rc = -1;
  try {
    rc = run_cli(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (out) *out = so.str();
  if (err) *err = se.str();
  return rc;
}

const char* cubic_config = R"({
  "beta":  {"kind": "type2", "f": "1/4", "g": "t+1", "h": "t", "domain": [-4, 4], "t0": 0},
  "theta": {"kind": "type2", "f": "1/4", "g": "t", "h": "t+1", "domain": [-4, 4], "t0": 0},
  "grid": {"u": [-1, 1, 21], "v": [-1, 1, 21]},
  "tolerances": {"quad_tol": 1e-11, "mask_tol": 1e-9}
})";

WeierstrassSurface doubled_cubic() {
  return WeierstrassSurface{
      NullCurve::type2(ExprFunc::parse("1/2"), ExprFunc::parse("t+1"),
                       ExprFunc::parse("t"), -4.0, 4.0),
      NullCurve::type2(ExprFunc::parse("1/2"), ExprFunc::parse("t"),
                       ExprFunc::parse("t+1"), -4.0, 4.0)};
}

}  // namespace

TEST_CASE("config documents parse strictly") {
  const SurfaceConfig cfg = parse_config(cubic_config);
  CHECK(cfg.grid.nu == 21);
  CHECK(cfg.grid.nv == 21);
  CHECK(cfg.grid.u_min == -1.0);
  CHECK(cfg.grid.v_max == 1.0);
  CHECK(cfg.tolerances.quad_tol == 1e-11);
  CHECK(cfg.tolerances.mask_tol == 1e-9);
  const Vec4 d = cfg.surface.beta.derivative(0.0);
  CHECK(d.x1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.x2 == doctest::Approx(0.25).epsilon(1e-14));

  auto reject = [](const std::string& text) {
    CHECK_THROWS_AS((void)parse_config(text), ConfigError);
  };
  reject("not json at all");
  reject(R"({"beta": 1})");
  // unknown keys at every level
  std::string t = cubic_config;
  reject(t.substr(0, t.size() - 2) + R"(, "extra": 1})");
  reject(R"({"beta": {"kind": "type2", "f": "1", "g": "t", "h": "t", "domain": [-1,1], "weird": 0},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5], "w": [0,1,2]}})");
  // missing keys, malformed members
  reject(R"({"beta": {"kind": "type2", "f": "1", "g": "t", "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,2], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [1,-1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type3", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1+", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,1], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5.5], "v": [-1,1,5]}})");
  reject(R"({"beta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
             "grid": {"u": [-1,1,5], "v": [-1,1,5]},
             "tolerances": {"quad_tol": 0}})");

  // parse errors carry the expression offset through the config message
  try {
    (void)parse_config(
        R"({"beta": {"kind": "type1", "f": "2*", "eps": [1,1,1], "domain": [-1,1]},
            "theta": {"kind": "type1", "f": "1", "eps": [1,1,1], "domain": [-1,1]},
            "grid": {"u": [-1,1,5], "v": [-1,1,5]}})");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("beta.f") != std::string::npos);
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("curve specs round trip through JSON") {
  const NullCurve t1 = curve_from_json_text(
      R"({"kind": "type1", "f": "1", "eps": [-1, 1, 1], "domain": [-2, 2], "t0": 0})");
  const Vec4 d1 = t1.derivative(0.5);
  CHECK(d1.x1 == 1.0);
  CHECK(d1.x2 == -1.0);
  CHECK(d1.x3 == 1.0);
  CHECK(d1.x4 == 1.0);

  // canonical kind builds the 1/(4 sqrt|g'h'|) weight symbolically
  const NullCurve canon = curve_from_json_text(
      R"({"kind": "canonical", "g": "t+1", "h": "t", "domain": [-4, 4]})");
  CHECK(canon.f()->value(0.3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(canon.t0() == 0.0);

  const NullCurve t2 = curve_from_json_text(
      R"({"kind": "type2", "f": "1/4", "g": "t+1", "h": "t", "domain": [-4, 4], "t0": 0.5})");
  const NullCurve back = curve_from_json_text(curve_to_json_text(t2));
  CHECK(back.kind() == CurveKind::Type2);
  CHECK(back.t_min() == t2.t_min());
  CHECK(back.t0() == t2.t0());
  for (double t : {-1.0, 0.0, 0.7, 2.0}) {
    const Vec4 a = t2.derivative(t), b = back.derivative(t);
    CHECK(max_abs(a - b) == 0.0);
    const Vec4 pa = t2.position(t), pb = back.position(t);
    CHECK(max_abs(pa - pb) < 1e-12);
  }
  const std::string round = curve_to_json_text(t1);
  CHECK(curve_from_json_text(round).eps()[0] == -1);
}

TEST_CASE("reparametrized surfaces serialize and reload exactly") {
  const WeierstrassSurface base = doubled_cubic();
  const ReparamSolution sol =
      reparametrize_to_canonical(base, 0.0, 0.0, 0.0, 1.0 / 64, 1.0);
  const GridSpec vgrid{-0.2, 0.2, 11, -0.2, 0.2, 11};
  const CanonicalReport rep = verify_canonical(sol.surface, vgrid);
  const std::string text = reparam_config_json(base, sol, rep, vgrid);

  const json j = json::parse(text);
  CHECK(j.at("beta").at("kind") == "reparam");
  CHECK(j.at("residuals").at("nodes").get<long>() == rep.nodes);

  const SurfaceConfig cfg = parse_config(text);
  CHECK(cfg.grid.nu == 11);
  CHECK(cfg.surface.beta.t0() == sol.surface.beta.t0());
  CHECK(cfg.surface.beta.t_min() == sol.z.front());
  for (int k = 0; k < 9; ++k) {
    const double u = -0.2 + 0.05 * k, v = 0.1 - 0.02 * k;
    const Vec4 a = eval_point(sol.surface, u, v);
    const Vec4 b = eval_point(cfg.surface, u, v);
    CHECK(max_abs(a - b) < 1e-10);
  }
  const CanonicalReport again = verify_canonical(cfg.surface, vgrid);
  CHECK(again.constancy_residual < 1e-12);

  // reparametrized generators carry no expression tree to serialize
  CHECK_THROWS_AS((void)curve_to_json_text(cfg.surface.beta), ConfigError);
}

TEST_CASE("surface CSV export writes the full lattice with masks") {
  const SurfaceConfig cfg = parse_config(cubic_config);
  std::ostringstream os;
  const long live =
      write_surface_csv(os, cfg.surface, cfg.grid, cfg.tolerances);
  CHECK(live == 399);  // 441 nodes minus the two singular rows v = +-1/2
  const auto rows = lines_of(os.str());
  REQUIRE(rows.size() == 442);
  CHECK(rows[0] == "u,v,x1,x2,x3,x4,E,sign,mask");

  long masked = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto c = cells_of(rows[r]);
    REQUIRE(c.size() == 9);
    if (c[8] == "0") {
      ++masked;
      CHECK(std::abs(std::stod(c[1])) == doctest::Approx(0.5).epsilon(1e-12));
      for (int k = 2; k <= 7; ++k) CHECK(std::stod(c[k]) == 0.0);
    }
  }
  CHECK(masked == 42);

  // base point row sits at the origin; E column matches the first form
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto c = cells_of(rows[r]);
    if (std::stod(c[0]) == 0.0 && std::stod(c[1]) == 0.0) {
      for (int k = 2; k <= 5; ++k) CHECK(std::abs(std::stod(c[k])) < 1e-12);
      CHECK(std::stod(c[6]) == doctest::Approx(-0.25).epsilon(1e-12));
      CHECK(c[7] == "-1");
    }
  }
}

TEST_CASE("surface OBJ export projects and meshes only unmasked cells") {
  const SurfaceConfig cfg = parse_config(cubic_config);
  std::ostringstream os;
  const long live = write_surface_obj(os, cfg.surface, cfg.grid,
                                      cfg.tolerances, {1, 3, 4});
  CHECK(live == 399);
  const auto rows = lines_of(os.str());
  long nv = 0, nf = 0;
  for (const std::string& line : rows) {
    if (line.rfind("v ", 0) == 0) ++nv;
    if (line.rfind("f ", 0) == 0) {
      ++nf;
      int a, b, c, d;
      REQUIRE(std::sscanf(line.c_str(), "f %d %d %d %d", &a, &b, &c, &d) == 4);
      for (int idx : {a, b, c, d}) {
        CHECK(idx >= 1);
        CHECK(idx <= 441);
      }
    }
  }
  CHECK(nv == 441);
  // 400 cells minus the four cell rows touching v = +-1/2
  CHECK(nf == 320);

  // projection keeps coordinates (x1, x3, x4) of the immersion
  const Vec4 want = eval_point(cfg.surface, -1.0, -1.0);
  double x, y, z;
  for (const std::string& line : rows)
    if (line.rfind("v ", 0) == 0) {
      REQUIRE(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
      break;
    }
  CHECK(x == doctest::Approx(want.x1).epsilon(1e-12));
  CHECK(y == doctest::Approx(want.x3).epsilon(1e-12));
  CHECK(z == doctest::Approx(want.x4).epsilon(1e-12));

  CHECK_THROWS_AS(
      (void)write_surface_obj(os, cfg.surface, cfg.grid, cfg.tolerances,
                              {1, 2, 2}),
      ConfigError);
  CHECK_THROWS_AS(
      (void)write_surface_obj(os, cfg.surface, cfg.grid, cfg.tolerances,
                              {0, 2, 3}),
      ConfigError);
}

TEST_CASE("surface JSON export mirrors the CSV lattice") {
  const SurfaceConfig cfg = parse_config(cubic_config);
  std::ostringstream os;
  const long live =
      write_surface_json(os, cfg.surface, cfg.grid, cfg.tolerances);
  CHECK(live == 399);
  const json j = json::parse(os.str());
  REQUIRE(j.at("nodes").size() == 441);
  CHECK(j.at("grid").at("u")[2].get<int>() == 21);
  const json& first = j.at("nodes")[0];
  CHECK(first.at("u").get<double>() == -1.0);
  CHECK(first.at("mask").get<int>() == 1);
  CHECK(first.at("x").size() == 4);
}

TEST_CASE("field and knot CSV writers") {
  ScalarField F = make_field(GridSpec{0.0, 1.0, 3, 0.0, 1.0, 2});
  F.set(1, 0, 2.5);
  F.invalidate(2, 1);
  std::ostringstream os;
  write_field_csv(os, F);
  const auto rows = lines_of(os.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "u,v,value,mask");
  CHECK(cells_of(rows[2])[2] == "2.5");
  CHECK(cells_of(rows[6])[3] == "0");

  const ReparamSolution sol = reparametrize_to_canonical(
      doubled_cubic(), 0.0, 0.0, 0.0, 1.0 / 8, 0.5);
  std::ostringstream ks;
  write_knots_csv(ks, sol);
  const auto krows = lines_of(ks.str());
  REQUIRE(krows.size() == sol.z.size() + 1);
  CHECK(krows[0] == "z,p,q");
  const auto mid = cells_of(krows[(krows.size() + 1) / 2]);
  CHECK(std::stod(mid[0]) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::stod(mid[1]) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("thread budget honors the environment cap") {
  const char* saved = std::getenv("LORENTZW_THREADS");
  const std::string keep = saved ? saved : "";

  setenv("LORENTZW_THREADS", "1", 1);
  CHECK(thread_budget() == 1);
  setenv("LORENTZW_THREADS", "0", 1);
  CHECK(thread_budget() == 1);
  setenv("LORENTZW_THREADS", "junk", 1);
  CHECK(thread_budget() >= 1);
  unsetenv("LORENTZW_THREADS");
  CHECK(thread_budget() >= 1);

  std::vector<int> hits(257, 0);
  parallel_rows(257, [&](int j) { hits[j] += j + 1; });
  for (int j = 0; j < 257; ++j) CHECK(hits[j] == j + 1);
  CHECK_THROWS_AS(
      parallel_rows(8, [](int j) { if (j == 5) throw MaskError("boom"); }),
      MaskError);

  if (saved)
    setenv("LORENTZW_THREADS", keep.c_str(), 1);
  else
    unsetenv("LORENTZW_THREADS");
}

TEST_CASE("eval subcommand exports and reports exit codes") {
  const auto dir = work_dir();
  const std::string csv_path = (dir / "eval.csv").string();
  std::string out, err;

  CHECK(run({"eval", "--catalog", "cubic", "--out", csv_path}, &out, &err) == 0);
  const auto rows = lines_of(slurp(csv_path));
  REQUIRE(rows.size() == 442);
  CHECK(rows[0] == "u,v,x1,x2,x3,x4,E,sign,mask");

  const std::string obj_path = (dir / "eval.obj").string();
  CHECK(run({"eval", "--catalog", "cubic", "--format", "obj", "--project",
             "1,3,4", "--out", obj_path}) == 0);
  CHECK(slurp(obj_path).rfind("#", 0) == 0);

  const std::string json_path = (dir / "eval.json").string();
  CHECK(run({"eval", "--catalog", "expo", "--format", "json", "--out",
             json_path}) == 0);
  CHECK(json::parse(slurp(json_path)).at("nodes").size() == 441);

  // stdout is the default sink
  CHECK(run({"eval", "--catalog", "plane"}, &out) == 0);
  CHECK(lines_of(out).size() == 122);

  CHECK(run({"eval", "--catalog", "no-such"}, &out, &err) == 2);
  CHECK(err.find("unknown catalog entry") != std::string::npos);
  CHECK(run({"eval"}, &out, &err) == 2);
  CHECK(run({"eval", "--catalog", "cubic", "--format", "tiff"}, &out, &err) == 2);
  CHECK(run({"eval", "--catalog", "cubic", "--format", "obj", "--project",
             "1,2"}, &out, &err) == 2);
  CHECK(run({"eval", "--catalog", "cubic", "--config", "x.json"}, &out,
            &err) == 2);

  const std::string bad = write_temp("bad.json", "{\"beta\": 3}");
  CHECK(run({"eval", "--config", bad}, &out, &err) == 2);
  const std::string off = write_temp("off.json", R"({
    "beta":  {"kind": "type2", "f": "1/4", "g": "t+1", "h": "t", "domain": [-4, 4]},
    "theta": {"kind": "type2", "f": "1/4", "g": "t", "h": "t+1", "domain": [-4, 4]},
    "grid": {"u": [10, 11, 5], "v": [0, 1, 5]}})");
  CHECK(run({"eval", "--config", off}, &out, &err) == 3);
  CHECK(err.find("masked") != std::string::npos);
}

TEST_CASE("curvature subcommand emits per-node values and summaries") {
  const auto dir = work_dir();
  const std::string path = (dir / "curv.csv").string();
  std::string out, err;

  CHECK(run({"curvature", "--catalog", "cubic", "--method", "both", "--out",
             path}, &out, &err) == 0);
  const json summary = json::parse(out);
  CHECK(summary.at("method") == "both");
  CHECK(summary.at("max_K_discrepancy").get<double>() < 1e-7);
  CHECK(summary.at("max_kappa_discrepancy").get<double>() < 1e-7);
  CHECK(summary.at("classes").at("GeneralType").get<long>() == 399);

  const auto rows = lines_of(slurp(path));
  REQUIRE(rows.size() == 442);
  CHECK(rows[0] == "u,v,K,kappa,K_frame,kappa_frame,deficit,class,mask");
  long k16 = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto c = cells_of(rows[r]);
    REQUIRE(c.size() == 9);
    if (std::stod(c[1]) == 0.0 && !c[2].empty()) {
      CHECK(std::stod(c[2]) == doctest::Approx(16.0).epsilon(1e-10));
      CHECK(std::abs(std::stod(c[3])) < 1e-10);
      ++k16;
    }
  }
  CHECK(k16 == 21);

  // frame method on the plane reports the class and omits the values
  CHECK(run({"curvature", "--catalog", "plane", "--method", "frame", "--out",
             path}, &out, &err) == 0);
  const json plane_summary = json::parse(out);
  CHECK(plane_summary.at("valued").get<long>() == 0);
  CHECK(plane_summary.at("classes").at("Plane").get<long>() == 121);
  const auto prow = cells_of(lines_of(slurp(path))[1]);
  REQUIRE(prow.size() == 7);
  CHECK(prow[2].empty());
  CHECK(prow[3].empty());
  CHECK(prow[5] == "Plane");
  CHECK(prow[6] == "0");

  // CSV on stdout pushes the summary to stderr
  CHECK(run({"curvature", "--catalog", "rank1"}, &out, &err) == 0);
  CHECK(lines_of(out)[0] == "u,v,K,kappa,deficit,class,mask");
  CHECK(json::parse(err).at("classes").at("OneDimNormal").get<long>() == 121);
}

TEST_CASE("verify-pde subcommand checks residuals and exit codes") {
  const auto dir = work_dir();
  std::string out, err;

  CHECK(run({"verify-pde", "--catalog", "cubic"}, &out, &err) == 0);
  json rep = json::parse(out);
  CHECK(rep.at("h").get<double>() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(rep.at("max_r1").get<double>() < 1e-3);
  CHECK(rep.at("max_r2").get<double>() < 1e-3);
  CHECK(rep.at("nodes_evaluated").get<long>() == 73 * 73);
  CHECK(rep.at("pass").get<bool>());

  CHECK(run({"verify-pde", "--catalog", "expo", "--epsilon", "+1"}, &out,
            &err) == 0);
  CHECK(json::parse(out).at("epsilon_best").get<int>() == 1);

  // explicit window with residual field dumps
  const std::string prefix = (dir / "resid").string();
  CHECK(run({"verify-pde", "--catalog", "cubic", "--h", "0.002", "--window",
             "-0.04", "0.04", "0.06", "0.14", "--fields", prefix}, &out,
            &err) == 0);
  CHECK(lines_of(slurp(prefix + ".r1.csv"))[0] == "u,v,value,mask");
  CHECK(lines_of(slurp(prefix + ".r2.csv")).size() == 1 + 41l * 41);

  CHECK(run({"verify-pde", "--catalog", "cubic", "--test-constant-fields"},
            &out, &err) == 1);
  rep = json::parse(out);
  CHECK(rep.at("max_r1").get<double>() == doctest::Approx(16.0));
  CHECK(rep.at("max_r2").get<double>() == 0.0);
  CHECK(!rep.at("pass").get<bool>());

  const std::string neg = write_temp("neg.json", R"({
    "beta":  {"kind": "type2", "f": "1/4", "g": "t+1", "h": "t", "domain": [-4, 4]},
    "theta": {"kind": "type2", "f": "1/4", "g": "-t", "h": "t+1", "domain": [-4, 4]},
    "grid": {"u": [-0.2, 0.2, 11], "v": [-0.2, 0.2, 11]}})");
  CHECK(run({"verify-pde", "--config", neg, "--h", "0.04"}, &out, &err) == 4);

  CHECK(run({"verify-pde", "--catalog", "cubic", "--h", "-1"}, &out, &err) == 2);
  CHECK(run({"verify-pde", "--catalog", "cubic", "--window", "1", "0", "0",
             "1"}, &out, &err) == 2);
}

TEST_CASE("canonicalize subcommand writes knots and a loadable config") {
  const auto dir = work_dir();
  std::string out, err;
  const std::string doubled = write_temp("doubled.json", R"({
    "beta":  {"kind": "type2", "f": "1/2", "g": "t+1", "h": "t", "domain": [-4, 4]},
    "theta": {"kind": "type2", "f": "1/2", "g": "t", "h": "t+1", "domain": [-4, 4]},
    "grid": {"u": [-0.5, 0.5, 11], "v": [-0.5, 0.5, 11]}})");
  const std::string prefix = (dir / "canon").string();

  CHECK(run({"canonicalize", "--config", doubled, "--span", "1",
             "--out-prefix", prefix}, &out, &err) == 0);
  const json summary = json::parse(out);
  CHECK(summary.at("ode_residual").get<double>() < 1e-12);
  CHECK(summary.at("constancy_residual").get<double>() < 1e-12);
  CHECK(summary.at("metric_residual").get<double>() < 1e-9);
  CHECK(summary.at("knots").get<long>() == 65);

  // knot table: slope 1/sqrt(2) against the doubled weight
  const auto krows = lines_of(slurp(prefix + ".knots.csv"));
  REQUIRE(krows.size() == 66);
  const auto last = cells_of(krows.back());
  CHECK(std::stod(last[1]) ==
        doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-10));

  // the emitted config reloads and evaluates
  const std::string emitted = prefix + ".surface.json";
  CHECK(run({"eval", "--config", emitted, "--out",
             (dir / "canon_eval.csv").string()}) == 0);
  const SurfaceConfig cfg = load_config(emitted);
  CHECK(verify_canonical(cfg.surface, cfg.grid).constancy_residual < 1e-12);

  // ODE preconditions surface as exit 5
  const std::string evenzero = write_temp("evenzero.json", R"({
    "beta":  {"kind": "type2", "f": "t^2", "g": "t+1", "h": "t", "domain": [-1, 1]},
    "theta": {"kind": "type2", "f": "1/4", "g": "t", "h": "t+1", "domain": [-1, 1]},
    "grid": {"u": [-0.2, 0.2, 5], "v": [-0.2, 0.2, 5]}})");
  CHECK(run({"canonicalize", "--config", evenzero, "--span", "0.5",
             "--out-prefix", (dir / "ez").string()}, &out, &err) == 5);
  CHECK(err.find("weight vanishes") != std::string::npos);

  CHECK(run({"canonicalize", "--catalog", "plane", "--out-prefix",
             (dir / "pl").string()}, &out, &err) == 5);
  CHECK(run({"canonicalize", "--config", doubled, "--span", "-1",
             "--out-prefix", prefix}, &out, &err) == 2);
}

TEST_CASE("catalog subcommand lists the built-ins") {
  std::string out, err;
  CHECK(run({"catalog"}, &out, &err) == 0);
  for (const char* name : {"cubic", "expo", "plane", "rank1"})
    CHECK(out.find(name) != std::string::npos);
  CHECK(run({}, &out, &err) == 2);  // a subcommand is required
}
