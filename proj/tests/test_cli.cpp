#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tapgp/experiment.hpp"

using namespace tapgp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tapgp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tapgp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  if (!fs::exists(dir)) return 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("parse_config: defaults and overrides") {
  const auto d = parse_config("");
  CHECK(d.object == "wave");
  CHECK(d.run.budget == 17);
  CHECK(d.run.n_initial_random == 3);
  CHECK(d.run.grid_resolution == 47);
  CHECK(d.run.model.surface_kernel.lengthscale_sq == 0.017);
  CHECK(d.scene.area_x_cm == 23.0);
  CHECK(d.seeds.size() == 20);

  const auto c = parse_config(
      "# comment\n[scene]\nobject = slope\narea_cm = 30x25\nplacement_x_cm = 2\n"
      "[run]\nseeds = 0-2, 7\nstrategy = uncertainty\nweight_prior_mean = 0.5 ; inline\n"
      "[output]\nsnapshot_every = none\nemit_pgm = true\n");
  CHECK(c.object == "slope");
  CHECK(c.scene.area_x_cm == 30.0);
  CHECK(c.scene.area_y_cm == 25.0);
  CHECK(c.seeds == std::vector<std::uint64_t>{0, 1, 2, 7});
  CHECK(c.run.strategy == Strategy::UncertaintyOnly);
  CHECK(c.run.model.weight_kernel.prior_mean == 0.5);
  CHECK(c.run.snapshot_every == 0);
  CHECK(c.emit_pgm);
}

TEST_CASE("parse_config: errors name the problem") {
  try {
    (void)parse_config("[run]\nbandwith = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bandwith") != std::string::npos);
    CHECK(msg.find("did you mean '" + nearest_key("bandwith") + "'") != std::string::npos);
  }
  CHECK(nearest_key("budjet") == "budget");
  CHECK(nearest_key("lenghtscale_sq") == "lengthscale_sq");
  CHECK_THROWS_AS((void)parse_config("[bogus]\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("budget = 3\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[run]\nbudget = many\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[run]\nbudget = 2\nn_initial_random = 3\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[scene]\nplacement_x_cm = 10\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[scene]\nobject = cube\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\nkey = grid_resolution\nvalues =\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\nkey = bandwidth\nvalues = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)load_config("/nonexistent/tapgp.ini"), ConfigError);
}

TEST_CASE("format_number: 9 significant digits") {
  CHECK(format_number(10.0 / 17.0) == "0.588235294");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(23.0) == "23");
  CHECK(format_number(1e-7) == "1e-07");
}

TEST_CASE("heatmap writers") {
  const GridField f = {0.0, 0.25, 0.5, 1.0};  // row 0: 0, 0.25; row 1: 0.5, 1
  std::ostringstream csv;
  write_heatmap_csv(csv, f, 2);
  CHECK(csv.str() == "0.5,1\n0,0.25\n");

  std::ostringstream pgm;
  write_heatmap_pgm(pgm, {0.0, 0.25, 0.5, 2.0}, 2);
  const std::string bytes = pgm.str();
  const std::string header = "P5\n2 2\n255\n";
  REQUIRE(bytes.size() == header.size() + 4);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 128);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 255);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 2]) == 0);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 3]) == 64);
}

TEST_CASE("cmd_run writes trace, metrics and heatmaps") {
  const auto dir = scratch("run");
  const auto cfg_path = write_file(dir / "wave.ini",
                                   "[scene]\nobject = wave\n[run]\nbudget = 17\ngrid_resolution = 21\n"
                                   "[output]\nsnapshot_every = 1\nemit_pgm = true\noutput_dir = " +
                                       (dir / "out").string() + "\n");
  REQUIRE(invoke({"run", cfg_path.string(), "--quiet"}) == 0);

  const auto trace = lines(dir / "out" / "trace.csv");
  REQUIRE(trace.size() == 18);
  CHECK(trace[0] == kTraceHeader);
  CHECK(trace[1].rfind("0,initial_random,", 0) == 0);
  CHECK(trace[4].rfind("3,weighted,", 0) == 0);

  const auto metrics = lines(dir / "out" / "metrics.csv");
  REQUIRE(metrics.size() == 2);
  CHECK(metrics[0] == kMetricsHeader);

  CHECK(count_files(dir / "out" / "heatmaps", ".csv") == 17 * 4);
  CHECK(count_files(dir / "out" / "heatmaps", ".pgm") == 17 * 4);
  const auto hm = lines(dir / "out" / "heatmaps" / "exploration_017.csv");
  REQUIRE(hm.size() == 21);
  for (const auto& row : hm) CHECK(std::count(row.begin(), row.end(), ',') == 20);
  const auto pgm = slurp(dir / "out" / "heatmaps" / "weight_001.pgm");
  CHECK(pgm.size() == std::string("P5\n21 21\n255\n").size() + 21 * 21);
  CHECK(fs::exists(dir / "out" / "manifest.txt"));
}

TEST_CASE("cli exit codes and --output-dir override") {
  const auto dir = scratch("exit");
  const auto bad = write_file(dir / "bad.ini", "[run]\nbandwith = 1\n");
  CHECK(invoke({"run", bad.string(), "--quiet"}) == 1);
  CHECK(invoke({"run", (dir / "missing.ini").string()}) == 1);
  CHECK(invoke({"frobnicate"}) == 1);

  const auto ok = write_file(dir / "ok.ini", "[run]\nbudget = 4\ngrid_resolution = 9\n");
  CHECK(invoke({"run", ok.string(), "--output-dir", (dir / "o").string(), "--quiet"}) == 0);
  CHECK(fs::exists(dir / "o" / "trace.csv"));

  // Budget beyond a 2x2 grid: the run stops early, exit 2, nothing left behind.
  const auto runtime = write_file(dir / "rt.ini", "[run]\nbudget = 6\ngrid_resolution = 2\nstrategy = grid\n");
  CHECK(invoke({"run", runtime.string(), "--output-dir", (dir / "partial").string(), "--quiet"}) == 2);
  CHECK_FALSE(fs::exists(dir / "partial"));
}

TEST_CASE("cmd_compare: row counts, saturation and determinism") {
  const auto dir = scratch("compare");
  auto cfg = parse_config("[run]\nseeds = 0-19\ngrid_resolution = 21\n");
  CommandOptions opts;
  opts.quiet = true;
  std::ostringstream log;

  opts.output_dir = dir / "a";
  (void)cmd_compare(cfg, opts, log);
  opts.output_dir = dir / "b";
  (void)cmd_compare(cfg, opts, log);
  const auto rows = lines(dir / "a" / "compare.csv");
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == kCompareHeader);
  CHECK(rows[21].rfind("mean,", 0) == 0);
  CHECK(slurp(dir / "a" / "compare.csv") == slurp(dir / "b" / "compare.csv"));
  CHECK(lines(dir / "a" / "compare_summary.csv").size() == 4);

  const auto full = parse_config("[scene]\narea_cm = 16x6\nplacement_x_cm = 0\nplacement_y_cm = 0\n[run]\nseeds = 0-4\n");
  const auto summary = compare_strategies(full);
  for (const auto& r : summary.rows) {
    CHECK(r.on_surface_weighted == 17);
    CHECK(r.on_surface_uncertainty == 17);
    CHECK(r.improvement == 0.0);
  }
}

TEST_CASE("cmd_sweep") {
  const auto dir = scratch("sweep");
  CommandOptions opts;
  opts.quiet = true;
  opts.output_dir = dir;
  std::ostringstream log;

  auto cfg = parse_config("[run]\nbudget = 8\n[sweep]\nkey = grid_resolution\nvalues = 24, 47, 93\n");
  (void)cmd_sweep(cfg, opts, log);
  auto rows = lines(dir / "sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("grid_resolution,24,,", 0) == 0);
  CHECK(rows[2].rfind("grid_resolution,47,default,", 0) == 0);

  cfg = parse_config("[run]\nbudget = 8\n[sweep]\nkey = lengthscale_sq\nvalues = 0.005, 0.017, 0.05\n");
  (void)cmd_sweep(cfg, opts, log);
  rows = lines(dir / "sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[2].rfind("lengthscale_sq,0.017,paper_default,", 0) == 0);
  CHECK(rows[1].rfind("lengthscale_sq,0.005,,", 0) == 0);

  const auto empty = write_file(dir / "empty.ini", "[sweep]\nkey = grid_resolution\nvalues =\n");
  CHECK(invoke({"sweep", empty.string(), "--quiet"}) == 1);
  const auto none = write_file(dir / "none.ini", "[run]\nbudget = 4\n");
  CHECK(invoke({"sweep", none.string(), "--quiet"}) == 1);
}
