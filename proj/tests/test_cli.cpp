#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "traindyn/cli.hpp"
#include "traindyn/report.hpp"
#include "traindyn/synthgen.hpp"

using namespace traindyn;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "traindyn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("traindyn_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("synth writes a trace that analyze accepts") {
  TempDir dir;
  const auto trace = dir / "t.csv";
  const auto synth = run({"synth", "convergent", "--length", "50", "--seed", "7", "-o", trace});
  CHECK(synth.code == 0);
  CHECK(synth.out.find("stable_convergent") != std::string::npos);
  CHECK(fs::exists(trace));

  const auto report = dir / "report.json";
  const auto analyzed = run({"analyze", trace, "--h-opt", "0.7", "--sigma-h", "0.1", "--w-h", "0.5",
                             "--window", "5", "-o", report});
  CHECK(analyzed.code == 0);
  CHECK(analyzed.out.find("Stable Convergent") != std::string::npos);
  CHECK(analyzed.out.find("r(H_z, M_z)") != std::string::npos);
  CHECK(analyzed.out.find("r(Psi, acc)") != std::string::npos);
  CHECK(analyzed.out.find("\033[") == std::string::npos);

  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc["config"]["h_opt"] == 0.7);
  CHECK(doc["config"]["sigma_h"] == 0.1);
  CHECK(doc["config"]["w_h"] == 0.5);
  CHECK(doc["config"]["rolling_window"] == 5);
  CHECK(doc["taxonomy"]["state"] == "stable_convergent");
}

TEST_CASE("analyze reports are byte-identical across runs") {
  TempDir dir;
  const auto trace = dir / "t.jsonl";
  REQUIRE(run({"synth", "rigid", "--seed", "3", "--format", "jsonl", "-o", trace}).code == 0);
  REQUIRE(run({"analyze", trace, "--phase-mode", "causal", "-o", dir / "a.json"}).code == 0);
  REQUIRE(run({"analyze", trace, "--phase-mode", "causal", "-o", dir / "b.json"}).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(doc["config"]["phase_mode"] == "causal");
}

TEST_CASE("argument and runtime errors map to exit codes") {
  TempDir dir;
  const auto missing = run({"analyze", dir / "absent.csv"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("absent.csv") != std::string::npos);

  const auto trace = dir / "t.csv";
  REQUIRE(run({"synth", "partial", "--seed", "1", "-o", trace}).code == 0);
  const auto weight = run({"analyze", trace, "--w-h", "1.2"});
  CHECK(weight.code == 2);
  CHECK(weight.err.find("[0,1]") != std::string::npos);

  const auto sigma = run({"analyze", trace, "--sigma-h", "0"});
  CHECK(sigma.code == 2);

  const auto scenario = run({"synth", "chaotic", "--seed", "1", "-o", dir / "x.csv"});
  CHECK(scenario.code == 2);
  for (const char* name : {"convergent", "rigid", "partial", "metastable"})
    CHECK(scenario.err.find(name) != std::string::npos);

  const auto seedless = run({"synth", "rigid", "-o", dir / "x.csv"});
  CHECK(seedless.code == 2);
  CHECK(seedless.err.find("seed") != std::string::npos);

  CHECK(run({"synth", "rigid", "--seed", "1", "--length", "30", "-o", dir / "x.csv"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"analyze", trace, "--phase-mode", "sideways"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  std::ofstream(dir / "bad.csv") << "epoch,a,b\n1,0.1\n";
  const auto bad = run({"analyze", dir / "bad.csv"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("sensitivity on a stored report uses the default grids") {
  TempDir dir;
  const auto trace = dir / "t.csv";
  const auto report = dir / "r.json";
  REQUIRE(run({"synth", "metastable", "--seed", "5", "-o", trace}).code == 0);
  REQUIRE(run({"analyze", trace, "-o", report}).code == 0);
  const auto grid = dir / "grid.json";
  const auto res = run({"sensitivity", report, "-o", grid});
  CHECK(res.code == 0);
  CHECK(res.out.find("Mean H_eff") != std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(grid));
  CHECK(doc["heff_grid"].size() == 16);
  CHECK(doc["weight_grid"][0]["cells"].size() == 3);
  CHECK(doc["threshold_grid"][0]["cells"].size() == 3);

  const auto single = run({"sensitivity", report, "--h-opt-grid", "0.7", "--sigma-grid", "0.1", "-o", grid});
  CHECK(single.code == 0);
  const auto one = nlohmann::json::parse(slurp(grid));
  REQUIRE(one["heff_grid"].size() == 1);
  const auto rep = load_report(report);
  CHECK(std::abs(one["heff_grid"][0]["mean_heff"].get<double>() - rep.summary.mean_heff) < 1e-12);
}

TEST_CASE("sensitivity comparison and missing accuracy") {
  TempDir dir;
  std::vector<std::vector<double>> sig;
  for (std::size_t l = 0; l < 4; ++l) {
    auto x = synthgen::gen_fgn(0.7, 64, 40 + l);
    x.resize(48);
    sig.push_back(x);
  }
  const auto no_acc = dir / "noacc.csv";
  save_trace(no_acc, testutil::make_trace(sig), TraceFormat::csv);
  const auto rigid = dir / "rigid.csv";
  REQUIRE(run({"synth", "rigid", "--seed", "2", "-o", rigid}).code == 0);

  const auto grid = dir / "grid.json";
  const auto res = run({"sensitivity", no_acc, "--compare", rigid, "-o", grid});
  CHECK(res.code == 0);
  CHECK(res.out.find("Sep.") != std::string::npos);
  CHECK(res.out.find("n/a") != std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(grid));
  CHECK(doc["heff_grid"][0].contains("separated"));
  const auto& w = doc["weight_grid"][0];
  CHECK(w["sign_stable"].is_null());
  for (const auto& c : w["cells"]) CHECK(c["r_psi_acc"].is_null());
  CHECK(doc["threshold_grid"][0]["plateau_epoch"].is_null());
}

TEST_CASE("classify and validate subcommands") {
  const auto cl = run({"classify", "--heff-late", "0.057", "--trend", "flat_nonconverging", "--r-hz-mz", "0.864"});
  CHECK(cl.code == 0);
  CHECK(cl.out.find("rigidly_synchronised") != std::string::npos);
  CHECK(run({"classify", "--heff-late", "0.5"}).code == 2);
  CHECK(run({"classify", "--heff-late", "0.5", "--trend", "wobbly", "--r-hz-mz", "0"}).code == 2);

  TempDir dir;
  std::ofstream(dir / "short.csv") << "epoch,a,b\n1,0.1,0.2\n2,0.3,0.1\n3,0.2,0.5\n";
  const auto v = run({"validate", dir / "short.csv"});
  CHECK(v.code == 0);
  CHECK(v.out.find("series too short") != std::string::npos);
  CHECK(v.out.find("accuracy-dependent diagnostics disabled") != std::string::npos);
}
