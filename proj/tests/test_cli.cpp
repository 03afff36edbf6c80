#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "symlik/symbol_io.hpp"

#ifndef SYMLIK_CLI_PATH
#define SYMLIK_CLI_PATH "symlik"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "symlik_cli_test";
  fs::create_directories(dir);
  const fs::path out_file = dir / "stdout.txt";
  const std::string cmd =
      std::string(SYMLIK_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream f(out_file);
  std::ostringstream ss;
  ss << f.rdbuf();
  return {WEXITSTATUS(raw), ss.str()};
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "symlik_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p);
  f << content;
  return p;
}

std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / "symlik_cli_test" / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("aggregate then fit round trip") {
  // 3 classes * 5 rows of 1-d data.
  std::ostringstream csv;
  csv << "x,class\n";
  const double vals[] = {1.2, 3.4, 0.8, 2.2, 5.1, 2.0, 2.5, 1.1, 4.4,
                         3.3, 0.2, 1.9, 2.8, 3.6, 1.4};
  for (int i = 0; i < 15; ++i) csv << vals[i] << "," << (i / 5 + 1) << "\n";
  auto data = write_file("data.csv", csv.str());
  auto spec = write_file("spec.ini", "[symbol]\ntype = interval\nl = 1\nu = 5\n");

  auto agg = run_cli("aggregate --input " + data.string() + " --config " +
                     spec.string() + " --output " + tmp_path("syms.json"));
  CHECK(agg.exit_code == 0);
  auto symbols = symlik::read_symbols_file(tmp_path("syms.json"));
  CHECK(symbols.size() == 3);

  auto fit = run_cli("fit --input " + tmp_path("syms.json") +
                     " --family normal --theta0 2,1 --output " + tmp_path("fit.json"));
  CHECK(fit.exit_code == 0);
  CHECK(fit.out.find("theta_hat") != std::string::npos);

  // Round trip: parse + re-serialize is bit-identical.
  std::ifstream f(tmp_path("syms.json"));
  std::ostringstream orig;
  orig << f.rdbuf();
  CHECK(symlik::symbols_to_json(symbols) == orig.str());
}

TEST_CASE("classical-limit fit through the CLI") {
  std::ostringstream csv;
  csv << "x\n";
  const double vals[] = {9.8, 11.2, 10.4, 9.1, 10.9, 10.2, 9.5};
  double mean = 0;
  for (double v : vals) mean += v;
  mean /= 7;
  double ss = 0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  const double sigma_mle = std::sqrt(ss / 7);
  for (double v : vals) csv << v << "\n";
  auto data = write_file("classical.csv", csv.str());
  auto spec = write_file("bn.ini", "[symbol]\ntype = hist_random\nk = 1,2,3,4,5,6,7\n");
  auto agg = run_cli("aggregate --input " + data.string() + " --config " +
                     spec.string() + " --output " + tmp_path("bn.json"));
  REQUIRE(agg.exit_code == 0);
  auto fit = run_cli("fit --input " + tmp_path("bn.json") +
                     " --family normal --theta0 9,2 --tol 1e-13 --output " +
                     tmp_path("bn_fit.json"));
  REQUIRE(fit.exit_code == 0);
  const auto pos = fit.out.find("\"theta_hat\"");
  REQUIRE(pos != std::string::npos);
  double mu_hat, sigma_hat;
  std::sscanf(fit.out.c_str() + pos, "\"theta_hat\": [\n    %lf,\n    %lf", &mu_hat,
              &sigma_hat);
  CHECK(std::abs(mu_hat - mean) < 1e-5);
  CHECK(std::abs(sigma_hat - sigma_mle) < 1e-5);
}

TEST_CASE("tie error names the class and exits with the data code") {
  auto data = write_file("ties.csv",
                         "x,y,class\n"
                         "0,0,7\n0,1,7\n1,0.5,7\n"
                         "0,0,8\n1,2,8\n2,1,8\n");
  auto spec = write_file("box.ini", "[symbol]\ntype = rect_minmax\n");
  auto res = run_cli("aggregate --input " + data.string() + " --config " +
                     spec.string() + " --output " + tmp_path("ties.json"));
  CHECK(res.exit_code == 2);
  CHECK(res.out.find("class 7") != std::string::npos);
  CHECK(res.out.find("tie") != std::string::npos);
  // The valid class is still written.
  auto symbols = symlik::read_symbols_file(tmp_path("ties.json"));
  CHECK(symbols.size() == 1);
}

TEST_CASE("simulate refuses to run without a seed") {
  auto cfg = write_file("study.ini",
                        "[study]\ntype = rmse\nT = 10\n"
                        "[model]\nn = 21\nmu0 = 50\nsigma0 = 17\n");
  auto res = run_cli("simulate --config " + cfg.string() + " --output " +
                     tmp_path("rmse.csv"));
  CHECK(res.exit_code == 1);
  CHECK(res.out.find("seed") != std::string::npos);

  auto ok = run_cli("simulate --config " + cfg.string() + " --output " +
                    tmp_path("rmse.csv") + " --seed 5 --threads 2");
  CHECK(ok.exit_code == 0);
  // The manifest exists and echoes the config.
  std::ifstream mf(tmp_path("rmse.csv") + ".manifest.json");
  REQUIRE(mf.good());
  std::ostringstream ss;
  ss << mf.rdbuf();
  CHECK(ss.str().find("\"master_seed\": 5") != std::string::npos);
  CHECK(ss.str().find("rmse") != std::string::npos);
}

TEST_CASE("scale flag reduces the replicate count") {
  auto cfg = write_file("scaled.ini",
                        "[study]\ntype = experiment\nT = 40\n"
                        "[model]\nfamily = bivnormal\ntheta0 = 2,5,0.5,0.5,0.7\n"
                        "[data]\nm = 4\nn_c = 5\n"
                        "[symbol]\ntype = rect_minmax\n");
  auto res = run_cli("simulate --config " + cfg.string() + " --output " +
                     tmp_path("scaled.csv") + " --seed 9 --scale 0.1 --threads 2");
  REQUIRE(res.exit_code == 0);
  std::ifstream f(tmp_path("scaled.csv"));
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  CHECK(row.find(",4,5,4,") != std::string::npos);  // m=4, n_c=5, T=4
}

TEST_CASE("expensive cells are gated") {
  auto cfg = write_file("big.ini",
                        "[study]\ntype = experiment\nT = 1\n"
                        "[model]\nfamily = bivnormal\ntheta0 = 2,5,0.5,0.5,0.7\n"
                        "[data]\nm = 2\nn_c = 1000\n"
                        "[symbol]\ntype = rect_minmax\n");
  auto res = run_cli("simulate --config " + cfg.string() + " --output " +
                     tmp_path("big.csv") + " --seed 9");
  CHECK(res.exit_code == 1);
  CHECK(res.out.find("--expensive") != std::string::npos);
}

TEST_CASE("bad theta0 on a zero-probability symbol is a numerical failure") {
  auto syms = write_file("unif.json",
                         R"([{"type":"interval","n":8,"s_l":0.5,"s_u":2.5,"l":1,"u":8}])");
  auto res = run_cli("fit --input " + syms.string() +
                     " --family uniform --theta0 0,1");
  CHECK(res.exit_code == 3);
  CHECK(res.out.find("zero probability") != std::string::npos);
}

TEST_CASE("meta subcommand prints the requested estimators") {
  auto res = run_cli("meta --q 30,40,50,60,70 --n 21 --methods luo,wan,shi");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("luo") != std::string::npos);
  CHECK(res.out.find("13.242714") != std::string::npos);  // wan
  CHECK(res.out.find("12.196046") != std::string::npos);  // shi
  // Symmetric quantiles: luo prints the median.
  auto sym = run_cli("meta --q 1,2,3,4,5 --n 9 --methods luo");
  CHECK(sym.out.find("3") != std::string::npos);
  auto bad = run_cli("meta --q 5,4,3,2,1 --n 9 --methods luo");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("fit --family normal --theta0 0,1").exit_code == 1);  // missing input
  CHECK(run_cli("nonsense").exit_code != 0);
}

TEST_SUITE_END();
