#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ebmeans/csv.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* bin = std::getenv("EBMEANS_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "EBMEANS_BIN must point at the CLI binary");
  return bin;
}

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = binary() + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ebmeans_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("estimate on a single row returns the observation") {
  const fs::path dir = fresh_dir("estimate1");
  write_file(dir / "obs.csv", "index,x1,x2\n0,1.25,-0.5\n");
  const int code = run("estimate --input " + (dir / "obs.csv").string() +
                       " --sigma1 1 --sigma2 1 --out " + dir.string());
  CHECK(code == 0);
  const auto table = ebmeans::csv::read_file((dir / "estimates.csv").string());
  REQUIRE(table.rows.size() == 1);
  CHECK(table.header ==
        std::vector<std::string>{"index", "x1", "x2", "t1_hat", "t2_hat",
                                 "estimate"});
  CHECK(ebmeans::csv::parse_double(table.rows[0][5], "estimate") == 1.25);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("sure on a single row prints the exact reduction") {
  const fs::path dir = fresh_dir("sure1");
  write_file(dir / "obs.csv", "index,x1,x2\n0,0.75,2.0\n");
  const int code = run("sure --input " + (dir / "obs.csv").string() +
                           " --support " + (dir / "obs.csv").string() +
                           " --rho 0 --sigma1 1.5 --sigma2 1 --out " +
                           dir.string(),
                       (dir / "stdout.txt").string());
  CHECK(code == 0);
  // support at the observation: the value is -sigma1^2
  const double printed =
      ebmeans::csv::parse_double(
          slurp(dir / "stdout.txt").substr(0, slurp(dir / "stdout.txt").find('\n')),
          "stdout");
  CHECK(printed == doctest::Approx(-2.25).epsilon(1e-12));
}

TEST_CASE("usage and data error exit codes") {
  const fs::path dir = fresh_dir("errors");
  CHECK(run("estimate --no-such-flag 2>/dev/null") == 1);
  CHECK(run("no-such-subcommand 2>/dev/null") == 1);
  CHECK(run("estimate --input " + (dir / "missing.csv").string() +
            " --out " + dir.string() + " 2>/dev/null") == 2);
  write_file(dir / "bad.csv", "index,x1,x2\n0,abc,1\n");
  CHECK(run("estimate --input " + (dir / "bad.csv").string() + " --out " +
            dir.string() + " 2>/dev/null") == 2);
  CHECK(run("--help >/dev/null") == 0);
}

TEST_CASE("reruns reproduce outputs byte for byte") {
  const fs::path dir = fresh_dir("replay");
  std::ostringstream obs;
  obs << "index,x1,x2\n";
  for (int i = 0; i < 25; ++i) {
    obs << i << "," << 0.37 * i - 3.1 << "," << (i % 5) - 2 << "\n";
  }
  write_file(dir / "obs.csv", obs.str());
  const fs::path out1 = dir / "run1";
  const fs::path out2 = dir / "run2";
  const std::string common = "estimate --input " + (dir / "obs.csv").string() +
                             " --sigma1 1 --sigma2 1 --k 6 --out ";
  CHECK(run(common + out1.string()) == 0);
  CHECK(run(common + out2.string()) == 0);
  CHECK(slurp(out1 / "estimates.csv") == slurp(out2 / "estimates.csv"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
  CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));
  // LF line endings only
  CHECK(slurp(out1 / "estimates.csv").find('\r') == std::string::npos);
}

TEST_CASE("estimate-1d works without an x2 column") {
  const fs::path dir = fresh_dir("estimate1d");
  write_file(dir / "obs.csv", "index,x1\n0,2.0\n1,2.0\n2,2.0\n");
  CHECK(run("estimate-1d --input " + (dir / "obs.csv").string() +
            " --sigma1 1 --k 5 --out " + dir.string()) == 0);
  const auto table = ebmeans::csv::read_file((dir / "estimates.csv").string());
  CHECK(table.header ==
        std::vector<std::string>{"index", "x1", "t1_hat", "estimate"});
  for (const auto& row : table.rows) {
    CHECK(ebmeans::csv::parse_double(row[3], "estimate") ==
          doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("oracle subcommand") {
  const fs::path dir = fresh_dir("oracle");
  write_file(dir / "obs.csv", "index,x1,x2\n0,0.0,0.0\n1,0.5,1.0\n");
  write_file(dir / "means.csv", "index,theta1,theta2\n0,3.0,0.0\n1,-3.0,0.0\n");
  CHECK(run("oracle --input " + (dir / "obs.csv").string() + " --means " +
            (dir / "means.csv").string() + " --rule integrative --out " +
            dir.string()) == 0);
  const auto table = ebmeans::csv::read_file((dir / "estimates.csv").string());
  REQUIRE(table.rows.size() == 2);
  CHECK(std::abs(ebmeans::csv::parse_double(table.rows[0][1], "estimate")) <=
        1e-12);
}

TEST_CASE("simulate writes tidy and summary files") {
  const fs::path dir = fresh_dir("simulate");
  CHECK(run("simulate --n 30 --theta1 normal01 --theta2 none --reps 3 "
            "--methods mle,oracle_univariate --mean-seed 4 --rep-seed 5 "
            "--out " +
            dir.string() + " >/dev/null") == 0);
  const auto losses = ebmeans::csv::read_file((dir / "losses.csv").string());
  CHECK(losses.header ==
        std::vector<std::string>{"scenario", "method", "replication", "loss"});
  CHECK(losses.rows.size() == 6);
  const auto summary = ebmeans::csv::read_file((dir / "summary.csv").string());
  CHECK(summary.header ==
        std::vector<std::string>{"method", "mean_loss", "se"});
  CHECK(summary.rows.size() == 2);
  CHECK(summary.rows[0][0] == "mle");  // sorted by method name
}

TEST_CASE("simulate table1 single cell") {
  const fs::path dir = fresh_dir("table1");
  CHECK(run("simulate table1 --mu 7 --nonzero 5 --reps 1 --k 4 --out " +
                dir.string(),
            (dir / "stdout.txt").string()) == 0);
  const auto table = ebmeans::csv::read_file((dir / "table1.csv").string());
  CHECK(table.header == std::vector<std::string>{"nonzero", "mu",
                                                 "avg_total_squared_error"});
  REQUIRE(table.rows.size() == 1);
  CHECK(slurp(dir / "stdout.txt").find("nonzero=5") != std::string::npos);
}

TEST_CASE("classify round trip") {
  const fs::path dir = fresh_dir("classify");
  std::ostringstream matrix;
  matrix << "gene_id,s0,s1,s2,s3,s4,s5\n";
  matrix << "gA,0.1,0.5,0.2,3.0,3.5,2.9\n";
  matrix << "gB,1.0,1.2,0.8,1.1,0.9,1.05\n";
  write_file(dir / "train.csv", matrix.str());
  write_file(dir / "labels.csv",
             "sample_id,label\ns0,0\ns1,0\ns2,0\ns3,1\ns4,1\ns5,1\n");
  write_file(dir / "aux.csv", "gene_id,z\ngA,8.0\ngB,0.1\n");

  CHECK(run("classify train --train " + (dir / "train.csv").string() +
            " --labels " + (dir / "labels.csv").string() + " --aux " +
            (dir / "aux.csv").string() + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "model.json"));

  CHECK(run("classify predict --model " + (dir / "model.json").string() +
            " --test " + (dir / "train.csv").string() + " --truth " +
            (dir / "labels.csv").string() + " --out " + dir.string()) == 0);
  const auto preds =
      ebmeans::csv::read_file((dir / "predictions.csv").string());
  CHECK(preds.header == std::vector<std::string>{"sample_id", "label"});
  REQUIRE(preds.rows.size() == 6);
  // training data is linearly separable here; expect a perfect fit
  const std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"misclassification_rate\": 0.0") != std::string::npos);
}
