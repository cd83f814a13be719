#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "weightcalc/koethe.hpp"
#include "weightcalc/weights.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("WEIGHTCALC_BIN");
  REQUIRE(p != nullptr);
  return std::string(p);
}

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / ("weightcalc_test_" + stem);
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analyze log^2: condition (4) holds, (BMM) fails") {
  const fs::path out = temp_file("log2.json");
  const int rc = run_cli("analyze --family log^2 --suite cond4,bmm --format json --out " +
                         out.string());
  REQUIRE(rc == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["results"]["cond4"]["status"] == "HoldsWithWitness");
  REQUIRE(rep["results"]["cond4"]["witness"]["H"].get<double>() <=
          std::exp(1.0) * std::exp(1.0));
  REQUIRE(rep["results"]["bmm"]["status"] == "FailsWithCounterexample");
  fs::remove(out);
}

TEST_CASE("analyze accepts the compact log2 spelling") {
  const fs::path out = temp_file("log2b.json");
  REQUIRE(run_cli("analyze --family log2 --suite cond4 --format json --out " + out.string()) ==
          0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["subject"]["family"] == "log");
  fs::remove(out);
}

TEST_CASE("analyze omega0 nuclearity: not nuclear") {
  const fs::path out = temp_file("omega0.json");
  const int rc = run_cli(
      "analyze --family omega0 --suite nuclearity --kmax 100000 --format json --out " +
      out.string());
  REQUIRE(rc == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["results"]["nuclearity"]["status"] == "NotNuclearEvidence");
  fs::remove(out);
}

TEST_CASE("analyze sequence subject") {
  const fs::path out = temp_file("gevreyseq.json");
  const int rc = run_cli(
      "analyze --sequence gevreyseq:2 --suite axioms --format json --out " + out.string());
  REQUIRE(rc == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["results"]["m1"]["status"] == "HoldsWithWitness");
  REQUIRE(rep["results"]["m2"]["status"] == "HoldsWithWitness");
  REQUIRE(rep["results"]["m2prime"]["status"] == "HoldsWithWitness");
  REQUIRE(rep["results"]["lower_root_bound"]["status"] == "HoldsWithWitness");
  REQUIRE(rep["results"]["condition_1_1"]["status"] == "HoldsWithWitness");
  fs::remove(out);
}

TEST_CASE("analyze reads sequence files") {
  const fs::path seq_file = temp_file("seq.json");
  {
    std::ofstream f(seq_file);
    f << R"({"label":"custom","logM":[0.0,0.0,0.7,1.8,3.2,4.8,6.6,8.6,10.8]})";
  }
  const fs::path out = temp_file("seqrep.json");
  REQUIRE(run_cli("analyze --sequence file:" + seq_file.string() +
                  " --suite axioms --format json --out " + out.string()) == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["subject"]["label"] == "custom");
  fs::remove(seq_file);
  fs::remove(out);
}

TEST_CASE("input errors exit with code 2") {
  REQUIRE(run_cli("analyze --family nosuch --suite bmm") == 2);
  REQUIRE(run_cli("analyze --family gevrey:2 --suite nosuite") == 2);
  REQUIRE(run_cli("analyze --family gevrey:2 --sequence gevreyseq:2 --suite bmm") == 2);
  REQUIRE(run_cli("analyze --suite bmm") == 2);
  REQUIRE(run_cli("analyze --family gevrey:2 --suite bmm --format csv") == 2);
  REQUIRE(run_cli("analyze --family gevrey:2 --suite bmm --format json --out "
                  "/nonexistent_dir_zzz/x.json") == 2);

  const fs::path broken = temp_file("broken.json");
  {
    std::ofstream f(broken);
    f << "{not json";
  }
  REQUIRE(run_cli("analyze --sequence file:" + broken.string() + " --suite axioms") == 2);
  fs::remove(broken);
}

TEST_CASE("export omega values for omega0") {
  const fs::path out = temp_file("omega0.csv");
  const double e2 = std::exp(2.0);
  char args[256];
  std::snprintf(args, sizeof(args),
                "export --family omega0 --what omega --tmin 1 --tmax %.17g --grid-n 3 --out %s",
                e2, out.string().c_str());
  REQUIRE(run_cli(args) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "t,omega");
  std::getline(in, line);
  REQUIRE(line == "1,0");
  std::getline(in, line);  // t = e, omega = 1
  REQUIRE(std::stod(line.substr(line.find(',') + 1)) == Catch::Approx(1.0).margin(1e-12));
  std::getline(in, line);
  REQUIRE(std::stod(line.substr(line.find(',') + 1)) == Catch::Approx(2.0).margin(1e-12));
  fs::remove(out);
}

TEST_CASE("export phistar produces a convex nondecreasing column") {
  const fs::path out = temp_file("phistar.csv");
  REQUIRE(run_cli("export --family gevrey:2 --what phistar --smax 16 --slope-n 128 --out " +
                  out.string()) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "s,phistar");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    vals.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  REQUIRE(vals.size() == 128);
  for (std::size_t i = 1; i < vals.size(); ++i) {
    REQUIRE(vals[i] >= vals[i - 1] - 1e-9);
  }
  fs::remove(out);
}

TEST_CASE("export summand matches the matrix exponents") {
  const fs::path out = temp_file("summand.csv");
  REQUIRE(run_cli("export --family log^2 --what summand:1,4 --kmax 4096 --out " +
                  out.string()) == 0);
  const weightcalc::KoetheMatrix mat =
      weightcalc::KoetheMatrix::from_weight(weightcalc::WeightFunction::log_power(2.0), 4,
                                            4096);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "k,exponent,partial_sum");
  int checked = 0;
  while (std::getline(in, line)) {
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    const std::size_t k = std::stoul(line.substr(0, c1));
    const double e = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    REQUIRE(e == Catch::Approx(mat.exponent(1, k) - mat.exponent(4, k)).margin(1e-12));
    ++checked;
  }
  REQUIRE(checked > 1000);
  fs::remove(out);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path out1 = temp_file("det1.json");
  const fs::path out2 = temp_file("det2.json");
  const std::string args =
      "analyze --family log^2 --suite cond4,bmm,conjugate --format json --out ";
  REQUIRE(run_cli(args + out1.string()) == 0);
  REQUIRE(run_cli(args + out2.string()) == 0);
  REQUIRE(slurp(out1) == slurp(out2));
  REQUIRE_FALSE(slurp(out1).empty());
  fs::remove(out1);
  fs::remove(out2);
}
