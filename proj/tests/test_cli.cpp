#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ZYGLAB_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), got);
  const int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("list shows every experiment with its section tag") {
  auto res = run("list");
  CHECK(res.status == 0);
  CHECK(res.output.find("lower-bound") != std::string::npos);
  CHECK(res.output.find("calderon") != std::string::npos);
  // lower-bound maps to section 5, calderon to the reproducing-formula part.
  std::istringstream is(res.output);
  std::string line;
  int count = 0;
  bool lb5 = false;
  while (std::getline(is, line)) {
    if (line.find("lower-bound") != std::string::npos && line.find("5") != std::string::npos)
      lb5 = true;
    if (!line.empty() && line.find("experiment") == std::string::npos) ++count;
  }
  CHECK(lb5);
  CHECK(count >= 11);
}

TEST_CASE("unknown experiments exit with usage status 2") {
  CHECK(run("no-such-experiment").status == 2);
}

TEST_CASE("identical config and seed produce byte-identical reports") {
  fs::path dir1 = fs::temp_directory_path() / "zyglab_det_1";
  fs::path dir2 = fs::temp_directory_path() / "zyglab_det_2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  auto r1 = run("bmo-norm --small --seed 5 --out " + dir1.string());
  auto r2 = run("bmo-norm --small --seed 5 --out " + dir2.string());
  CHECK(r1.status == 0);
  CHECK(r2.status == 0);
  const std::string a = slurp(dir1 / "report.json");
  const std::string b = slurp(dir2 / "report.json");
  REQUIRE(!a.empty());
  CHECK(a == b);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("an intentionally impossible tolerance fails with status 1 and names the check") {
  fs::path cfg = fs::temp_directory_path() / "zyglab_bad.ini";
  {
    std::ofstream os(cfg);
    os << "mean_tol = -1\n";  // negative tolerance cannot be met
  }
  auto res = run("bmo-norm --small --config " + cfg.string());
  CHECK(res.status == 1);
  CHECK(res.output.find("mean_error") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("config file sections are folded into dotted keys") {
  fs::path cfg = fs::temp_directory_path() / "zyglab_cfg.ini";
  {
    std::ofstream os(cfg);
    os << "# comment\n[grid]\nn = 128\n";
  }
  auto res = run("bmo-norm --config " + cfg.string());
  CHECK(res.status == 0);
  CHECK(res.output.find("128") != std::string::npos);
  fs::remove(cfg);
}
