// CLI contract checks, run against the built binary (path in argv[1]):
// exit 0 on success, 1 on domain errors, 2 on usage or config errors.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;

int run(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

void expect_exit(const std::string& what, const std::string& cmd, int expected) {
  int got = run(cmd);
  if (got == expected) {
    std::printf("[ ok ] %-38s exit %d\n", what.c_str(), got);
  } else {
    std::printf("[FAIL] %-38s exit %d, expected %d\n", what.c_str(), got, expected);
    ++failures;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-weylband>\n", argv[0]);
    return 2;
  }
  std::string bin = argv[1];
  fs::path work = fs::temp_directory_path() / "weylband_cli_test";
  fs::remove_all(work);
  fs::create_directories(work);

  {
    std::ofstream cfg(work / "ok.toml");
    cfg << "[band]\ne2 = 0.9\ne4 = 1.1\nf3 = 0.2\nf1 = 0.4\neps = \"h^0.5\"\n"
        << "[numerics]\nh_list = [0.22]\ngrid_n = 128\nadmissible_grid_n = 64\n"
        << "classical_a_grid = 5\nquad_tol = 1e-9\node_tol = 1e-9\n"
        << "[output]\ndir = \"" << (work / "out").string() << "\"\n";
  }
  {
    std::ofstream cfg(work / "tangent.toml");
    cfg << "[band]\ne2 = 0.9\ne4 = 1.1\nf3 = 0.2\nf1 = 0.5\neps = \"h^0.5\"\n"
        << "[numerics]\nh_list = [0.22]\ngrid_n = 128\nadmissible_grid_n = 64\n"
        << "[output]\ndir = \"" << (work / "out_t").string() << "\"\n";
  }

  expect_exit("--help", bin + " --help", 0);
  for (const char* sub :
       {"classical", "volume", "spectrum", "count", "verify", "dampedwave", "sweep"})
    expect_exit(std::string(sub) + " --help", bin + " " + sub + " --help", 0);
  expect_exit("unknown subcommand", bin + " explode", 2);
  expect_exit("unknown flag", bin + " verify --frobnicate", 2);
  expect_exit("missing config file", bin + " verify --config /does/not/exist.toml", 2);
  expect_exit("no subcommand", bin, 2);
  expect_exit("sweep with one h", bin + " sweep --config " + (work / "ok.toml").string(), 2);
  expect_exit("tangent level gate",
              bin + " count --config " + (work / "tangent.toml").string(), 1);
  expect_exit("count on the tiny scenario",
              bin + " count --config " + (work / "ok.toml").string(), 0);
  expect_exit("volume subcommand",
              bin + " volume --config " + (work / "ok.toml").string(), 0);

  if (!fs::exists(work / "out" / "report.json")) {
    std::printf("[FAIL] report.json missing after count\n");
    ++failures;
  } else {
    std::printf("[ ok ] report.json written\n");
  }

  if (failures) std::printf("%d CLI check(s) failed\n", failures);
  return failures ? 1 : 0;
}
