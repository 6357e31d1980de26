// End-to-end checks of the installed command-line tool. Each test writes
// fixture files into a scratch directory and drives the real binary.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#ifndef BINMAT_CLI_PATH
#define BINMAT_CLI_PATH "binmat"
#endif

namespace {

namespace fs = std::filesystem;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("binmat_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
  }
};

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const Scratch& scratch, const std::string& args) {
  const fs::path out_file = scratch.dir / "stdout.txt";
  const std::string cmd = std::string(BINMAT_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("feasibility command distinguishes outcomes by exit code") {
  Scratch scratch;
  const auto good = scratch.write("good.txt", "3 3\n2 1 1\n2 1 1\n");
  const auto bad = scratch.write("bad.txt", "4 3\n3 1 1 1\n3 3 0\n");
  const auto broken = scratch.write("broken.txt", "3 oops\n");

  auto r = run(scratch, "feasible --margins " + good.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("FEASIBLE") != std::string::npos);

  r = run(scratch, "feasible --margins " + bad.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("INFEASIBLE") != std::string::npos);

  r = run(scratch, "feasible --margins " + broken.string());
  CHECK(r.exit_code == 2);

  r = run(scratch, "feasible --margins " + scratch.dir.string() + "/missing.txt");
  CHECK(r.exit_code == 2);
}

TEST_CASE("sampling output is reproducible and thread-count independent") {
  Scratch scratch;
  const auto marg = scratch.write("m.txt", "4 4\n2 2 1 1\n2 2 1 1\n");
  auto r = run(scratch, "sample --margins " + marg.string() +
                            " --heuristic cgm --n 40 --seed 9 --out " +
                            (scratch.dir / "a").string());
  REQUIRE(r.exit_code == 0);
  r = run(scratch, "sample --margins " + marg.string() +
                       " --heuristic cgm --n 40 --seed 9 --jobs 4 --out " +
                       (scratch.dir / "b").string());
  REQUIRE(r.exit_code == 0);
  const std::string wa = slurp(scratch.dir / "a" / "weights.txt");
  const std::string wb = slurp(scratch.dir / "b" / "weights.txt");
  CHECK(wa != "");
  // Identical apart from the recorded job count in the header.
  auto strip_jobs = [](std::string s) {
    const auto pos = s.find("jobs=");
    if (pos != std::string::npos) s.erase(pos, s.find('\n', pos) - pos);
    return s;
  };
  CHECK(strip_jobs(wa) == strip_jobs(wb));
  CHECK(slurp(scratch.dir / "a" / "matrices.txt").find("# draw 39") !=
        std::string::npos);
}

TEST_CASE("count and diagnose emit machine-readable fields") {
  Scratch scratch;
  const auto marg = scratch.write("m.txt", "3 3\n2 1 1\n2 1 1\n");
  auto r = run(scratch, "count --margins " + marg.string() +
                            " --heuristic oneil --n 2000 --seed 3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("delta_hat=") != std::string::npos);
  CHECK(r.output.find("cv2_hat=") != std::string::npos);
  CHECK(r.output.find("mean=5.00000e0") != std::string::npos);
  r = run(scratch, "diagnose --margins " + marg.string() +
                       " --heuristic binomial --n 500 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("log_mean=") != std::string::npos);
}

TEST_CASE("zero-diagonal sampling produces deranged matrices") {
  Scratch scratch;
  const auto marg = scratch.write("m.txt", "3 3\n1 1 1\n1 1 1\n");
  auto r = run(scratch, "sample --margins " + marg.string() +
                            " --zero-diagonal --n 20 --seed 4 --out " +
                            (scratch.dir / "z").string());
  REQUIRE(r.exit_code == 0);
  const std::string matrices = slurp(scratch.dir / "z" / "matrices.txt");
  CHECK(matrices.find("heuristic=cgm_sz") != std::string::npos);
  std::istringstream lines(matrices);
  std::string line;
  int row_in_block = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') {
      row_in_block = 0;
      continue;
    }
    // Row k of a block must have a zero in position 2k (characters "x y z").
    CHECK(line[2 * row_in_block] == '0');
    ++row_in_block;
  }
}

TEST_CASE("exact oracles are exposed") {
  Scratch scratch;
  const auto marg = scratch.write("m.txt", "3 3\n2 1 1\n2 1 1\n");
  auto r = run(scratch, "exact-count --margins " + marg.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("exact_count=5") != std::string::npos);

  r = run(scratch, "enumerate --margins " + marg.string() + " --out " +
                       (scratch.dir / "omega").string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("count=5") != std::string::npos);

  r = run(scratch, "tv-distance --margins " + marg.string() + " --heuristic oneil");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("tv_distance=") != std::string::npos);
}

TEST_CASE("uniformity checks run end to end") {
  Scratch scratch;
  const auto reg = scratch.write("reg.txt",
                                 "6 6\n2 2 2 2 2 2\n2 2 2 2 2 2\n");
  auto r = run(scratch, "check-uniformity --margins " + reg.string() +
                            " --mode rowgen --L 3 --n 5 --seed 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("delta_max=") != std::string::npos);

  r = run(scratch, "check-uniformity --margins " + reg.string() +
                       " --mode block --n 50 --seed 2 --heuristic binomial");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("delta_star=") != std::string::npos);

  // Greedy construction fails on these margins and reports it via exit 1.
  const auto fail = scratch.write("fail.txt", "3 2\n2 1 1\n2 2\n");
  r = run(scratch, "check-uniformity --margins " + fail.string() +
                       " --mode greedy --n 10 --seed 2");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("construction-failed") != std::string::npos);
}
