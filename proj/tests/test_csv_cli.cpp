#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "hacdyn/csv.hpp"
#include "hacdyn/error.hpp"

using namespace hacdyn;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    csv::read_data_csv(in);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

// A fresh directory removed at scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hacdyn-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("numbers are written in shortest round-trip form") {
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(1.0) == "1");
  CHECK(csv::format_double(-2.5e-7) == "-2.5e-07");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(csv::format_double(third)) == third);
  CHECK(csv::format_double(std::nan("")) == "nan");
}

TEST_CASE("data files: columns, blank lines and CRLF") {
  std::istringstream in("x1,y,x2\r\n1,2,3\r\n\r\n4,5,6\r\n7,8,10\r\n");
  const Sample s = csv::read_data_csv(in);
  REQUIRE(s.size() == 3);
  REQUIRE(s.regressors() == 2);
  CHECK(s.y(1) == 5.0);
  CHECK(s.x(2, 0) == 7.0);
  CHECK(s.x(2, 1) == 10.0);
}

TEST_CASE("parse errors name the offending line") {
  CHECK(contains(parse_error("y,x\n1,2\n3,abc\n"), "line 3"));
  CHECK(contains(parse_error("y,x\n1,2\n3\n"), "line 3"));
  CHECK(contains(parse_error("y,x\n1,2\n3,inf\n"), "line 3"));
  CHECK(contains(parse_error("a,b\n1,2\n"), "'y'"));
  CHECK(contains(parse_error("y\n1\n"), "regressor"));
  CHECK(contains(parse_error(""), "header"));
  CHECK(code_of([] { csv::read_data_csv(fs::path("/nonexistent/file.csv")); }) == ErrorCode::IoError);
}

TEST_CASE("result files resume complete cells and drop a torn cell") {
  TempDir dir;
  const fs::path file = dir.path / "r.csv";
  {
    csv::ResultFile f(file, "k,v", {0}, false);
    f.append({"a,1", "a,2"});
    f.append({"b,1", "b,2"});
  }
  // Simulate a crash in the middle of cell c.
  {
    std::ofstream app(file, std::ios::app | std::ios::binary);
    app << "c,1\nc,";
  }
  {
    csv::ResultFile f(file, "k,v", {0}, true);
    CHECK(f.has("a"));
    CHECK(f.has("b"));
    CHECK(!f.has("c"));
  }
  CHECK(slurp(file) == "k,v\na,1\na,2\nb,1\nb,2\n");

  // Without resume the file starts over.
  { csv::ResultFile f(file, "k,v", {0}, false); }
  CHECK(slurp(file) == "k,v\n");

  // A different header means a different schema; nothing is kept.
  {
    csv::ResultFile f(file, "k,v", {0}, false);
    f.append({"a,1"});
  }
  {
    csv::ResultFile f(file, "k,w", {0}, true);
    CHECK(!f.has("a"));
  }
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("table output is reproducible byte for byte") {
  TempDir a, b;
  const std::vector<std::string> common{"table", "--rho", "0,0.9", "--T", "50", "--reps", "100", "--seed", "7",
                                        "--methods", "OLS,NW,DynReg"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--out", a.path.string()});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--out", b.path.string(), "--threads", "3"});
  REQUIRE(run_cli(args_a).code == cli::kOk);
  REQUIRE(run_cli(args_b).code == cli::kOk);
  for (const char* name : {"efficiency.csv", "size.csv"}) {
    const std::string ta = slurp(a.path / name);
    CHECK(!ta.empty());
    CHECK(ta == slurp(b.path / name));
  }
  CHECK(slurp(a.path / "efficiency.csv").rfind(csv::kEfficiencyHeader, 0) == 0);

  // Resuming a finished run recomputes nothing and leaves the files intact.
  const std::string before = slurp(a.path / "size.csv");
  auto resume = args_a;
  resume.push_back("--resume");
  REQUIRE(run_cli(resume).code == cli::kOk);
  CHECK(slurp(a.path / "size.csv") == before);
}

TEST_CASE("simulate then analyze reproduces the in-process estimate") {
  TempDir dir;
  const fs::path data = dir.path / "d.csv";
  REQUIRE(run_cli({"simulate", "--rho", "0.7", "--T", "200", "--seed", "3", "--rep", "4", "--out", data.string()}).code ==
          cli::kOk);

  DgpSpec spec;
  spec.rho = 0.7;
  spec.T = 200;
  const Sample s = simulate(spec, StreamKey{3, 4});
  const Sample back = csv::read_data_csv(data);
  CHECK(back.y == s.y);
  CHECK(back.x == s.x);

  const Run r = run_cli({"analyze", data.string(), "--method", "OLS", "--json"});
  REQUIRE(r.code == cli::kOk);
  const RegressionFit fit = ols_fit(s.x, s.y);
  CHECK(contains(r.out, csv::format_double(fit.beta_hat(0))));

  const Run nw = run_cli({"analyze", data.string(), "--method", "NW"});
  REQUIRE(nw.code == cli::kOk);
  CHECK(contains(nw.out, "bandwidth: h=5"));

  const Run dyn = run_cli({"analyze", data.string()});
  REQUIRE(dyn.code == cli::kOk);
  CHECK(contains(dyn.out, "lag order: p="));
  CHECK(contains(dyn.out, "reject at 0.05: "));
}

TEST_CASE("an exact relationship gives beta_hat = 1 and t = 0") {
  TempDir dir;
  const fs::path data = dir.path / "exact.csv";
  {
    std::ofstream f(data);
    f << "y,x\n";
    for (int t = 1; t <= 30; ++t) f << t * 0.37 - 2 << ',' << t * 0.37 - 2 << '\n';
  }
  for (const char* method : {"OLS", "NW", "NW-KV", "M-LLSW", "DynReg"}) {
    CAPTURE(method);
    const Run r = run_cli({"analyze", data.string(), "--method", method});
    REQUIRE(r.code == cli::kOk);
    CHECK(contains(r.out, "beta_hat: 1\n"));
    CHECK(contains(r.out, "t_stat (H0: beta=1): 0\n"));
    CHECK(contains(r.out, "reject at 0.05: no"));
  }
}

TEST_CASE("bandwidth is reported for the NW family") {
  TempDir dir;
  const fs::path data = dir.path / "d.csv";
  REQUIRE(run_cli({"simulate", "--T", "100", "--out", data.string()}).code == cli::kOk);
  CHECK(contains(run_cli({"analyze", data.string(), "--method", "NW"}).out, "bandwidth: h=5"));
  CHECK(contains(run_cli({"analyze", data.string(), "--method", "M-LLSW"}).out, "bandwidth: nu=8"));
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == cli::kUsageError);
  CHECK(run_cli({"table", "--no-such-flag"}).code == cli::kUsageError);
  CHECK(run_cli({"table", "--rho", "1.2", "--reps", "100"}).code == cli::kUsageError);
  CHECK(run_cli({"table", "--reps", "10"}).code == cli::kUsageError);
  CHECK(run_cli({"simulate", "--dgp", "garch"}).code == cli::kUsageError);

  const Run missing = run_cli({"analyze", "/nonexistent/data.csv"});
  CHECK(missing.code == cli::kRuntimeError);
  CHECK(contains(missing.err, "IoError"));

  TempDir dir;
  const fs::path bad = dir.path / "bad.csv";
  {
    std::ofstream f(bad);
    f << "y,x\n1,2\n3,oops\n";
  }
  const Run parse = run_cli({"analyze", bad.string()});
  CHECK(parse.code == cli::kRuntimeError);
  CHECK(contains(parse.err, "line 3"));
}

TEST_CASE("help lists the defaults") {
  const Run r = run_cli({"table", "--help"});
  CHECK(r.code == cli::kOk);
  CHECK(contains(r.out, "2000"));
  CHECK(contains(r.out, "12345"));
  CHECK(contains(r.out, "BIC"));
  CHECK(contains(run_cli({"--help"}).out, "analyze"));
}

TEST_CASE("config files fill in flags the command line did not set") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# small run\nrho = [0.5]\nT = 50\nreps = 100\nseed = 11\nmethods = \"OLS,DynReg\"\n";
  }
  const fs::path out1 = dir.path / "one";
  const fs::path out2 = dir.path / "two";
  REQUIRE(run_cli({"table", "--config", cfg.string(), "--out", out1.string()}).code == cli::kOk);
  REQUIRE(run_cli({"table", "--rho", "0.5", "--T", "50", "--reps", "100", "--seed", "11", "--methods", "OLS,DynReg",
               "--out", out2.string()})
              .code == cli::kOk);
  CHECK(slurp(out1 / "size.csv") == slurp(out2 / "size.csv"));

  // The command line wins over the file.
  const fs::path out3 = dir.path / "three";
  REQUIRE(run_cli({"table", "--config", cfg.string(), "--seed", "12", "--out", out3.string()}).code == cli::kOk);
  CHECK(slurp(out1 / "efficiency.csv") != slurp(out3 / "efficiency.csv"));

  {
    std::ofstream f(cfg);
    f << "bogus = 1\n";
  }
  CHECK(run_cli({"table", "--config", cfg.string(), "--out", out1.string()}).code == cli::kUsageError);
}

TEST_CASE("critval prints the simulated quantile") {
  const Run r = run_cli({"critval", "--draws", "50000", "--grid", "200", "--seed", "1"});
  REQUIRE(r.code == cli::kOk);
  const double c = std::stod(r.out);
  CHECK(c > 4.3);
  CHECK(c < 5.3);
  CHECK(run_cli({"critval", "--draws", "10"}).code == cli::kUsageError);
}

}  // TEST_SUITE
