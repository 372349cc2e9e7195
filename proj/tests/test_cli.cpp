#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nsdyn/cli/checks.hpp"
#include "nsdyn/cli/commands.hpp"
#include "nsdyn/cli/registry.hpp"

using namespace nsdyn;
using namespace nsdyn::cli;

namespace fs = std::filesystem;

namespace {

const char* kSmall = R"([system]
kind = piecewise
dim = 2
h = "x1"
xplus = [ "x2-a", "-1" ]   # comment
xminus = [ "x2", "1" ]

[parameters]
a = 1

[experiment]
range = x2=-1:2
)";

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text, "f.cfg");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nsdyn_test_" + name);
  fs::remove_all(d);
  return d;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const SystemConfig cfg = parse_config(kSmall);
  CHECK(cfg.kind == "piecewise");
  CHECK(cfg.dim == 2);
  CHECK(cfg.xplus == std::vector<std::string>{"x2-a", "-1"});
  CHECK(cfg.params.at("a") == 1.0);
  CHECK(cfg.get("range") == "x2=-1:2");
  CHECK(cfg.get("missing", "fb") == "fb");
  const PiecewiseSystem sys = build_piecewise(cfg);
  CHECK(sys.plus(Vec{0.0, 3.0}) == Vec{2.0, -1.0});
  CHECK(parse_config(serialize(cfg)) == cfg);
}

TEST_CASE("config errors are located") {
  std::string text = kSmall;
  text.replace(text.find("\"x2\", \"1\""), 9, "\"x2\", \"1\", \"0\"");
  const std::string dim = config_error(text);
  CHECK(dim.find("f.cfg:6:") == 0);
  CHECK(dim.find("dimension mismatch") != std::string::npos);
  CHECK(dim.find("xminus") != std::string::npos);

  text = kSmall;
  text.replace(text.find("\"x1\""), 4, "\"x2 +\"");
  const std::string syn = config_error(text);
  CHECK(syn.find("f.cfg:4:10:") == 0);

  text = kSmall;
  text.replace(text.find("\"x2-a\""), 6, "\"x2-b\"");
  CHECK(config_error(text).find("b") != std::string::npos);
  CHECK(config_error("[system]\nkind = piecewise\nkind = nsff\n").find(":3:") != std::string::npos);
  CHECK(config_error("[sys\n").find("f.cfg:1:") == 0);
  CHECK(config_error("[system]\ncolour = 3\n").find(":2:") != std::string::npos);
  CHECK_FALSE(config_error("[system]\nkind = nsff\ndim = 2\nh = \"x2\"\nF = [\"1\",\"1\"]\n"
                           "G = [\"1\",\"1\"]\nH = \"y\"\n")
                  .empty());
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), Error);
}

TEST_CASE("registry round-trips") {
  REQUIRE(registry().size() == 5);
  for (const auto& e : registry()) {
    const SystemConfig cfg = parse_config(e.text, e.name);
    CHECK(cfg.name == e.name);
    CHECK(parse_config(serialize(cfg)) == cfg);
    CHECK(config_hash(cfg) == config_hash(parse_config(serialize(cfg))));
    CHECK(config_hash(cfg).size() == 16);
  }
  CHECK(find_example("ex-nope") == nullptr);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("value helpers") {
  CHECK(parse_list("0.1, 0.2,0.3") == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(parse_list("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK_THROWS_AS(parse_list("1,,2"), Error);
  const RangeSpec r = parse_range("x2=-1:2", 2);
  CHECK(r.coord == 1);
  CHECK(r.lo == -1.0);
  CHECK(r.hi == 2.0);
  CHECK_THROWS_AS(parse_range("x3=0:1", 2), Error);
  CHECK(num(0.1) == "0.10000000000000001");
  CHECK(num(-2.0) == "-2");
}

TEST_CASE("examples list and exit codes") {
  Run r = run({"examples", "list"});
  CHECK(r.code == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 5);
  r = run({"examples", "show", "ex-exblow"});
  CHECK(r.code == 0);
  CHECK(parse_config(r.out).name == "ex-exblow");
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"classify"}).code == 2);
  CHECK(run({"classify", "ex-exblow", "--n", "abc"}).code == 2);
  CHECK(run({"examples", "show", "ex-nope"}).code == 2);
  const fs::path d = fresh_dir("codes");
  CHECK(run({"classify", "/nonexistent.cfg", "--out", d.string()}).code == 1);
  CHECK(run({"sweep-eps", "ex-s2-1", "--out", d.string()}).code == 1);
  CHECK(run({"sweep-delta", "ex-s2-1", "--point", "0.5,0", "--out", d.string()}).code == 1);
  const Run sweep = run({"sweep-delta", "ex-exblow", "--point", "0,0.5", "--out", d.string()});
  CHECK(sweep.code == 1);
  CHECK(sweep.err.find("monotone") != std::string::npos);
}

TEST_CASE("classify finds the sliding interval") {
  const fs::path d = fresh_dir("classify");
  const Run r = run({"classify", "ex-exblow", "--range", "x2=-1:2", "--n", "300", "--out",
                     d.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(d / "intervals.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[2][0] == "sliding-attracting");
  CHECK(std::fabs(std::stod(rows[2][2])) <= 1e-8);
  CHECK(std::fabs(std::stod(rows[2][4]) - 1.0) <= 1e-8);
  CHECK(fs::exists(d / "classify.json"));
  CHECK(slurp(d / "classify.json").find("\"config_hash\"") != std::string::npos);
  CHECK(read_csv(d / "classify.csv").size() == 301);
}

TEST_CASE("sweep-eps matches the closed form") {
  const fs::path d = fresh_dir("sweep");
  const Run r = run({"sweep-eps", "ex-ex2", "--eps", "0.1,0.05,0.01", "--out", d.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(d / "sweep-eps.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][2] == "x2");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double e = std::stod(rows[i][0]);
    const double want = (-1 + 2 * e + std::sqrt(5 - 12 * e + 8 * e * e)) / 2;
    CHECK(std::fabs(std::stod(rows[i][2]) - want) <= 1e-10);
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::vector<std::vector<std::string>> cmds{
      {"classify", "ex-exblow"},
      {"slide", "ex-ex2"},
      {"regularize", "ex-s2-1"},
      {"blowup", "ex-exblow"},
      {"integrate", "ex-exblow"},
      {"sweep-delta", "ex-s2-1"},
      {"sweep-eps", "ex-ex1"},
      {"csliding", "ex-ex1"}};
  for (const auto& cmd : cmds) {
    std::vector<std::string> names;
    std::vector<std::string> first;
    for (int k = 0; k < 2; ++k) {
      const fs::path d = fresh_dir("det" + std::to_string(k));
      auto args = cmd;
      args.insert(args.end(), {"--out", d.string()});
      REQUIRE_MESSAGE(run(args).code == 0, cmd[0]);
      std::vector<std::string> contents;
      for (const auto& entry : fs::directory_iterator(d))
        if (entry.path().extension() == ".csv") {
          if (k == 0) names.push_back(entry.path().filename().string());
          contents.push_back(slurp(entry.path()));
        }
      if (k == 0)
        first = contents;
      else
        CHECK_MESSAGE(first == contents, cmd[0]);
    }
    CHECK_FALSE(names.empty());
  }
}

TEST_CASE("check suites pass on the built-in systems") {
  for (const auto& e : registry()) {
    for (const CheckResult& c : run_checks(parse_config(e.text, e.name), 42))
      CHECK_MESSAGE(c.pass, e.name << ": " << c.name << " " << c.detail);
  }
}
