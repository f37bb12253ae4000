#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "carleman/cli.hpp"
#include "carleman/error.hpp"

namespace fs = std::filesystem;
using carleman::cli::run;
using nlohmann::json;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "carleman");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("carleman_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path only_run(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  REQUIRE(dirs.size() == 1);
  return dirs.front();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_file(const fs::path& p, const std::string& content) {
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = invoke({"lambda-scan", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("log_lambda") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"lambda-scan", "--bogus", "1"}).code == 2);
  CHECK(invoke({"commutator-check", "--mode", "sideways", "--out", scratch("mode").string()}).code == 2);
}

TEST_CASE("commutator-check end to end") {
  const auto root = scratch("commutator");
  const auto r = invoke({"commutator-check", "--d", "1", "--R", "10", "--c", "2", "--trials", "50", "--seed", "7",
                         "--out", root.string()});
  CHECK(r.code == 0);
  const auto dir = only_run(root);
  CHECK(dir.filename().string().rfind("commutator-check_s7_", 0) == 0);
  const auto report = json::parse(slurp(dir / "commutator-check.json"));
  CHECK(report["result"]["max_defect"].get<double>() < 1e-8);
  CHECK(r.out.find("PASS commutator ") != std::string::npos);
}

TEST_CASE("counterexample exit codes follow the verification") {
  const auto root = scratch("counterexample");
  CHECK(invoke({"counterexample", "--R", "20", "--mode", "repaired", "--out", (root / "a").string()}).code == 0);
  const auto literal = invoke({"counterexample", "--R", "20", "--mode", "literal_paper", "--out", (root / "b").string()});
  CHECK(literal.code == 1);
  CHECK(literal.out.find("FAIL counterexample_R20") != std::string::npos);
  CHECK(invoke({"counterexample", "--R", "3", "--out", (root / "c").string()}).code == 2);
}

TEST_CASE("load_config") {
  const auto root = scratch("config");
  const auto empty = carleman::cli::load_config(write_file(root / "empty.json", "{}"));
  const carleman::cli::RunConfig defaults;
  CHECK(empty.to_json() == defaults.to_json());

  const auto c = carleman::cli::load_config(write_file(root / "list.json", R"({"R_list":[8,12,16],"seed":1})"));
  CHECK(c.R_list == std::vector<double>{8, 12, 16});
  CHECK(c.seed == 1);

  for (const auto& [text, key] : std::vector<std::pair<std::string, std::string>>{
           {R"({"R_list":"ten"})", "R_list"}, {R"({"nonsense":1})", "nonsense"}, {R"({"d":1.5})", "'d'"},
           {R"({"seed":-1})", "seed"}, {R"({"tolerance":{"x":"y"}})", "tolerance.x"}}) {
    CAPTURE(text);
    const auto p = write_file(root / "bad.json", text);
    try {
      carleman::cli::load_config(p);
      FAIL("accepted");
    } catch (const carleman::Error& e) {
      CHECK(e.kind() == carleman::ErrorKind::Config);
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
    const auto r = invoke({"lambda-scan", "--config", p.string(), "--out", (root / "runs").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(key) != std::string::npos);
  }
}

TEST_CASE("flags override the config file") {
  const auto root = scratch("override");
  const auto cfg = write_file(root / "cfg.json", R"({"R_list":[8,10,12,14],"seed":3,"M":30})");
  CHECK(invoke({"lambda-scan", "--config", cfg.string(), "--seed", "5", "--out", (root / "runs").string()}).code == 0);
  const auto dir = only_run(root / "runs");
  const auto m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["config"]["seed"] == 5);
  CHECK(m["config"]["M"] == 30);
  CHECK(m["config"]["R_list"].size() == 4);
  CHECK(m["subcommand"] == "lambda-scan");
  CHECK(m["input_hash"].get<std::string>().size() == 40);
}

TEST_CASE("manifest lists every output once") {
  const auto root = scratch("manifest");
  CHECK(invoke({"evolve", "--M", "30", "--T", "0.5", "--out", root.string()}).code == 0);
  const auto dir = only_run(root);
  const auto m = json::parse(slurp(dir / "manifest.json"));
  std::multiset<std::string> listed;
  for (const auto& f : m["outputs"]) listed.insert(f.get<std::string>());
  std::multiset<std::string> present;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "manifest.json") present.insert(e.path().filename().string());
  CHECK(listed == present);
}

TEST_CASE("rerun from a manifest is byte-identical") {
  const auto root = scratch("rerun");
  CHECK(invoke({"lambda-scan", "--R-list", "8,10,12,14,16", "--M", "24", "--L", "0.5", "--seed", "9", "--out",
                (root / "a").string()})
            .code == 0);
  const auto first = only_run(root / "a");
  CHECK(invoke({"lambda-scan", "--config", (first / "manifest.json").string(), "--out", (root / "b").string()}).code ==
        0);
  const auto second = only_run(root / "b");
  for (const char* name : {"lambda-scan.tsv", "lambda-scan.json"}) {
    CAPTURE(name);
    CHECK(slurp(first / name) == slurp(second / name));
  }
}

TEST_CASE("tolerance flag reaches the check") {
  const auto root = scratch("tolerance");
  const auto r = invoke({"commutator-check", "--trials", "3", "--R", "5", "--tolerance", "commutator=1e-30", "--out",
                         root.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL commutator") != std::string::npos);
  CHECK(invoke({"commutator-check", "--tolerance", "commutator=abc", "--out", root.string()}).code == 2);
}
