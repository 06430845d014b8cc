#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using chainsparse::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  [[nodiscard]] Json json() const { return Json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("chainsparse_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(file(name)) << text; }
};

Json without_timestamp(Json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("gen cut on K3 then cl prints 2") {
  TempDir t;
  t.write("k3.txt", "3 3\n1 2\n1 3\n2 3\n");
  REQUIRE(call({"gen", "cut", "--graph", t.file("k3.txt"), "--out", t.file("k3.json")}).code == 0);
  const auto r = call({"cl", "--in", t.file("k3.json")});
  CHECK(r.code == 0);
  CHECK(r.json()["value"] == 2);
  CHECK(r.json()["witness"]["length"] == 2);
  CHECK(call({"nrd", "--in", t.file("k3.json")}).json()["value"] == 2);
  CHECK(call({"cl-closure", "--in", t.file("k3.json")}).json()["value"] == 2);
}

TEST_CASE("sparsify rejects eps outside (0, 1)") {
  TempDir t;
  t.write("c.json", R"({"m": 3, "words": ["110", "101", "011", "000"]})");
  CHECK(call({"sparsify", "--in", t.file("c.json"), "--eps", "1.5"}).code == 2);
  CHECK(call({"sparsify", "--in", t.file("c.json"), "--eps", "0"}).code == 2);
}

TEST_CASE("verify exit status follows the verdict") {
  TempDir t;
  t.write("c.json", R"({"m": 3, "words": ["110", "101", "011", "000"]})");
  t.write("w.json", R"({"m": 3, "weights": [1, 2, 3]})");
  t.write("w2.json", R"({"m": 3, "weights": [2, 4, 6]})");
  const auto same = call({"verify", "--eps", "0.1", "--code", t.file("c.json"), "--w", t.file("w.json"), "--wt", t.file("w.json")});
  CHECK(same.code == 0);
  CHECK(same.json()["pass"] == true);
  const auto twice = call({"verify", "--eps", "0.5", "--code", t.file("c.json"), "--w", t.file("w.json"), "--wt", t.file("w2.json")});
  CHECK(twice.code == 1);
  CHECK(twice.json()["max_over"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("reports round trip through verify") {
  TempDir t;
  REQUIRE(call({"gen", "blocks", "--sizes", "120,80", "--out", t.file("b.json")}).code == 0);
  const auto s = call({"sparsify", "--in", t.file("b.json"), "--eps", "0.3", "--seed", "5", "--eta-constant", "0.05",
                       "--out", t.file("wt.json"), "--report", t.file("rep.json")});
  REQUIRE(s.code == 0);
  CHECK(s.out.empty());
  const auto v = call({"verify", "--from-report", t.file("rep.json")});
  CHECK(v.code == 0);
  CHECK(v.json()["recorded_pass"] == v.json()["pass"]);
  std::ifstream in(t.file("rep.json"));
  const Json rep = Json::parse(in);
  CHECK(rep["config"]["seed"] == 5);
  CHECK(rep["config"]["eta_constant"] == 0.05);
  CHECK(rep["nodes"].size() >= 1);
  CHECK(rep["nodes"][0].contains("m_prime"));
}

TEST_CASE("identical configurations give identical reports") {
  TempDir t;
  REQUIRE(call({"gen", "blocks", "--sizes", "60,90", "--out", t.file("b.json")}).code == 0);
  const std::vector<std::string> args{"sparsify", "--in", t.file("b.json"), "--eps", "0.4", "--seed", "9", "--eta-constant", "0.05"};
  const auto a = call(args);
  const auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(without_timestamp(a.json()).dump() == without_timestamp(b.json()).dump());
  CHECK(a.json().contains("timestamp"));
}

TEST_CASE("weighted subcommands") {
  TempDir t;
  REQUIRE(call({"gen", "blocks", "--sizes", "40,40", "--out", t.file("b.json")}).code == 0);
  std::string weights = R"({"m": 80, "weights": [)";
  for (int i = 0; i < 80; ++i) weights += std::to_string(1 + i % 3) + (i < 79 ? "," : "]}");
  t.write("w.json", weights);
  const auto w = call({"sparsify-weighted", "--in", t.file("b.json"), "--weights", t.file("w.json"), "--eps", "0.5",
                       "--eta-constant", "0.05", "--no-shortcuts", "--out", t.file("wt.json")});
  CHECK(w.code == 0);
  CHECK(w.json()["groups"].size() == 1);
  CHECK(w.json()["config"]["q_constant"] == 40.0);
  CHECK(call({"verify", "--eps", "0.5", "--code", t.file("b.json"), "--w", t.file("w.json"), "--wt", t.file("wt.json")}).code == 0);
  const auto d = call({"sparsify-dimfree", "--in", t.file("b.json"), "--weights", t.file("w.json"), "--eps", "0.5", "--q", "1"});
  CHECK(d.code == 0);
  CHECK(d.json()["passes"].size() >= 2);
  CHECK(d.json().contains("weights"));
}

TEST_CASE("structural subcommands emit their results") {
  TempDir t;
  t.write("c.json", R"({"m": 6, "words": ["100000", "010000", "001000", "000111"]})");
  const auto d = call({"density", "--in", t.file("c.json")});
  CHECK(d.json()["phi"] == 1.0);
  const auto dec = call({"decompose", "--in", t.file("c.json"), "--d", "1"});
  CHECK(dec.code == 0);
  CHECK(dec.json()["peeled"] == Json::array({0, 1, 2}));
  CHECK(dec.json()["remaining_code"]["words"] == Json::array({"000", "111"}));
  const auto a = call({"audit-counting", "--in", t.file("c.json")});
  CHECK(a.code == 0);
  CHECK(a.json()["rows"].size() == 4);
  const auto mc = call({"mc-concentration", "--ell", "200", "--p", "0.5", "--eps", "0.3", "--trials", "500"});
  CHECK(mc.code == 0);
}

TEST_CASE("contract subcommand") {
  TempDir t;
  t.write("c.json", R"({"m": 4, "words": ["1000", "0100", "0010", "0001"]})");
  const auto one = call({"contract", "--in", t.file("c.json"), "--alpha", "2", "--seed", "1"});
  CHECK(one.code == 0);
  CHECK(one.json()["trace"]["picked"].size() == 3);
  const auto freq = call({"contract", "--in", t.file("c.json"), "--alpha", "1", "--trials", "50", "--stop", "above"});
  CHECK(freq.json()["trials"] == 50);
  const auto surv = call({"contract", "--in", t.file("c.json"), "--alpha", "1", "--trials", "2000", "--target", "1000"});
  CHECK(surv.code == 0);
  CHECK(surv.json()["lower_bound"].get<double>() == doctest::Approx(0.05));
}

TEST_CASE("gen subcommands") {
  const auto r = call({"gen", "random", "--m", "8", "--count", "10", "--seed", "42"});
  CHECK(r.code == 0);
  CHECK(r.json()["words"][0] == "00010001");
  const auto lin = call({"gen", "linear", "--q", "3", "--k", "2", "--m", "4", "--seed", "1"});
  CHECK(lin.code == 0);
  CHECK(lin.json()["m"] == 4);
  const auto g = call({"gen", "cut", "--n", "5", "--p", "0.6", "--seed", "2"});
  CHECK(g.code == 0);
}

TEST_CASE("input errors exit 2") {
  TempDir t;
  t.write("bad.json", "{not json");
  t.write("short.json", R"({"m": 3, "words": ["11"]})");
  CHECK(call({"cl", "--in", t.file("bad.json")}).code == 2);
  CHECK(call({"cl", "--in", t.file("short.json")}).code == 2);
  CHECK(call({"cl", "--in", t.file("missing.json")}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"density", "--in", t.file("short.json"), "--mode", "fast"}).code == 2);
  CHECK(call({"gen", "blocks", "--sizes", "3,x"}).code == 2);
}

TEST_CASE("exhausted budget exits 3") {
  TempDir t;
  std::string words;
  for (int i = 0; i < 40; ++i) {
    std::string w(14, '0');
    for (int j = 0; j < 14; ++j) w[j] = ((i * 7 + j * 3) % 5 < 2) ? '1' : '0';
    w[i % 14] = '1';
    words += (i ? "," : "") + ("\"" + w + "\"");
  }
  t.write("c.json", R"({"m": 14, "words": [)" + words + "]}");
  const auto r = call({"cl", "--in", t.file("c.json"), "--budget", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("lower bound") != std::string::npos);
}

TEST_CASE("threads come from the flag, then the environment") {
  TempDir t;
  t.write("c.json", R"({"m": 2, "words": ["10", "01"]})");
  ::setenv("CHAINSPARSE_THREADS", "3", 1);
  CHECK(call({"cl", "--in", t.file("c.json")}).json()["config"]["threads"] == 3);
  CHECK(call({"--threads", "2", "cl", "--in", t.file("c.json")}).json()["config"]["threads"] == 2);
  ::setenv("CHAINSPARSE_THREADS", "many", 1);
  CHECK(call({"cl", "--in", t.file("c.json")}).code == 2);
  ::unsetenv("CHAINSPARSE_THREADS");
}

TEST_CASE("help exits 0") { CHECK(call({"--help"}).code == 0); }
