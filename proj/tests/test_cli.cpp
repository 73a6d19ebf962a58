#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "doctest.h"
#include "mexp/errors.hpp"

using namespace mexp;
using namespace mexp::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "moebius-expsum");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mexp_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("count and range grammar") {
  CHECK(parse_count("1000") == 1000);
  CHECK(parse_count("1e4") == 10000);
  CHECK(parse_count("25e2") == 2500);
  CHECK(parse_count("18446744073709551615") == 18446744073709551615ULL);
  for (const char* bad : {"", "1e", "e4", "-5", "1.5", " 10", "1e20", "18446744073709551616", "2e19"})
    CHECK_THROWS_AS(parse_count(bad), ConfigError);

  CHECK(parse_x_range("1e4:1e7:x10") == std::vector<std::uint64_t>{10000, 100000, 1000000, 10000000});
  CHECK(parse_x_range("3:100:x3") == std::vector<std::uint64_t>{3, 9, 27, 81});
  CHECK(parse_x_range("5:5:x2") == std::vector<std::uint64_t>{5});
  for (const char* bad : {"1e4:1e7", "1e4:1e7:10", "1e4:1e3:x10", "0:10:x2", "1:10:x1", "1:10:x"})
    CHECK_THROWS_AS(parse_x_range(bad), ConfigError);
}

TEST_CASE("run config round-trips through its canonical form") {
  RunConfig c;
  c.command = "lemma2";
  c.alpha = "liouville:5/2";
  c.xs = {1000, 10000};
  c.x_range = "1e3:1e4:x10";
  c.tau = Ratio(27, 10);
  c.M = 12;
  c.epsilon = Ratio(1, 10);
  c.seed = 99;
  c.seq = SequenceChoice::random_unit;
  c.gamma_variant = GammaVariant::literal;
  c.format = "json";
  c.workers = 3;
  c.plot_data = "p.csv";
  const auto j = c.to_json();
  const auto back = RunConfig::from_json(j);
  CHECK(back == c);
  CHECK(back.to_json().dump() == j.dump());
  CHECK(RunConfig::from_json(json::parse(j.dump())) == c);

  RunConfig d;
  d.command = "sum";
  CHECK(RunConfig::from_json(d.to_json()) == d);
}

TEST_CASE("sum command") {
  const auto r = run({"sum", "--alpha", "quad:2", "--x", "1000"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "# moebius-expsum v1");
  CHECK(l[1] == "x,re,im,abs,err_bound,terms");
  CHECK(l[2].rfind("1000,", 0) == 0);

  const auto j = run({"sum", "--alpha", "golden", "--x", "10", "--format", "json"});
  CHECK(j.code == 0);
  const auto doc = json::parse(j.out);
  REQUIRE(doc["rows"].size() == 1);
  const auto& row = doc["rows"][0];
  for (const char* k : {"re", "im", "abs", "err_bound"}) CHECK(row[k].is_number_float());
  // 1, 2, 3, 5, 6, 7, 10 are the squarefree n <= 10
  CHECK(row["terms"] == 7);
  CHECK(doc["config"]["alpha"] == "golden");

  const auto bad = run({"sum", "--alpha", "quad:4", "--x", "10"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("perfect square") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sum", "--x", "10", "--bogus"}).code == 2);
  CHECK(run({"sum"}).code == 2);
  CHECK(run({"sum", "--x", "1e3", "--format", "xml"}).code == 2);
  CHECK(run({"sum", "--x", "10", "--x-range", "1:10:x2"}).code == 2);
  CHECK(run({"sum", "--x", "10", "--alpha", "quad:2 "}).code == 2);
  CHECK(run({"select-q", "--x", "1000", "--tau", "2"}).code == 2);
  CHECK(run({"sum", "--x", "1000", "--sieve-limit", "999"}).code == 3);
  CHECK(run({"sum", "--x", "1000", "--memory-budget", "100"}).code == 3);
  CHECK(run({"sum", "--x", "1000", "--frac-bits", "64"}).code == 3);
  CHECK(run({"sum", "--x", "5000000000"}).code == 3);
  CHECK(run({"sum", "--help"}).code == 0);
}

TEST_CASE("decompose command") {
  const auto r = run({"decompose", "--x", "1e5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto row = json::parse(r.out)["rows"][0];
  CHECK(row["M"] == 100);
  CHECK(row["N"] == 100);
  CHECK(row["gamma_variant"] == "exact");
  CHECK(row["residual"].get<double>() <= 1e-8);

  const auto lit = run({"decompose", "--x", "5000", "--M", "10", "--N", "10", "--gamma-variant", "literal",
                        "--format", "json"});
  CHECK(lit.code == 0);
  CHECK(json::parse(lit.out)["rows"][0]["gamma_variant"] == "literal");

  const auto mn = run({"decompose", "--x", "800", "--M", "7", "--format", "json"});
  CHECK(json::parse(mn.out)["rows"][0]["M"] == 7);
  CHECK(json::parse(mn.out)["rows"][0]["N"] == 15);
}

TEST_CASE("diophantine commands") {
  const auto c = run({"convergents", "--alpha", "quad:2", "--count", "5"});
  CHECK(c.code == 0);
  const auto l = lines(c.out);
  REQUIRE(l.size() == 7);
  CHECK(l.back() == "4,2,41,29");

  const auto s = run({"select-q", "--alpha", "golden", "--x", "1000000", "--tau", "21/10", "--format", "json"});
  CHECK(s.code == 0);
  const auto row = json::parse(s.out)["rows"][0];
  CHECK(row["q"] == "987");
  CHECK(row["xrange_ok"] == true);
}

TEST_CASE("sweep command") {
  const auto r = run({"sweep", "--alpha", "liouville:3", "--x-range", "1e4:1e7:x10", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rows = json::parse(r.out)["rows"];
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row["pred_exponent"].get<double>() == doctest::Approx(5.0 / 6 + 0.05));
    CHECK(row["eta"] == "3");
    CHECK(row["lemma1_ratio"].is_null());
    CHECK(row["error"].is_null());
  }
}

TEST_CASE("lemma commands") {
  const auto a = run({"lemma1", "--x", "1e4", "--format", "json"});
  CHECK(a.code == 0);
  CHECK(json::parse(a.out)["rows"][0]["ratio"].get<double>() > 0);
  const auto b1 = run({"lemma2", "--x", "1e4", "--seq", "random", "--seed", "5"});
  const auto b2 = run({"lemma2", "--x", "1e4", "--seq", "random", "--seed", "5", "--workers", "2"});
  CHECK(b1.code == 0);
  CHECK(b1.out == b2.out);
  CHECK(run({"lemma2", "--x", "1e4", "--seq", "unit"}).code == 2);
}

TEST_CASE("csv and json carry the same data") {
  const std::vector<std::vector<std::string>> cases{
      {"sum", "--x-range", "10:100000:x10", "--alpha", "liouville:5/2"},
      {"decompose", "--x-range", "100:10000:x10", "--alpha", "quad:1,5,2"},
      {"convergents", "--alpha", "liouville:3", "--count", "6"},
      {"select-q", "--x-range", "10:1e6:x100", "--alpha", "golden"},
      {"sweep", "--x-range", "100:1e5:x10", "--lemmas"},
      {"lemma1", "--x-range", "100:1e4:x10", "--M", "5"},
      {"lemma2", "--x-range", "100:1e4:x10", "--seq", "ones", "--N", "3"}};
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    const auto csv = run(args);
    auto jargs = args;
    jargs.insert(jargs.end(), {"--format", "json"});
    const auto js = run(jargs);
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const auto table = Table::from_csv(csv.out, columns_for(args[0]));
    CHECK(table.rows_json() == json::parse(js.out)["rows"]);
    CHECK(table.to_csv() == csv.out);
  }
}

TEST_CASE("csv quoting survives the round trip") {
  Table t({{"s", CellKind::text}, {"v", CellKind::real}});
  t.add_row({std::string("quad:1,5,2"), 1.5});
  t.add_row({std::string("say \"hi\""), Cell()});
  const auto back = Table::from_csv(t.to_csv(), t.columns());
  CHECK(back.rows() == t.rows());
}

TEST_CASE("output files are reproducible") {
  const auto f1 = temp_file("a.json"), f2 = temp_file("b.json"), plot = temp_file("plot.csv");
  const std::vector<std::string> base{"sweep", "--alpha", "quad:2", "--x-range", "1e3:1e5:x10", "--format", "json"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--output", f1.string(), "--emit-plot-data", plot.string()});
  a2.insert(a2.end(), {"--output", f2.string()});
  CHECK(run(a1).code == 0);
  const auto first = slurp(f1);
  CHECK(run(a1).code == 0);
  CHECK(slurp(f1) == first);
  CHECK(run(a2).code == 0);
  // the configs differ only in the echoed output path
  auto j1 = json::parse(first), j2 = json::parse(slurp(f2));
  CHECK(j1["rows"] == j2["rows"]);

  const auto p = lines(slurp(plot));
  REQUIRE(p.size() == 4);
  CHECK(p[0] == "log10_x,log10_abs_s,pred_log10_bound");
  CHECK(p[1].rfind("3,", 0) == 0);
  CHECK(p[1].substr(p[1].rfind(',') + 1) == format_double(0.85 * 3));
  for (const auto& f : {f1, f2, plot}) std::filesystem::remove(f);
}
