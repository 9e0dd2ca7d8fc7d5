// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cli_support.hpp"

using namespace gkpr::cli;

namespace {

int exit_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const CliError& e) {
    return e.exit_code();
  }
  return 0;
}

}  // namespace

TEST_CASE("grids: single values and lists") {
  CHECK(parse_grid("100", "L") == std::vector<double>{100});
  CHECK(parse_grid(" 10, 20 ,40", "L") == std::vector<double>{10, 20, 40});
  CHECK(parse_grid("1e-3", "t-coh") == std::vector<double>{1e-3});
  CHECK(parse_grid("+5", "L") == std::vector<double>{5});
}

TEST_CASE("grids: linear and log ranges") {
  const auto lin = parse_grid("10:700:70", "L");
  REQUIRE(lin.size() == 70);
  CHECK(lin.front() == 10);
  CHECK(lin.back() == 700);
  for (std::size_t i = 1; i < lin.size(); ++i) CHECK(std::abs(lin[i] - lin[i - 1] - 10.0) < 1e-9);

  const auto lg = parse_grid("log:1e-3:10:5", "t-coh");
  REQUIRE(lg.size() == 5);
  CHECK(lg.front() == 1e-3);
  CHECK(lg.back() == 10);
  for (std::size_t i = 1; i < lg.size(); ++i) CHECK(std::abs(lg[i] / lg[i - 1] - 10.0) < 1e-12);

  CHECK(parse_grid("5:9:1", "L") == std::vector<double>{5});
  CHECK(parse_grid("9:5:3", "L") == std::vector<double>{9, 7, 5});
}

TEST_CASE("grids: malformed input is a validation error naming the field") {
  for (const char* bad : {"", "  ", "1,,2", "a", "1:2", "1:2:0", "1:2:x", "log:0:1:3", "log:-1:1:3", "1:inf:3",
                          "1:2:3:4", "nan", "1e", "10 20"}) {
    CAPTURE(bad);
    try {
      parse_grid(bad, "L");
      FAIL("accepted");
    } catch (const CliError& e) {
      CHECK(e.exit_code() == kExitValidation);
      CHECK(std::string(e.what()).rfind("L:", 0) == 0);
    }
  }
}

TEST_CASE("integer grids") {
  CHECK(parse_int_grid("2,4,8", "n") == std::vector<long>{2, 4, 8});
  CHECK(parse_int_grid("1:9:5", "n") == std::vector<long>{1, 3, 5, 7, 9});
  CHECK(parse_int_grid("1e3", "n") == std::vector<long>{1000});
  CHECK(exit_code_of([] { parse_int_grid("2.5", "n"); }) == kExitValidation);
  CHECK(exit_code_of([] { parse_int_grid("1:2:3", "n"); }) == kExitValidation);
}

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(100) == "100");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::pow(10.0, u(g) / 10) * (i % 2 ? -1 : 1);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("formats") {
  CHECK(parse_format("csv") == Format::kCsv);
  CHECK(parse_format("json") == Format::kJson);
  CHECK(parse_format("text") == Format::kText);
  CHECK(exit_code_of([] { parse_format("xml"); }) == kExitValidation);
}

TEST_CASE("csv round trip is byte identical") {
  std::vector<Record> recs;
  for (int i = 0; i < 20; ++i) {
    Record r;
    r.add("n", static_cast<long>(i + 1)).add("L_km", 12.5 * i + 0.1).add("S", 1.0 / (i + 3)).add("strategy", std::string("preamp"));
    recs.push_back(r);
  }
  std::ostringstream os;
  write_csv(os, recs);
  const std::string text = os.str();
  const CsvTable t = parse_csv(text);
  CHECK(t.header == std::vector<std::string>{"n", "L_km", "S", "strategy"});
  REQUIRE(t.rows.size() == 20);
  CHECK(std::holds_alternative<long>(t.rows[3][0]));
  CHECK(std::holds_alternative<double>(t.rows[3][1]));
  CHECK(std::get<double>(t.rows[3][2]) == 1.0 / 6);
  CHECK(std::holds_alternative<std::string>(t.rows[3][3]));
  CHECK(emit_csv(t) == text);
  CHECK(emit_csv(parse_csv(emit_csv(t))) == text);
}

TEST_CASE("csv header with no records") {
  std::ostringstream os;
  write_csv(os, {}, {"a", "b"});
  CHECK(os.str() == "a,b\n");
  CHECK(parse_csv(os.str()).rows.empty());
}

TEST_CASE("json output keeps field order and exact values") {
  std::vector<Record> recs(2);
  recs[0].add("n", 4L).add("S", 0.1).add("note", std::string("x"));
  recs[1].add("n", 8L).add("S", 1e-300).add("note", std::string("y"));
  std::ostringstream os;
  write_json(os, recs);
  const auto doc = nlohmann::ordered_json::parse(os.str());
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0].begin().key() == "n");
  CHECK(doc[0]["n"].get<long>() == 4);
  CHECK(doc[1]["S"].get<double>() == 1e-300);
  CHECK(doc[1]["note"].get<std::string>() == "y");
}

TEST_CASE("run_ordered returns results in index order") {
  for (unsigned w : {1u, 2u, 8u, 100u}) {
    const auto v = run_ordered<long>(257, w, [](std::size_t i) { return static_cast<long>(i * i); });
    REQUIRE(v.size() == 257);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<long>(i * i));
  }
  CHECK(run_ordered<int>(0, 4, [](std::size_t) { return 1; }).empty());
  CHECK(default_workers() >= 1);
}

TEST_CASE("run_ordered rethrows the lowest failing index after all work") {
  std::atomic<int> done{0};
  try {
    run_ordered<int>(50, 4, [&](std::size_t i) -> int {
      ++done;
      if (i == 31 || i == 7) throw std::runtime_error("bad " + std::to_string(i));
      return 0;
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "bad 7");
  }
  CHECK(done == 50);
}
