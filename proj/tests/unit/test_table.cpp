#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace triphase;

TEST_CASE("format_double round-trips and spells non-finite values") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(HUGE_VAL) == "inf");
  CHECK(format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("csv_escape quotes only when needed") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("table CSV has a header and CRLF rows") {
  Table t;
  t.header = {"time", "value"};
  t.add({0.0, 1.5});
  t.add({0.1, -2.0});
  CHECK(t.to_csv() == "time,value\r\n0,1.5\r\n0.10000000000000001,-2\r\n");
  CHECK_THROWS(t.add({1.0}));
}

TEST_CASE("scenario families sample compatible data") {
  GridSpec g = th::small_grid(16, 16);
  for (const InitialData& d : {gaussian_bump(), pure_lift(2.0), zero_data()}) {
    TriField s = d.sample(g);
    REQUIRE(s.has_traces());
    CHECK(th::max_abs_diff(s.trace_a, s.f_s) < 1e-15);
    CHECK(th::max_abs_diff(s.trace_b, s.f_s) < 1e-15);
  }
  TriField m = single_mode(g, 2, 3, 0.5).sample(g);
  CHECK(th::max_abs(m.f_s) == 0.0);
  CHECK(th::max_abs(m.f_a) == doctest::Approx(0.5).epsilon(0.05));
}
