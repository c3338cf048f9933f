#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dunkl/certify.hpp"
#include "dunkl/error.hpp"

using namespace dunkl;

namespace {

SweepConfig small_heat() {
  SweepConfig c = default_config("heat");
  c.k = {0.5, 2.0};
  c.product = {1e-2, 1e2, 3, true};
  c.t = {0.1, 10, 2, true};
  c.threads = 2;
  return c;
}

void same_summary(const RatioReport& a, const RatioReport& b) {
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    CHECK(a.groups[g].label == b.groups[g].label);
    CHECK(a.groups[g].min_ratio == b.groups[g].min_ratio);
    CHECK(a.groups[g].max_ratio == b.groups[g].max_ratio);
    CHECK(a.groups[g].spread == b.groups[g].spread);
    CHECK(a.groups[g].argmin == b.groups[g].argmin);
    CHECK(a.groups[g].argmax == b.groups[g].argmax);
    CHECK(a.groups[g].samples == b.groups[g].samples);
  }
}

}  // namespace

TEST_SUITE("certify") {
  TEST_CASE("ranges") {
    CHECK(Range{1e-2, 1e2, 5, true}.values() == std::vector<double>{1e-2, 1e-1, 1, 1e1, 1e2});
    CHECK(Range{0, 1, 3, false}.values() == std::vector<double>{0, 0.5, 1});
    CHECK(Range{3, 9, 1, true}.values() == std::vector<double>{3});
  }

  TEST_CASE("validation") {
    SweepConfig c;
    c.product.count = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.kernel = "poisson";
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.k = {};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.k = {-1.0};
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(default_config("lemma:nope"), DomainError);
    CHECK_NOTHROW(default_config("lemma:lemma_a2").validate());
  }

  TEST_CASE("budget is enforced before any evaluation") {
    SweepConfig c = default_config("spherical");
    c.n = 3;
    c.budget = 1000;
    CHECK(estimate_cost(c) > 1000);
    std::size_t calls = 0;
    CHECK_THROWS_AS(run_sweep(c, [&](std::size_t, std::size_t) { ++calls; }), BudgetExceeded);
    CHECK(calls == 0);
  }

  TEST_CASE("budget from the environment") {
    ::unsetenv("DUNKL_BUDGET");
    CHECK(budget_from_env(42) == 42);
    ::setenv("DUNKL_BUDGET", "12345", 1);
    CHECK(budget_from_env(42) == 12345);
    ::setenv("DUNKL_BUDGET", "abc", 1);
    CHECK_THROWS_AS(budget_from_env(42), DomainError);
    ::setenv("DUNKL_BUDGET", "-5", 1);
    CHECK_THROWS_AS(budget_from_env(42), DomainError);
    ::unsetenv("DUNKL_BUDGET");
  }

  TEST_CASE("decimal text of log values") {
    for (double l : {0.0, -1.0, 1234.5678, -98765.4321, 1e-9})
      CHECK(parse_log_decimal(log_decimal(l)) == doctest::Approx(l).epsilon(1e-15));
    CHECK(log_decimal(0.0).rfind("1.0000000000000000e+0", 0) == 0);
    CHECK(log_decimal(std::log(10.0) * 5000).find("e+5000") != std::string::npos);
  }

  TEST_CASE("reports round-trip and are reproducible") {
    const RatioReport r = run_sweep(small_heat());
    CHECK(r.rows.size() == 2 * 2 * 3 * 2);

    std::stringstream csv;
    write_csv(r, csv);
    RatioReport back = read_csv(csv);
    summarize(back);
    same_summary(r, back);
    REQUIRE(back.rows.size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      CHECK(back.rows[i].ratio == r.rows[i].ratio);
      CHECK(back.rows[i].inputs == r.rows[i].inputs);
    }

    std::stringstream json;
    write_json(r, json);
    RatioReport jback = read_json(json);
    summarize(jback);
    same_summary(r, jback);

    SweepConfig serial = small_heat();
    serial.threads = 1;
    std::stringstream again, first;
    write_csv(run_sweep(serial), again);
    write_csv(r, first);
    CHECK(again.str() == first.str());
  }

  TEST_CASE("group statistics") {
    RatioReport r;
    r.config.spread_limit = 10;
    r.columns = {"k", "product"};
    r.drift_column = 1;
    for (double p : {1.0, 10.0, 100.0}) r.rows.push_back({"a", {1.0, p}, 0, 0, 2.0, 0});
    for (double p : {1.0, 10.0, 100.0}) r.rows.push_back({"b", {1.0, p}, 0, 0, p, 0});
    summarize(r);
    REQUIRE(r.groups.size() == 2);
    CHECK(r.groups[0].spread == 1.0);
    CHECK(r.groups[0].slope == doctest::Approx(0.0));
    CHECK(r.groups[0].pass);
    CHECK(r.groups[1].spread == 100.0);
    CHECK(r.groups[1].slope == doctest::Approx(1.0));
    CHECK(r.groups[1].argmax == 5);
    CHECK_FALSE(r.groups[1].pass);
    CHECK_FALSE(r.pass());
    r.rows[0].ratio = -1.0;
    summarize(r);
    CHECK_FALSE(r.groups[0].pass);
  }
}
