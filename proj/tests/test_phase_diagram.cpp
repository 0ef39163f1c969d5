#include <doctest.h>

#include <cmath>
#include <vector>

#include "cavising/errors.hpp"
#include "cavising/phase_diagram.hpp"

using namespace cavising;

namespace {

SystemParams base() {
  SystemParams p;
  p.size = ThermodynamicLimit{};
  return p;
}

// S_x does not depend on Delta, so both critical drives scale exactly as
// sqrt(D / Delta) with D = Delta^2 + kappa^2/4.
double detuning_factor(double detuning, double kappa) {
  return std::sqrt((detuning * detuning + 0.25 * kappa * kappa) / detuning);
}

}  // namespace

TEST_CASE("axes and grids") {
  for (Axis a : {Axis::Detuning, Axis::Loss, Axis::SplittingRatio}) {
    CHECK(parse_axis(to_string(a)) == a);
    const auto grid = default_axis_grid(a);
    CHECK(grid.size() == 40);
    CHECK(grid.back() == doctest::Approx(2.0));
  }
  CHECK(default_axis_grid(Axis::Detuning).front() == doctest::Approx(0.05));
  CHECK(default_axis_grid(Axis::Loss).front() == doctest::Approx(0.05));
  CHECK(default_axis_grid(Axis::SplittingRatio).front() == doctest::Approx(0.1));
  CHECK_THROWS_AS(parse_axis("kappa"), InvalidParameters);

  SystemParams p = base();
  p.coupling = 2.0;
  CHECK(at_axis_value(p, Axis::SplittingRatio, 0.5).splitting == 1.0);
  CHECK(at_axis_value(p, Axis::Loss, 0.7).loss == 0.7);
  CHECK(at_axis_value(p, Axis::Detuning, 0.2).detuning == 0.2);
}

TEST_CASE("detuning axis follows the exact sqrt(D/Delta) scaling") {
  const std::vector<double> grid{0.005, 0.05, 0.25, 0.8, 1.7};
  const auto b = boundary_vs_parameter(base(), Axis::Detuning, grid);
  const double k = base().loss;
  const auto& ref = *b.samples[2].points;
  for (const auto& s : b.samples) {
    REQUIRE(s.points);
    const double ratio = detuning_factor(s.value, k) / detuning_factor(0.25, k);
    CHECK(s.points->g1 / ref.g1 == doctest::Approx(ratio).epsilon(1e-7));
    CHECK(s.points->g2 / ref.g2 == doctest::Approx(ratio).epsilon(1e-7));
  }
  // Delta = 0.01 kappa: the divergence gives sqrt(25.01) times the minimum
  CHECK(b.samples[0].points->g1 / ref.g1 == doctest::Approx(std::sqrt(25.01)).epsilon(1e-7));
}

TEST_CASE("loss axis: monotone, ordered and continuous") {
  const auto b = boundary_vs_parameter(base(), Axis::Loss, default_axis_grid(Axis::Loss));
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    REQUIRE(b.samples[i].points);
    const auto& cp = *b.samples[i].points;
    CHECK(cp.g1 <= cp.g2);
    if (i == 0) continue;
    const auto& prev = *b.samples[i - 1].points;
    CHECK(cp.g1 >= prev.g1);
    CHECK(cp.g2 >= prev.g2);
    CHECK(std::abs(cp.g1 / prev.g1 - 1.0) < 0.2);
    CHECK(std::abs(cp.g2 / prev.g2 - 1.0) < 0.2);
  }
}

TEST_CASE("splitting axis: merge onset and persistence") {
  const auto b =
      boundary_vs_parameter(base(), Axis::SplittingRatio, default_axis_grid(Axis::SplittingRatio));
  bool merged_seen = false;
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    REQUIRE(b.samples[i].points);
    const auto& cp = *b.samples[i].points;
    CHECK(cp.g1 <= cp.g2);
    CHECK(cp.merged == (std::abs(cp.g2 - cp.g1) / cp.g2 < 1e-6));
    if (merged_seen) CHECK(cp.merged);
    merged_seen = merged_seen || cp.merged;
    if (i > 0) {
      const auto& prev = *b.samples[i - 1].points;
      CHECK(std::abs(cp.g1 / prev.g1 - 1.0) < 0.2);
      CHECK(std::abs(cp.g2 / prev.g2 - 1.0) < 0.2);
    }
  }
  REQUIRE(b.merge_onset());
  CHECK(*b.merge_onset() >= 1.0);
  CHECK(*b.merge_onset() <= 1.3);

  const auto two = boundary_vs_parameter(base(), Axis::SplittingRatio, {0.3, 1.5});
  CHECK_FALSE(two.samples[0].points->merged);
  CHECK(two.samples[1].points->merged);
}

TEST_CASE("missing transitions become gaps, parallel matches serial") {
  // g2 ~ 8000 at Delta = 1e-9, beyond the searched drive range
  const std::vector<double> grid{1e-9, 0.3, 0.8, 1.4};
  const auto serial = boundary_vs_parameter(base(), Axis::Detuning, grid);
  const auto par = boundary_vs_parameter(base(), Axis::Detuning, grid, 3);
  CHECK_FALSE(serial.samples[0].points);
  CHECK_FALSE(par.samples[0].points);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    REQUIRE(par.samples[i].points);
    CHECK(par.samples[i].value == grid[i]);
    CHECK(par.samples[i].points->g1 == serial.samples[i].points->g1);
    CHECK(par.samples[i].points->g2 == serial.samples[i].points->g2);
  }
  CHECK_THROWS_AS(boundary_vs_parameter(base(), Axis::Detuning, {-0.5}), InvalidParameters);
}

TEST_CASE("detuning minimum check") {
  SUBCASE("eps = 0 is exact") {
    const auto rep = detuning_minimum_check(base(), {0.0}, {.delta_grid = {0.2, 0.25, 0.3}});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].residual_plus == 0.0);
    CHECK(rep.rows[0].residual_minus == 0.0);
  }
  SUBCASE("residuals match the closed-form scaling") {
    const double k = base().loss;
    const auto rep = detuning_minimum_check(base(), {0.04, 0.01, 0.02});
    CHECK(rep.argmin_ok);
    CHECK(rep.argmin_g1 == doctest::Approx(0.25));
    CHECK(rep.argmin_g2 == doctest::Approx(0.25));
    CHECK(rep.raises_g1);
    CHECK(rep.monotone);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].eps == 0.01);
    for (const auto& row : rep.rows) {
      const double shrink = std::sqrt(1.0 - 2.0 * row.eps * row.eps / (k * k));
      const double plus = detuning_factor(0.25 + row.eps, k) / detuning_factor(0.25, k) * shrink - 1;
      const double minus = detuning_factor(0.25 - row.eps, k) / detuning_factor(0.25, k) * shrink - 1;
      CHECK(std::abs(row.residual_plus - plus) <= 1e-10);
      CHECK(std::abs(row.residual_minus - minus) <= 1e-10);
      CHECK(row.g1_plus > rep.g1_at_min);
      CHECK(row.g1_minus > rep.g1_at_min);
    }
    REQUIRE(rep.pair_ratios.size() == 2);
    for (double r : rep.pair_ratios) CHECK(std::abs(r - 16.0) <= 0.3 * 16.0);
  }
  CHECK_THROWS_AS(detuning_minimum_check(base(), {0.2}), InvalidParameters);
}
