#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "cavising/errors.hpp"
#include "cavising/selfconsistency.hpp"
#include "oracles.hpp"

using namespace cavising;

namespace {

SystemParams reference(ChainSize size = Finite{200}) {
  SystemParams p;
  p.size = size;
  return p;
}

// g1 of the infinite chain from the parametric super-radiant branch
// g0^2 = D B / (2 Delta m(B)), minimised over B >= delta.
double parametric_g1(const SystemParams& p) {
  auto g_sq = [&](double b) {
    return p.denominator() * b / (2.0 * p.detuning * oracle::chain_magnetization(b, p.coupling));
  };
  const double lo = p.splitting, hi = p.splitting + 4.0;
  const int n = 400;
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (g_sq(lo + (hi - lo) * i / n) < g_sq(lo + (hi - lo) * best / n)) best = i;
  double a = lo + (hi - lo) * std::max(best - 1, 0) / n;
  double c = lo + (hi - lo) * std::min(best + 1, n) / n;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  while (c - a > 1e-10) {
    const double x1 = c - r * (c - a), x2 = a + r * (c - a);
    (g_sq(x1) < g_sq(x2) ? c : a) = (g_sq(x1) < g_sq(x2) ? x2 : x1);
  }
  return std::sqrt(g_sq(0.5 * (a + c)));
}

}  // namespace

TEST_CASE("photon_from_sx") {
  SystemParams p = reference();
  p.drive = 1.0;
  CHECK(photon_from_sx(0.0, p) == 0.0);
  CHECK(photon_from_sx(-0.5, p) == doctest::Approx(0.4 / 0.7025).epsilon(1e-15));
  p.detuning = 0.0;
  CHECK(photon_from_sx(1.0, p) == 0.0);
  p.loss = 0.0;
  CHECK_THROWS_AS(photon_from_sx(1.0, p), InvalidParameters);
}

TEST_CASE("residual: vacuum root and odd symmetry") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    SystemParams p{u(rng), u(rng), u(rng), 1.0, u(rng), trial % 2 ? ChainSize{Finite{40}}
                                                                  : ChainSize{ThermodynamicLimit{}}};
    CHECK(std::abs(residual(0.0, p)) <= 1e-12);
    for (double phi : {0.01, 0.3, 1.7})
      CHECK(std::abs(residual(-phi, p) + residual(phi, p)) <= 1e-12);
  }
}

TEST_CASE("fixed points across the bistable window") {
  for (ChainSize size : {ChainSize{Finite{200}}, ChainSize{ThermodynamicLimit{}}}) {
    const SystemParams p = reference(size);
    const CriticalPoints cp = critical_points(p);
    REQUIRE(cp.g1 < cp.g2);

    const auto below = find_fixed_points(with_drive(p, 0.5 * cp.g1));
    REQUIRE(below.size() == 1);
    CHECK(below[0].phi_s == 0.0);
    CHECK(below[0].stable);
    CHECK(below[0].cavity_phase == CavityPhase::Normal);

    const auto inside = find_fixed_points(with_drive(p, 0.5 * (cp.g1 + cp.g2)));
    REQUIRE(inside.size() == 5);
    CHECK(inside[0].stable);
    CHECK_FALSE(inside[1].stable);
    CHECK_FALSE(inside[2].stable);
    CHECK(inside[3].stable);
    CHECK(inside[4].stable);
    CHECK(inside[1].phi_s > 0.0);
    CHECK(inside[1].phi_s < inside[3].phi_s);  // unstable middle branch below the stable one

    const auto above = find_fixed_points(with_drive(p, 1.3 * cp.g2));
    REQUIRE(above.size() == 3);
    CHECK_FALSE(above[0].stable);
    CHECK(above[1].stable);
    CHECK(above[2].stable);
    for (const auto& roots : {below, inside, above})
      for (const auto& b : roots)
        CHECK(std::abs(residual(b.phi_s, with_drive(p, b.g0))) <= 1e-9);
  }
}

TEST_CASE("property: pairing, bound and simultaneity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    SystemParams p{u(rng), u(rng), u(rng), 1.0, 2.0 * u(rng), Finite{60}};
    const auto roots = find_fixed_points(p);
    REQUIRE(roots.size() % 2 == 1);
    CHECK(roots[0].phi_s == 0.0);
    const double bound = p.detuning * p.drive / p.denominator() + 1e-9;
    for (std::size_t k = 1; k < roots.size(); k += 2) {
      CHECK(roots[k].phi_s == doctest::Approx(-roots[k + 1].phi_s).epsilon(1e-9));
      CHECK(std::abs(roots[k].c_s.m_consistent) ==
            doctest::Approx(std::abs(roots[k + 1].c_s.m_consistent)).epsilon(1e-6));
      CHECK(roots[k].stable == roots[k + 1].stable);
    }
    for (const auto& b : roots) {
      CHECK(std::abs(b.phi_s) <= bound);
      CHECK(b.stable == (b.c_s.m_consistent > 0.0));
      if (b.stable) CHECK((std::abs(b.phi_s) > 1e-8) == (std::abs(b.s_x) > 1e-8));
    }
  }
}

TEST_CASE("stability coefficient") {
  SystemParams p = reference();
  p.drive = 1e-8;
  CHECK(stability_coefficient(0.0, p).m_consistent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stability_coefficient(0.0, p).printed == doctest::Approx(1.0).epsilon(1e-12));
  const CriticalPoints cp = critical_points(reference());
  CHECK(std::abs(stability_coefficient(0.0, with_drive(reference(), cp.g2)).m_consistent) <= 1e-6);
  // printed form differs by the missing Delta factor
  const auto c = stability_coefficient(0.0, with_drive(reference(), 0.7));
  CHECK((c.printed - 1.0) * 0.8 == doctest::Approx(c.m_consistent - 1.0).epsilon(1e-12));
}

TEST_CASE("steady field amplitude") {
  SystemParams p = reference();
  p.loss = 0.0;
  p.drive = 1.0;
  BranchPoint b;
  b.g0 = 1.0;
  b.s_x = -0.5;
  const auto a = steady_field_amplitude(b, p);
  CHECK(a.real() == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(std::abs(a.imag()) <= 1e-15);
  CHECK(a.real() == doctest::Approx(photon_from_sx(-0.5, p)).epsilon(1e-15));
  b.s_x = 0.0;
  CHECK(steady_field_amplitude(b, p) == std::complex<double>(0.0, 0.0));
  p.detuning = 0.0;
  CHECK_THROWS_AS(steady_field_amplitude(b, p), InvalidParameters);

  // quadrature readback and Cauchy-Schwarz on real branches
  for (double varphi : {0.0, 0.3, std::numbers::pi / 2}) {
    SystemParams q = with_drive(reference(), 1.1);
    q.drive_phase = varphi;
    for (const auto& r : find_fixed_points(q)) {
      const auto e = std::polar(1.0, varphi);
      const double readback = 0.5 * (std::conj(r.a_s) * e + r.a_s * std::conj(e)).real();
      CHECK(std::abs(readback - r.phi_s) <= 1e-10);
      CHECK(std::norm(r.a_s) >= r.phi_s * r.phi_s - 1e-15);
    }
  }
}

TEST_CASE("drive phase changes only the amplitude phase") {
  const SystemParams base = with_drive(reference(), 0.87);
  const auto roots0 = find_fixed_points(base);
  for (double varphi : {std::numbers::pi / 4, std::numbers::pi / 2}) {
    SystemParams q = base;
    q.drive_phase = varphi;
    const auto roots = find_fixed_points(q);
    REQUIRE(roots.size() == roots0.size());
    for (std::size_t k = 0; k < roots.size(); ++k) {
      CHECK(roots[k].phi_s == roots0[k].phi_s);
      CHECK(roots[k].s_x == roots0[k].s_x);
      CHECK(roots[k].c_s.m_consistent == roots0[k].c_s.m_consistent);
      CHECK(std::abs(roots[k].a_s - roots0[k].a_s * std::polar(1.0, varphi)) <= 1e-12);
    }
  }
}

TEST_CASE("critical points: g2 closed form on random parameter sets") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> delta(0.0, 0.95), det(0.2, 1.5), loss(0.0, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    SystemParams p{det(rng), loss(rng), delta(rng), 1.0, 0.0,
                   trial % 2 ? ChainSize{Finite{100}} : ChainSize{ThermodynamicLimit{}}};
    const CriticalPoints cp = critical_points(p);
    const double closed = vacuum_marginality_closed_form(p);
    CAPTURE(trial);
    CHECK(std::abs(cp.g2 - closed) / closed <= 1e-6);
    CHECK(cp.g1 <= cp.g2);
  }
}

TEST_CASE("critical points: g1 against the parametric branch minimum") {
  for (double delta : {0.1, 0.3, 0.6, 0.9, 1.5}) {
    SystemParams p = reference(ThermodynamicLimit{});
    p.splitting = delta;
    const CriticalPoints cp = critical_points(p);
    CAPTURE(delta);
    CHECK(std::abs(cp.g1 - parametric_g1(p)) / cp.g1 <= 1e-6);
  }
}

TEST_CASE("critical points: merge regime and not-found") {
  SystemParams p = reference();
  CHECK_FALSE(critical_points(p).merged);
  p.splitting = 1.5;
  CHECK(critical_points(p).merged);
  p = reference();
  p.detuning = -0.8;  // vacuum never destabilises for red detuning
  CHECK_THROWS_AS(critical_points(p), NotFoundError);
  CHECK(std::isnan(vacuum_marginality_closed_form(p)));
}

TEST_CASE("hysteresis sweep") {
  const SystemParams p = reference();
  const CriticalPoints cp = critical_points(p);
  std::vector<double> grid;
  for (int i = 0; i <= 150; ++i) grid.push_back(0.01 * i);
  const auto sweep = sweep_hysteresis(p, grid);

  auto first_jump = [&](const std::vector<BranchPoint>& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i)
      if (trace[i].phi_s != 0.0) return grid[i];
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double up = first_jump(sweep.forward);
  const double down = first_jump(sweep.backward);
  CHECK(up > down);
  CHECK(up >= cp.g2);
  CHECK(up - cp.g2 < 0.01 + 1e-12);
  CHECK(down >= cp.g1);
  CHECK(down - cp.g1 < 0.01 + 1e-12);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(sweep.forward[i].stable);
    CHECK(sweep.backward[i].stable);
    CHECK(sweep.forward[i].phi_s >= 0.0);
  }

  SUBCASE("serial and parallel agree exactly") {
    const auto par = sweep_hysteresis(p, grid, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      REQUIRE(par.branches[i].size() == sweep.branches[i].size());
      for (std::size_t k = 0; k < par.branches[i].size(); ++k)
        CHECK(par.branches[i][k].phi_s == sweep.branches[i][k].phi_s);
      CHECK(par.forward[i].phi_s == sweep.forward[i].phi_s);
      CHECK(par.backward[i].phi_s == sweep.backward[i].phi_s);
    }
  }
  SUBCASE("no hysteresis in the continuous regime") {
    SystemParams q = p;
    q.splitting = 1.5;
    const auto s = sweep_hysteresis(q, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(s.forward[i].phi_s == s.backward[i].phi_s);
  }
  SUBCASE("grid below g1 stays on the vacuum") {
    const auto s = sweep_hysteresis(p, {0.1, 0.2, 0.5, 0.8});
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(s.forward[i].phi_s == 0.0);
      CHECK(s.backward[i].phi_s == 0.0);
    }
  }
  CHECK_THROWS_AS(sweep_hysteresis(p, {0.2, 0.1}), InvalidParameters);
}
