#include "cavising/selfconsistency.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cavising/errors.hpp"
#include "cavising/parallel.hpp"

namespace cavising {

namespace {

constexpr double kSuperRadiantTol = 1e-8;

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Root {
  double phi;
  int slope;  // sign of d(residual)/d(phi) across the bracket
};

// Bisection on [a, b] where the signs at the ends are given explicitly (the
// vacuum end of a bracket carries sign(C_s) rather than the exact zero).
double bisect(const SystemParams& p, double a, int sign_a, double b, double tol) {
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const int s = sign_of(residual(mid, p));
    if (s == 0) return mid;
    if (s == sign_a) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void validate(const SystemParams& p) {
  const bool finite = std::isfinite(p.detuning) && std::isfinite(p.loss) &&
                      std::isfinite(p.splitting) && std::isfinite(p.coupling) &&
                      std::isfinite(p.drive) && std::isfinite(p.drive_phase);
  if (!finite) throw InvalidParameters("system parameters must be finite");
  if (p.coupling <= 0.0) throw InvalidParameters("coupling J must be > 0");
  if (p.loss < 0.0) throw InvalidParameters("loss kappa must be >= 0");
  if (p.drive < 0.0) throw InvalidParameters("drive g0 must be >= 0");
  if (p.splitting < 0.0) throw InvalidParameters("splitting delta must be >= 0");
  if (p.detuning == 0.0 && p.loss == 0.0)
    throw InvalidParameters("detuning and loss cannot both vanish");
  validate(IsingChainParams{p.splitting, 0.0, p.coupling, p.size});
}

SystemParams with_drive(SystemParams p, double g0) {
  p.drive = g0;
  return p;
}

IsingChainParams chain_params(const SystemParams& p, double phi) {
  return IsingChainParams{p.splitting, 2.0 * p.drive * phi, p.coupling, p.size};
}

std::string to_string(CavityPhase phase) {
  return phase == CavityPhase::Normal ? "normal" : "superradiant";
}

double photon_from_sx(double s_x, const SystemParams& p) {
  const double d = p.denominator();
  if (d == 0.0) throw InvalidParameters("detuning and loss cannot both vanish");
  return -p.detuning * p.drive * s_x / d;
}

double residual(double phi, const SystemParams& p) {
  return phi - photon_from_sx(ground_state_sx(chain_params(p, phi)), p);
}

StabilityCoefficients stability_coefficient(double phi_star, const SystemParams& p) {
  const double d = p.denominator();
  if (d == 0.0) throw InvalidParameters("detuning and loss cannot both vanish");
  if (p.drive == 0.0) return {};
  const double ds_dphi = 2.0 * p.drive * dsx_dbx(chain_params(p, phi_star));
  return {1.0 + p.drive * ds_dphi / d, 1.0 + p.detuning * p.drive * ds_dphi / d};
}

std::complex<double> steady_field_amplitude(const BranchPoint& branch, const SystemParams& p) {
  using namespace std::complex_literals;
  if (p.denominator() == 0.0)
    throw InvalidParameters("detuning and loss cannot both vanish");
  const std::complex<double> phase = std::exp(1i * p.drive_phase);
  return -1i * p.drive * branch.s_x * phase / (1i * p.detuning + 0.5 * p.loss);
}

BranchPoint make_branch_point(double phi, const SystemParams& p) {
  BranchPoint b;
  b.g0 = p.drive;
  b.phi_s = phi;
  const auto chain = chain_params(p, phi);
  const auto obs = observables(chain);
  b.s_x = obs.s_x;
  b.spin_phase = obs.phase;
  b.dsx_dphi = p.drive == 0.0 ? 0.0 : 2.0 * p.drive * dsx_dbx(chain);
  const double d = p.denominator();
  b.c_s = {1.0 + p.drive * b.dsx_dphi / d, 1.0 + p.detuning * p.drive * b.dsx_dphi / d};
  b.stable = b.c_s.m_consistent > 0.0;
  b.cavity_phase =
      std::abs(phi) > kSuperRadiantTol ? CavityPhase::SuperRadiant : CavityPhase::Normal;
  b.a_s = steady_field_amplitude(b, p);
  return b;
}

std::vector<BranchPoint> find_fixed_points(const SystemParams& p, const FixedPointOptions& opt) {
  validate(p);
  if (opt.grid_points < 5) throw InvalidParameters("find_fixed_points: grid needs >= 5 points");
  const double bound = std::abs(p.detuning) * p.drive / p.denominator();
  if (bound == 0.0) return {make_branch_point(0.0, p)};

  // Odd point count keeps phi = 0 on the grid, exactly at the centre.
  const int n = opt.grid_points % 2 == 0 ? opt.grid_points + 1 : opt.grid_points;
  const int centre = n / 2;
  const double phi_max = bound * (1.0 + opt.margin);
  std::vector<double> phi(n), r(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = phi_max * static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
    r[i] = i == centre ? 0.0 : residual(phi[i], p);
  }

  // Next to the vacuum the residual behaves like C_s(0) * phi.
  const int vacuum_slope = sign_of(stability_coefficient(0.0, p).m_consistent);
  auto sign_at = [&](int i, bool right_of_zero) {
    if (i != centre) return sign_of(r[i]);
    return right_of_zero ? vacuum_slope : -vacuum_slope;
  };

  std::vector<Root> roots{{0.0, vacuum_slope}};
  for (int i = 0; i + 1 < n; ++i) {
    const int sa = sign_at(i, true);
    const int sb = sign_at(i + 1, false);
    if (sa == 0 || sb == 0 || sa == sb) continue;
    roots.push_back({bisect(p, phi[i], sa, phi[i + 1], opt.bisection_tol), sb - sa > 0 ? 1 : -1});
  }

  // Tangent pairs: a discrete extremum whose refined value crosses zero.
  for (int i = 1; i + 1 < n; ++i) {
    if (i - 1 == centre || i == centre || i + 1 == centre) continue;
    const int s = sign_of(r[i]);
    if (s == 0 || sign_of(r[i - 1]) != s || sign_of(r[i + 1]) != s) continue;
    if ((r[i] - r[i - 1]) * (r[i + 1] - r[i]) >= 0.0) continue;
    // Extremum points towards zero only if |r| dips there.
    if (std::abs(r[i]) > std::abs(r[i - 1]) || std::abs(r[i]) > std::abs(r[i + 1])) continue;
    const auto [x_ext, f_ext] = boost::math::tools::brent_find_minima(
        [&](double x) { return s * residual(x, p); }, phi[i - 1], phi[i + 1],
        std::numeric_limits<double>::digits);
    if (f_ext >= 0.0) continue;
    roots.push_back({bisect(p, phi[i - 1], s, x_ext, opt.bisection_tol), -s});
    roots.push_back({bisect(p, x_ext, -s, phi[i + 1], opt.bisection_tol), s});
  }

  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.phi < b.phi; });
  std::vector<Root> unique;
  for (const Root& root : roots) {
    if (!unique.empty() && root.phi - unique.back().phi <= opt.dedupe_tol) {
      if (root.phi == 0.0) unique.back() = root;
      continue;
    }
    unique.push_back(root);
  }
  // Simple roots of a continuous function alternate in slope.
  for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
    if (unique[k].slope != 0 && unique[k].slope == unique[k + 1].slope) {
      throw ResolutionError("missed a root between phi=" + std::to_string(unique[k].phi) +
                            " and phi=" + std::to_string(unique[k + 1].phi) +
                            " at g0=" + std::to_string(p.drive) + "; use a denser grid than " +
                            std::to_string(n) + " points");
    }
  }

  std::sort(unique.begin(), unique.end(), [](const Root& a, const Root& b) {
    if (std::abs(a.phi) != std::abs(b.phi)) return std::abs(a.phi) < std::abs(b.phi);
    return a.phi > b.phi;
  });
  std::vector<BranchPoint> out;
  out.reserve(unique.size());
  for (const Root& root : unique) out.push_back(make_branch_point(root.phi, p));
  return out;
}

int count_stable_superradiant(const std::vector<BranchPoint>& roots) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [](const BranchPoint& b) {
    return b.stable && b.cavity_phase == CavityPhase::SuperRadiant;
  }));
}

std::optional<BranchPoint> stable_superradiant(const std::vector<BranchPoint>& roots) {
  std::optional<BranchPoint> best;
  for (const auto& b : roots) {
    if (!b.stable || b.cavity_phase != CavityPhase::SuperRadiant || b.phi_s <= 0.0) continue;
    if (!best || b.phi_s > best->phi_s) best = b;
  }
  return best;
}

namespace {

std::optional<BranchPoint> closest_stable_superradiant(const std::vector<BranchPoint>& roots,
                                                       double previous_phi) {
  std::optional<BranchPoint> best;
  for (const auto& b : roots) {
    if (!b.stable || b.cavity_phase != CavityPhase::SuperRadiant || b.phi_s <= 0.0) continue;
    if (!best || std::abs(b.phi_s - previous_phi) < std::abs(best->phi_s - previous_phi))
      best = b;
  }
  return best;
}

}  // namespace

HysteresisSweep sweep_hysteresis(const SystemParams& p, const std::vector<double>& g0_grid,
                                 int threads, const FixedPointOptions& opt) {
  validate(p);
  for (std::size_t i = 1; i < g0_grid.size(); ++i)
    if (!(g0_grid[i] > g0_grid[i - 1]))
      throw InvalidParameters("sweep_hysteresis: g0 grid must be strictly increasing");

  HysteresisSweep sweep;
  sweep.g0 = g0_grid;
  sweep.branches = parallel_map(g0_grid.size(), threads, [&](std::size_t i) {
    return find_fixed_points(with_drive(p, g0_grid[i]), opt);
  });
  const std::size_t n = g0_grid.size();
  sweep.forward.resize(n);
  sweep.backward.resize(n);

  // Forward: sit on the vacuum until it destabilises, then follow the
  // super-radiant branch continuously.
  bool on_vacuum = true;
  double previous = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& roots = sweep.branches[i];
    std::optional<BranchPoint> next;
    if (on_vacuum) {
      if (!roots.front().stable) next = stable_superradiant(roots);
    } else {
      next = closest_stable_superradiant(roots, previous);
    }
    if (next) {
      on_vacuum = false;
      previous = next->phi_s;
      sweep.forward[i] = *next;
    } else {
      on_vacuum = true;
      sweep.forward[i] = roots.front();
    }
  }

  // Backward: start on the super-radiant branch (if present) and hold it
  // until it folds away.
  on_vacuum = true;
  previous = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    const auto& roots = sweep.branches[i];
    std::optional<BranchPoint> next;
    if (k == 0) {
      next = stable_superradiant(roots);
    } else if (on_vacuum) {
      if (!roots.front().stable) next = stable_superradiant(roots);
    } else {
      next = closest_stable_superradiant(roots, previous);
    }
    if (next) {
      on_vacuum = false;
      previous = next->phi_s;
      sweep.backward[i] = *next;
    } else {
      on_vacuum = true;
      sweep.backward[i] = roots.front();
    }
  }
  return sweep;
}

double vacuum_marginality_closed_form(const SystemParams& p) {
  validate(p);
  const double slope = dsx_dbx(chain_params(p, 0.0));
  const double denom = -2.0 * p.detuning * slope;
  if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(p.denominator() / denom);
}

CriticalPoints critical_points(const SystemParams& p, const CriticalPointOptions& opt) {
  validate(p);
  auto vacuum_cs = [&](double g) {
    return stability_coefficient(0.0, with_drive(p, g)).m_consistent;
  };

  double g_hi = opt.g_max;
  for (int k = 0; vacuum_cs(g_hi) >= 0.0; ++k) {
    if (k >= opt.max_range_doublings)
      throw NotFoundError("critical_points", "vacuum stays stable for g0 <= " +
                                                 std::to_string(g_hi) +
                                                 "; no super-radiant transition found");
    g_hi *= 2.0;
  }

  double lo = 0.0, hi = g_hi;
  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (vacuum_cs(mid) > 0.0 ? lo : hi) = mid;
  }
  CriticalPoints cp;
  cp.g2 = 0.5 * (lo + hi);

  auto stable_count = [&](double g) {
    return count_stable_superradiant(find_fixed_points(with_drive(p, g), opt.roots));
  };
  // Upper bracket for g1: the first g0 >= g2 with a stable super-radiant root.
  double upper = cp.g2;
  double step = opt.rel_tol * cp.g2;
  while (stable_count(upper) == 0) {
    upper = cp.g2 + step;
    step *= 4.0;
    if (upper > g_hi)
      throw NotFoundError("critical_points", "no stable super-radiant branch above g2=" +
                                                 std::to_string(cp.g2));
  }
  lo = 0.0;
  hi = upper;
  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (stable_count(mid) > 0 ? hi : lo) = mid;
  }
  cp.g1 = std::min(0.5 * (lo + hi), cp.g2);
  cp.merged = std::abs(cp.g2 - cp.g1) / cp.g2 < opt.merge_tol;
  return cp;
}

}  // namespace cavising
