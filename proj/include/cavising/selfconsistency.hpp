#ifndef CAVISING_SELFCONSISTENCY_HPP
#define CAVISING_SELFCONSISTENCY_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cavising/ising.hpp"

namespace cavising {

/// Driven Ising chain in a lossy cavity. J (`coupling`) is the energy unit.
/// Defaults are the bistable reference set (Delta=0.8, delta=0.3, kappa=0.5, N=200).
struct SystemParams {
  double detuning = 0.8;    // Delta
  double loss = 0.5;        // kappa
  double splitting = 0.3;   // delta
  double coupling = 1.0;    // J
  double drive = 0.0;       // g0
  ChainSize size = Finite{200};
  double drive_phase = 0.0;  // varphi, radians

  /// Delta^2 + kappa^2 / 4
  double denominator() const { return detuning * detuning + 0.25 * loss * loss; }
};

void validate(const SystemParams& p);

SystemParams with_drive(SystemParams p, double g0);

/// Spin-sector subproblem seen by the chain when the cavity field is phi.
IsingChainParams chain_params(const SystemParams& p, double phi);

enum class CavityPhase { Normal, SuperRadiant };
std::string to_string(CavityPhase phase);

struct StabilityCoefficients {
  double printed = 1.0;        // 1 + g0 dS/dphi / D
  double m_consistent = 1.0;   // 1 + Delta g0 dS/dphi / D, sign decides stability
};

/// One self-consistent steady state.
struct BranchPoint {
  double g0 = 0.0;
  double phi_s = 0.0;
  double s_x = 0.0;
  double dsx_dphi = 0.0;
  StabilityCoefficients c_s;
  bool stable = false;
  CavityPhase cavity_phase = CavityPhase::Normal;
  SpinPhase spin_phase = SpinPhase::Ferromagnetic;
  std::complex<double> a_s;  // steady field amplitude / sqrt(N)
};

/// phi_s = -Delta g0 S_x / (Delta^2 + kappa^2/4)
double photon_from_sx(double s_x, const SystemParams& p);

/// phi - photon_from_sx(S_x(b_x = 2 g0 phi)); steady states are its zeros.
double residual(double phi, const SystemParams& p);

StabilityCoefficients stability_coefficient(double phi_star, const SystemParams& p);

/// a_s / sqrt(N) = -i g0 S_x e^{i varphi} / (i Delta + kappa/2)
std::complex<double> steady_field_amplitude(const BranchPoint& branch, const SystemParams& p);

/// Builds the full BranchPoint record for a known root.
BranchPoint make_branch_point(double phi, const SystemParams& p);

struct FixedPointOptions {
  int grid_points = 2001;
  double bisection_tol = 1e-10;
  double dedupe_tol = 1e-8;
  /// Relative padding of the scan interval beyond the analytic bound.
  double margin = 0.05;
};

/**
  All steady states at p.drive. Roots are bracketed on a uniform phi grid
  over the analytic bound |phi| <= |Delta| g0 / D (plus margin) and refined by
  bisection; tangent pairs closer than the grid spacing are caught by refining
  each discrete extremum of the residual. Output order: vacuum first, then
  pairs by increasing |phi| with the phi > 0 member first.
*/
std::vector<BranchPoint> find_fixed_points(const SystemParams& p,
                                           const FixedPointOptions& opt = {});

/// Number of stable roots with phi != 0.
int count_stable_superradiant(const std::vector<BranchPoint>& roots);

/// Stable super-radiant root with phi > 0 (largest phi if several).
std::optional<BranchPoint> stable_superradiant(const std::vector<BranchPoint>& roots);

struct HysteresisSweep {
  std::vector<double> g0;
  std::vector<std::vector<BranchPoint>> branches;  // all roots per grid point
  std::vector<BranchPoint> forward;   // increasing g0, starts on the vacuum
  std::vector<BranchPoint> backward;  // decreasing g0, stored in grid order
};

HysteresisSweep sweep_hysteresis(const SystemParams& p, const std::vector<double>& g0_grid,
                                 int threads = 1, const FixedPointOptions& opt = {});

struct CriticalPointOptions {
  double g_max = 3.0;
  int max_range_doublings = 10;
  double rel_tol = 1e-8;
  double merge_tol = 1e-6;
  FixedPointOptions roots;
};

struct CriticalPoints {
  double g1 = 0.0;
  double g2 = 0.0;
  bool merged = false;
};

/**
  g2: vacuum marginality, C_s(phi = 0, g0) = 0, by bisection in g0.
  g1: smallest g0 at which stable super-radiant roots exist, by bisection on
  the stable-root count. Throws NotFoundError if the vacuum never destabilises
  in the searched range.
*/
CriticalPoints critical_points(const SystemParams& p, const CriticalPointOptions& opt = {});

/// sqrt(D / (-2 Delta dS_x/db_x|_0)); NaN when the vacuum never destabilises.
double vacuum_marginality_closed_form(const SystemParams& p);

}  // namespace cavising

#endif
