#ifndef CAVISING_FLUCTUATIONS_HPP
#define CAVISING_FLUCTUATIONS_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cavising/selfconsistency.hpp"

namespace cavising {

using cplx = std::complex<double>;

/// Linearised cavity-fluctuation dynamics dV/dt = M V + xi, V = (da, da^dag).
/// `slope` is g0 * (dS_x/dphi) / 2.
struct StabilityMatrix {
  Eigen::Matrix2cd m;
  double slope = 0.0;
};

/// M = [[-i(Delta+s) - kappa/2, -i s], [i s, i(Delta+s) - kappa/2]].
StabilityMatrix stability_matrix(double detuning, double loss, double slope);
StabilityMatrix stability_matrix(const BranchPoint& branch, const SystemParams& params);

/// omega_{1,2} = (-kappa -+ i sqrt(4 Delta^2 + 4 Delta g0 dS/dphi)) / 2, principal sqrt.
std::array<cplx, 2> eigenvalues_closed_form(const StabilityMatrix& sm, const SystemParams& params);

struct Biorthogonal {
  std::array<cplx, 2> omega;  // same ordering convention as the closed form
  Eigen::Matrix2cd left;      // rows: left eigenvectors
  Eigen::Matrix2cd right;     // columns: unit-norm right eigenvectors
};

/// Throws DegeneracyError when |omega_1 - omega_2| <= 1e-10.
Biorthogonal biorthogonal_eigvecs(const StabilityMatrix& sm);

struct FluctuationNumber {
  double value = 0.0;
  double imag = 0.0;  // imaginary residue before it was discarded
  bool divergent = false;
};

/// <da^dag da> = -Sum_ij kappa / (w_i + w_j) L_{i,1} L_{j,2} R_{2,i} R_{1,j}
/// (1-based indices). Divergent unless both Re w_i < 0.
FluctuationNumber fluct_photon_number(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right,
                                      const std::array<cplx, 2>& omega, double loss);

struct FluctuationSpectrum {
  std::array<cplx, 2> omega;
  Eigen::Matrix2cd left;
  Eigen::Matrix2cd right;
  FluctuationNumber n_fluct;
};

FluctuationSpectrum fluctuation_spectrum(const BranchPoint& branch, const SystemParams& params);

enum class CriticalSide { AtG1, AtG2 };
std::string to_string(CriticalSide side);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y against log x.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct ExponentOptions {
  double window_lo = 1e-4;
  double window_hi = 1e-2;
  int samples = 21;
  double trusted_r2 = 0.99;
  int min_samples = 10;
  int threads = 1;
  FixedPointOptions roots;
};

struct ExponentFit {
  CriticalSide side = CriticalSide::AtG2;
  double g_c = 0.0;
  PowerLawFit fit;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples_used = 0;
  bool trusted = false;
  std::vector<double> offsets;  // |g0 - g_c| / g_c of the used samples
  std::vector<double> n_fluct;
};

/**
  Samples <da^dag da> at log-spaced relative offsets from the critical
  drive on the approach side (vacuum branch below g2, stable super-radiant
  branch above g1) and fits the power law.
*/
ExponentFit critical_exponent_fit(const SystemParams& params, const CriticalPoints& cp,
                                  CriticalSide side, const ExponentOptions& opt = {});

}  // namespace cavising

#endif
