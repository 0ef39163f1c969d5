#include "cavising/fluctuations.hpp"

#include <cmath>
#include <string>

#include "cavising/errors.hpp"
#include "cavising/parallel.hpp"

namespace cavising {

using namespace std::complex_literals;

StabilityMatrix stability_matrix(double detuning, double loss, double slope) {
  StabilityMatrix sm;
  sm.slope = slope;
  sm.m << -1i * (detuning + slope) - 0.5 * loss, -1i * slope,
          1i * slope, 1i * (detuning + slope) - 0.5 * loss;
  return sm;
}

StabilityMatrix stability_matrix(const BranchPoint& branch, const SystemParams& params) {
  return stability_matrix(params.detuning, params.loss, 0.5 * params.drive * branch.dsx_dphi);
}

std::array<cplx, 2> eigenvalues_closed_form(const StabilityMatrix& sm, const SystemParams& params) {
  const double delta = params.detuning;
  // 4 Delta g0 dS/dphi = 8 Delta * slope
  const cplx root = std::sqrt(cplx(4.0 * delta * delta + 8.0 * delta * sm.slope, 0.0));
  return {(-params.loss - 1i * root) / 2.0, (-params.loss + 1i * root) / 2.0};
}

Biorthogonal biorthogonal_eigvecs(const StabilityMatrix& sm) {
  const Eigen::Matrix2cd& m = sm.m;
  const cplx half_trace = 0.5 * m.trace();
  const cplx q = std::sqrt(m.determinant() - half_trace * half_trace);
  Biorthogonal out;
  out.omega = {half_trace - 1i * q, half_trace + 1i * q};
  if (std::abs(out.omega[0] - out.omega[1]) <= 1e-10)
    throw DegeneracyError("eigenvalues coincide (|w1 - w2| = " +
                          std::to_string(std::abs(out.omega[0] - out.omega[1])) + ")");
  for (int k = 0; k < 2; ++k) {
    // Two candidate kernels of (M - w); keep the better conditioned one.
    Eigen::Vector2cd a(m(0, 1), out.omega[k] - m(0, 0));
    Eigen::Vector2cd b(out.omega[k] - m(1, 1), m(1, 0));
    Eigen::Vector2cd v = a.norm() >= b.norm() ? a : b;
    // Phase gauge: largest component real and positive.
    const cplx lead = std::abs(v(0)) >= std::abs(v(1)) ? v(0) : v(1);
    out.right.col(k) = v * (std::abs(lead) / lead) / v.norm();
  }
  out.left = out.right.inverse();
  return out;
}

FluctuationNumber fluct_photon_number(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right,
                                      const std::array<cplx, 2>& omega, double loss) {
  FluctuationNumber out;
  if (omega[0].real() >= 0.0 || omega[1].real() >= 0.0) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  cplx sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cplx denom = omega[i] + omega[j];
      if (std::abs(denom) < 1e-12) {
        out.divergent = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
      sum -= loss / denom * left(i, 0) * left(j, 1) * right(1, i) * right(0, j);
    }
  }
  out.imag = sum.imag();
  if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum.real())))
    throw NumericalError("fluct_photon_number",
                         "photon number has imaginary part " + std::to_string(sum.imag()));
  if (sum.real() < -1e-10)
    throw NumericalError("fluct_photon_number",
                         "negative photon number " + std::to_string(sum.real()));
  out.value = std::max(0.0, sum.real());
  return out;
}

FluctuationSpectrum fluctuation_spectrum(const BranchPoint& branch, const SystemParams& params) {
  const auto sm = stability_matrix(branch, params);
  const auto bio = biorthogonal_eigvecs(sm);
  FluctuationSpectrum out;
  out.omega = eigenvalues_closed_form(sm, params);
  out.left = bio.left;
  out.right = bio.right;
  out.n_fluct = fluct_photon_number(bio.left, bio.right, bio.omega, params.loss);
  return out;
}

std::string to_string(CriticalSide side) { return side == CriticalSide::AtG1 ? "g1" : "g2"; }

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidParameters("fit_power_law: need two equally long series of >= 2 points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidParameters("fit_power_law: samples must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    const double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ExponentFit critical_exponent_fit(const SystemParams& params, const CriticalPoints& cp,
                                  CriticalSide side, const ExponentOptions& opt) {
  validate(params);
  if (!(opt.window_lo > 0.0) || !(opt.window_hi > opt.window_lo) || opt.samples < 2)
    throw InvalidParameters("critical_exponent_fit: bad fit window");

  ExponentFit out;
  out.side = side;
  out.g_c = side == CriticalSide::AtG1 ? cp.g1 : cp.g2;
  out.window_lo = opt.window_lo;
  out.window_hi = opt.window_hi;

  const double log_lo = std::log(opt.window_lo);
  const double log_hi = std::log(opt.window_hi);
  const auto samples = parallel_map(
      static_cast<std::size_t>(opt.samples), opt.threads, [&](std::size_t k) {
        const double offset = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                                    static_cast<double>(opt.samples - 1));
        const double sign = side == CriticalSide::AtG1 ? 1.0 : -1.0;
        const SystemParams at = with_drive(params, out.g_c * (1.0 + sign * offset));
        std::optional<BranchPoint> branch;
        if (side == CriticalSide::AtG2) {
          branch = make_branch_point(0.0, at);
        } else {
          branch = stable_superradiant(find_fixed_points(at, opt.roots));
        }
        FluctuationNumber n{0.0, 0.0, true};
        if (branch && branch->stable) n = fluctuation_spectrum(*branch, at).n_fluct;
        return std::pair{offset, n};
      });

  std::vector<double> dg;
  for (const auto& [offset, n] : samples) {
    if (n.divergent || !(n.value > 0.0)) continue;
    out.offsets.push_back(offset);
    out.n_fluct.push_back(n.value);
    dg.push_back(offset * out.g_c);
  }
  out.samples_used = static_cast<int>(dg.size());
  if (out.samples_used < opt.min_samples)
    throw FitWindowError("only " + std::to_string(out.samples_used) + " of " +
                         std::to_string(opt.samples) + " samples are finite near " +
                         to_string(side));
  out.fit = fit_power_law(dg, out.n_fluct);
  out.trusted = out.fit.r2 > opt.trusted_r2;
  return out;
}

}  // namespace cavising
