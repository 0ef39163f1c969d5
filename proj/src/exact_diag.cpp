// Reference ground state of the spin chain on the full 2^n Hilbert space.
//
// The Hamiltonian is applied matrix-free in the sigma_z product basis
// (bit i set <=> spin i down). The chain has the exact Z2 symmetry
// P = prod_i (n . sigma_i) with n the unit vector of the (b_x, delta) field;
// the ground state lives in the P = +1 sector, which also lifts the
// ferromagnetic near-doublet. Lanczos with full reorthogonalisation is run
// inside that sector.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cavising/errors.hpp"
#include "cavising/ising.hpp"

namespace cavising {

namespace {

using Vec = std::vector<double>;

class ChainOperator {
 public:
  ChainOperator(int sites, double delta, double b_x, double j)
      : sites_(sites), dim_(std::size_t{1} << sites), b_x_(b_x), j_(j), diag_(dim_) {
    for (std::size_t s = 0; s < dim_; ++s) {
      double z_total = 0.0;
      for (int i = 0; i < sites_; ++i) z_total += spin_z(s, i);
      diag_[s] = -delta * z_total;
    }
    const double b_perp = std::hypot(delta, b_x);
    if (b_perp > 0.0) {
      axis_x_ = -b_x / b_perp;
      axis_z_ = delta / b_perp;
    }
  }

  std::size_t dim() const { return dim_; }

  // out = H v, with H = -delta Sum sz + b_x Sum sx - j Sum sy sy (periodic).
  void apply(const Vec& v, Vec& out) const {
    for (std::size_t s = 0; s < dim_; ++s) {
      double acc = diag_[s] * v[s];
      for (int i = 0; i < sites_; ++i) {
        const int next = (i + 1) % sites_;
        acc += b_x_ * v[s ^ bit(i)];
        // sy_i sy_k flips both spins with amplitude -z_i z_k.
        acc += j_ * spin_z(s, i) * spin_z(s, next) * v[s ^ bit(i) ^ bit(next)];
      }
      out[s] = acc;
    }
  }

  // v <- (v + P v) / 2
  void project_even(Vec& v, Vec& scratch) const {
    Vec pv = v;
    for (int i = 0; i < sites_; ++i) {
      for (std::size_t s = 0; s < dim_; ++s)
        scratch[s] = axis_z_ * spin_z(s, i) * pv[s] + axis_x_ * pv[s ^ bit(i)];
      pv.swap(scratch);
    }
    for (std::size_t s = 0; s < dim_; ++s) v[s] = 0.5 * (v[s] + pv[s]);
  }

  double mean_sx(const Vec& v) const {
    double total = 0.0;
    for (int i = 0; i < sites_; ++i)
      for (std::size_t s = 0; s < dim_; ++s) total += v[s] * v[s ^ bit(i)];
    return total / sites_;
  }

 private:
  static std::size_t bit(int i) { return std::size_t{1} << i; }
  static double spin_z(std::size_t s, int i) { return (s >> i) & 1U ? -1.0 : 1.0; }

  int sites_;
  std::size_t dim_;
  double b_x_;
  double j_;
  Vec diag_;
  double axis_x_ = 0.0;
  double axis_z_ = 1.0;
};

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

double exact_diag_sx(const IsingChainParams& p) {
  validate(p);
  const auto* finite = std::get_if<Finite>(&p.size);
  if (finite == nullptr)
    throw InvalidParameters("exact_diag_sx: needs a finite chain");
  if (finite->sites > kMaxExactDiagSites)
    throw InvalidParameters("exact_diag_sx: n=" + std::to_string(finite->sites) +
                            " exceeds the dense limit of " +
                            std::to_string(kMaxExactDiagSites));

  const ChainOperator h(finite->sites, std::abs(p.delta), p.b_x, p.j);
  const std::size_t dim = h.dim();
  const double scale = finite->sites * (std::abs(p.delta) + std::abs(p.b_x) + p.j);
  const double tolerance = 1e-13 * scale;
  const std::size_t max_steps = std::min<std::size_t>(dim, 400);

  Vec scratch(dim);
  Vec q(dim);
  for (std::size_t s = 0; s < dim; ++s)
    q[s] = 1.5 + std::sin(1.2345 * static_cast<double>(s) + 0.5);
  h.project_even(q, scratch);
  {
    const double norm = std::sqrt(dot(q, q));
    for (double& x : q) x /= norm;
  }

  std::vector<Vec> basis{q};
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd ground;
  Vec w(dim);

  for (std::size_t k = 0; k < max_steps; ++k) {
    h.apply(basis[k], w);
    alpha.push_back(dot(basis[k], w));
    h.project_even(w, scratch);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) axpy(-dot(b, w), b, w);
    const double next_beta = std::sqrt(dot(w, w));

    Eigen::Map<const Eigen::VectorXd> a(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(a, b, Eigen::ComputeEigenvectors);
    ground = tri.eigenvectors().col(0);
    const double residual = next_beta * std::abs(ground(ground.size() - 1));
    if (residual <= tolerance || next_beta <= 1e-14 * scale) break;
    if (k + 1 == max_steps)
      throw NumericalError("exact_diag_sx", "Lanczos did not converge (residual " +
                                                std::to_string(residual) + ")");
    beta.push_back(next_beta);
    for (double& x : w) x /= next_beta;
    basis.push_back(w);
  }

  Vec ritz(dim, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(ground.size()); ++i)
    axpy(ground(static_cast<Eigen::Index>(i)), basis[i], ritz);
  const double norm = std::sqrt(dot(ritz, ritz));
  for (double& x : ritz) x /= norm;
  return h.mean_sx(ritz);
}

}  // namespace cavising
