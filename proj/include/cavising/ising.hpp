#ifndef CAVISING_ISING_HPP
#define CAVISING_ISING_HPP

#include <string>
#include <variant>

namespace cavising {

struct Finite {
  int sites = 0;
  bool operator==(const Finite&) const = default;
};
struct ThermodynamicLimit {
  bool operator==(const ThermodynamicLimit&) const = default;
};
using ChainSize = std::variant<Finite, ThermodynamicLimit>;

std::string to_string(const ChainSize& size);

/**
  Spin sector of the mean-field problem: a periodic chain with

    H = -delta * Sum sz_i + b_x * Sum sx_i - j * Sum sy_i sy_{i+1}

  where b_x = 2 g0 phi_s is the field the cavity imprints on the chain.
  All energies are in the same (arbitrary) unit; only ratios matter.
*/
struct IsingChainParams {
  double delta = 0.0;
  double b_x = 0.0;
  double j = 1.0;
  ChainSize size = ThermodynamicLimit{};
};

enum class SpinPhase { Ferromagnetic, Paramagnetic, Critical };

std::string to_string(SpinPhase phase);

struct IsingObservables {
  double s_x = 0.0;
  double b_perp = 0.0;
  SpinPhase phase = SpinPhase::Paramagnetic;
};

/// Throws InvalidParameters if `p` breaks the chain invariants.
void validate(const IsingChainParams& p);

/// |B_perp| = sqrt(delta^2 + b_x^2).
double transverse_field_magnitude(const IsingChainParams& p);

/// Classifies the chain by comparing the coupling with the total field.
/// Within a relative band of 1e-9 around b_perp == j the chain is Critical.
SpinPhase classify_spin_phase(double b_perp, double j);

/**
  Ground-state magnetisation along the field of the standard transverse-field
  chain H = -j Sum sy sy - b_perp Sum sz. Finite sizes sum over the
  antiperiodic (even-parity) momenta; the thermodynamic limit integrates
  over k in [0, pi] with Gauss-Legendre panels graded towards k = 0.
*/
double field_axis_magnetization(double b_perp, double j, const ChainSize& size);

/// Per-spin <sigma_x> in the many-body ground state.
double ground_state_sx(const IsingChainParams& p);

/// dS_x/db_x at fixed delta, j, size (central differences + one Richardson step).
double dsx_dbx(const IsingChainParams& p);

IsingObservables observables(const IsingChainParams& p);

/// Reference value of ground_state_sx from a Lanczos ground state of the
/// full 2^n Hilbert space (n <= 14). Independent of the free-fermion route.
double exact_diag_sx(const IsingChainParams& p);

inline constexpr int kMaxExactDiagSites = 14;

}  // namespace cavising

#endif
