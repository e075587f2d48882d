#pragma once

#include <span>
#include <vector>

#include "wavekin/lattice.hpp"

namespace wavekin {

/// Waveaction per mode at one slow-time instant.
struct SpectrumState {
  double t = 0.0;
  std::vector<double> waveaction;
};

/// Closure coefficients of the kinetic and one-mode PDF equations, evaluated
/// on the broadened resonant manifold: the collision integrals become lattice
/// sums with measure (2*pi/L)^d per resolved integral and delta(omega)
/// replaced by broadened_delta(Omega, T_b).
struct KineticCoeffs {
  std::vector<double> eta;    // intensity / time, >= 0 for n >= 0
  std::vector<double> gamma;  // 1 / time (may go negative for contrived n)
  double broadening_time = 0.0;
};

double eta_coeff(int j, std::span<const double> n, const TriadTable& table, double epsilon,
                 double t_broad);
double gamma_coeff(int j, std::span<const double> n, const TriadTable& table, double epsilon,
                   double t_broad);
KineticCoeffs kinetic_coeffs(std::span<const double> n, const TriadTable& table,
                             double epsilon, double t_broad);

struct SpectrumTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // waveaction per time
};

/// RK4 on dn/dt = eta(n) - gamma(n) n in the slow time. Negative excursions
/// are floored at zero with a logged warning. dt = 0 picks a step from the
/// initial relaxation rates.
SpectrumTrajectory evolve_spectrum(const SpectrumState& n0, const TriadTable& table,
                                   double epsilon, double t_broad, double t_end,
                                   double dt = 0.0, int snapshots = 65);

/// Discretized one-mode amplitude PDF: uniform cells on [0, s_max], cell
/// averages. Mass is conserved exactly by the solver (closed box); the
/// positivity clamp ledger records any limiter action.
struct PdfGrid1D {
  double s_max = 1.0;
  std::vector<double> density;
  double boundary_outflux = 0.0;
  double clamp_correction = 0.0;
  int mode = -1;

  int cells() const { return static_cast<int>(density.size()); }
  double cell_width() const { return s_max / static_cast<double>(cells()); }
  double cell_center(int i) const { return (i + 0.5) * cell_width(); }
  double mass() const;
  double moment(int p) const;  // integral of s^p P(s) ds

  static PdfGrid1D exponential(double mean, double s_max, int cells);
  static PdfGrid1D delta_like(double s_peak, double s_max, int cells, int spread_cells = 3);
};

double pdf_cfl_limit(const PdfGrid1D& grid, double eta, double gamma);

/// One conservative finite-volume step of
///   dP/dt + dF/ds = 0,  F = -s (gamma P + eta dP/ds),
/// forward Euler with central face values. The s = 0 face flux vanishes
/// identically; the discrete first-moment identity
///   d<s>/dt = eta * mass - gamma * <s>
/// holds to rounding except for the truncated-tail cells.
PdfGrid1D pdf_step(const PdfGrid1D& grid, double eta, double gamma, double dt);

/// Steady one-mode PDF with constant probability flux F on [s0, s_max]:
///   gamma P + eta P' = -F / s,   s0 > 0,
/// solved by quadrature on top of the homogeneous exponential, normalized to
/// unit mass on [s0, s_max].
struct FluxPdfCurve {
  std::vector<double> s;
  std::vector<double> p;
  double flux = 0.0;
  double c0 = 0.0;  // homogeneous-solution coefficient fixed by normalization
  bool nonnegative = true;
};

FluxPdfCurve steady_pdf_with_flux(double eta, double gamma, double flux, double s0,
                                  double s_max, int points = 2049);

}  // namespace wavekin
