#pragma once

#include <span>
#include <vector>

#include "wavekin/dynamics.hpp"
#include "wavekin/lattice.hpp"

namespace wavekin {

/// Weak-nonlinearity expansion a(T) = a0 + eps*a1 + eps^2*a2 evaluated in
/// closed form; the eps factors live with the caller.
struct ExpansionResult {
  std::vector<Complex> a0;
  std::vector<Complex> a1;
  std::vector<Complex> a2;
  double horizon = 0.0;
};

/// First iterate: exact finite sum with Delta kernels over the triad table.
std::vector<Complex> first_order(std::span<const Complex> a0, const TriadTable& table,
                                 double horizon);

/// Second iterate: exact double sum over triad pairs with E kernels.
std::vector<Complex> second_order(std::span<const Complex> a0, const TriadTable& table,
                                  double horizon);

ExpansionResult expand(const WaveState& initial, const TriadTable& table, double horizon);

/// Endpoint residual ||a_direct(T) - (a0 + e a1 + e^2 a2)|| per epsilon, with
/// the log-log slope fitted across the sweep. Used by the expansion-check
/// subcommand and the order-of-accuracy tests.
struct ExpansionScan {
  std::vector<double> epsilon;
  std::vector<double> residual;
  double slope = 0.0;
};

ExpansionScan expansion_residual_scan(const WaveState& initial, const TriadTable& table,
                                      double horizon, std::span<const double> epsilons,
                                      double step);

}  // namespace wavekin
