#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "wavekin/lattice.hpp"

namespace wavekin {

using Complex = std::complex<double>;

/// Complex mode amplitudes in the interaction representation at one instant.
struct WaveState {
  double t = 0.0;
  std::vector<Complex> a;
};

/// Fixed-step classical RK4 configuration. The step must resolve the fastest
/// oscillatory phase in the right-hand side: step * omega_max <= 0.5.
struct IntegratorConfig {
  double step = 0.0;
  double epsilon = 0.0;
};

void validate_integrator(const IntegratorConfig& cfg, const TriadTable& table);

/// Scratch buffers reused across right-hand-side evaluations of one trajectory.
struct RhsWorkspace {
  std::vector<Complex> phasor;       // e^{i omega_j t} per mode
  std::vector<Complex> stage_k;      // RK4 stage derivative
  std::vector<Complex> stage_state;  // displaced state
  std::vector<Complex> accum;
  void resize(std::size_t n);
};

/// d a / dt of the three-wave interaction-representation equations: for each
/// canonical triad (c; u, v),
///   a_c  gains -i e mult V a_u a_v e^{+i Omega t}
///   a_u  gains -2 i e conj(V) a_c conj(a_v) e^{-i Omega t}
///   a_v  gains -2 i e conj(V) a_c conj(a_u) e^{-i Omega t}
/// with Omega the cached frequency mismatch. `phasor` must hold e^{i omega_j t}.
void rhs_with_phasors(std::span<const Complex> a, std::span<const Complex> phasor,
                      const TriadTable& table, double epsilon, std::span<Complex> out);

/// Convenience wrapper computing the phasors from state.t.
std::vector<Complex> rhs(const WaveState& state, const TriadTable& table, double epsilon);

/// One RK4 step of size h (h may be negative in reversal studies). Oscillatory
/// factors are evaluated exactly at each stage time.
void rk4_step(WaveState& state, const TriadTable& table, double epsilon, double h,
              RhsWorkspace& ws);

/// Advance to t_end with fixed steps (final partial step allowed).
/// Deterministic for fixed inputs. Throws BlowUpError when any |a| exceeds
/// 1e6 times the initial rms amplitude.
WaveState integrate(WaveState state, const TriadTable& table, const IntegratorConfig& cfg,
                    double t_end);

/// Lab-frame Hamiltonian evaluated through the interaction-representation
/// variables (explicit time-dependent phases): conserved along exact flow.
double hamiltonian(const WaveState& state, const TriadTable& table, double epsilon);

/// Momentum P = sum_l k_l |a_l|^2 (d-vector, second component 0 for d = 1).
std::array<double, 2> momentum(const WaveState& state, const ModeSet& ms);

}  // namespace wavekin
