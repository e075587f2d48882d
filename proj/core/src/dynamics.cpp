#include "wavekin/dynamics.hpp"

#include <cmath>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

constexpr double kBlowUpFactor = 1e6;

void fill_phasors(std::span<const double> omega, double t, std::span<Complex> out) {
  for (std::size_t j = 0; j < omega.size(); ++j) out[j] = std::polar(1.0, omega[j] * t);
}

double rms_amplitude(std::span<const Complex> a) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace

void RhsWorkspace::resize(std::size_t n) {
  phasor.resize(n);
  stage_k.resize(n);
  stage_state.resize(n);
  accum.resize(n);
}

void validate_integrator(const IntegratorConfig& cfg, const TriadTable& table) {
  if (!(cfg.step > 0.0)) throw ValidationError("dynamics.step: must be > 0");
  const double wmax = table.omega_max();
  if (cfg.step * wmax > 0.5 + 1e-12) {
    throw ValidationError("dynamics.step: step * omega_max = " +
                          std::to_string(cfg.step * wmax) + " exceeds 0.5");
  }
}

void rhs_with_phasors(std::span<const Complex> a, std::span<const Complex> phasor,
                      const TriadTable& table, double epsilon, std::span<Complex> out) {
  if (a.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("rhs: state has " + std::to_string(a.size()) +
                          " modes, table expects " + std::to_string(table.n_modes));
  }
  for (Complex& z : out) z = {0.0, 0.0};
  if (epsilon == 0.0) return;

  const Complex minus_i(0.0, -1.0);
  for (const Triad& t : table.entries) {
    // e^{i Omega t} reconstructed from per-mode phasors: Omega = w_c - w_u - w_v.
    const Complex e_pos =
        phasor[static_cast<std::size_t>(t.sum)] *
        std::conj(phasor[static_cast<std::size_t>(t.lo)] * phasor[static_cast<std::size_t>(t.hi)]);
    const Complex w = t.coupling * e_pos;
    const Complex au = a[static_cast<std::size_t>(t.lo)];
    const Complex av = a[static_cast<std::size_t>(t.hi)];
    const Complex ac = a[static_cast<std::size_t>(t.sum)];
    out[static_cast<std::size_t>(t.sum)] += minus_i * (epsilon * t.mult) * w * au * av;
    const Complex z = (2.0 * epsilon) * std::conj(w) * ac;
    out[static_cast<std::size_t>(t.lo)] += minus_i * z * std::conj(av);
    if (t.lo != t.hi) out[static_cast<std::size_t>(t.hi)] += minus_i * z * std::conj(au);
  }
}

std::vector<Complex> rhs(const WaveState& state, const TriadTable& table, double epsilon) {
  if (state.a.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("rhs: state has " + std::to_string(state.a.size()) +
                          " modes, table expects " + std::to_string(table.n_modes));
  }
  std::vector<Complex> phasor(state.a.size());
  fill_phasors(table.omega, state.t, phasor);
  std::vector<Complex> out(state.a.size());
  rhs_with_phasors(state.a, phasor, table, epsilon, out);
  return out;
}

void rk4_step(WaveState& state, const TriadTable& table, double epsilon, double h,
              RhsWorkspace& ws) {
  const std::size_t n = state.a.size();
  ws.resize(n);
  const double h2 = 0.5 * h;

  // Stage phasors advance by exact half-step rotations.
  fill_phasors(table.omega, state.t, ws.phasor);
  std::vector<Complex>& k = ws.stage_k;
  std::vector<Complex>& y = ws.stage_state;
  std::vector<Complex>& acc = ws.accum;

  rhs_with_phasors(state.a, ws.phasor, table, epsilon, k);
  for (std::size_t j = 0; j < n; ++j) {
    acc[j] = k[j];
    y[j] = state.a[j] + h2 * k[j];
  }

  fill_phasors(table.omega, state.t + h2, ws.phasor);
  rhs_with_phasors(y, ws.phasor, table, epsilon, k);
  for (std::size_t j = 0; j < n; ++j) {
    acc[j] += 2.0 * k[j];
    y[j] = state.a[j] + h2 * k[j];
  }
  rhs_with_phasors(y, ws.phasor, table, epsilon, k);
  for (std::size_t j = 0; j < n; ++j) {
    acc[j] += 2.0 * k[j];
    y[j] = state.a[j] + h * k[j];
  }

  fill_phasors(table.omega, state.t + h, ws.phasor);
  rhs_with_phasors(y, ws.phasor, table, epsilon, k);
  for (std::size_t j = 0; j < n; ++j) {
    state.a[j] += (h / 6.0) * (acc[j] + k[j]);
  }
  state.t += h;
}

WaveState integrate(WaveState state, const TriadTable& table, const IntegratorConfig& cfg,
                    double t_end) {
  validate_integrator(cfg, table);
  if (t_end < state.t) throw ValidationError("integrate: t_end precedes state time");
  if (state.a.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("integrate: state/table mode count mismatch");
  }

  const double limit = kBlowUpFactor * std::max(rms_amplitude(state.a), 1e-300);
  RhsWorkspace ws;
  const double t0 = state.t;
  const double span = t_end - t0;
  const long long full = static_cast<long long>(std::floor(span / cfg.step + 1e-12));

  for (long long i = 0; i < full; ++i) {
    rk4_step(state, table, cfg.epsilon, cfg.step, ws);
    state.t = t0 + static_cast<double>(i + 1) * cfg.step;
    for (const Complex& z : state.a) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > limit) {
        throw BlowUpError(state.t);
      }
    }
  }
  const double rest = t_end - state.t;
  if (rest > 1e-12 * std::max(1.0, std::abs(t_end))) {
    rk4_step(state, table, cfg.epsilon, rest, ws);
  }
  state.t = t_end;
  return state;
}

double hamiltonian(const WaveState& state, const TriadTable& table, double epsilon) {
  double h = 0.0;
  for (std::size_t j = 0; j < state.a.size(); ++j) {
    h += table.omega[j] * std::norm(state.a[j]);
  }
  for (const Triad& t : table.entries) {
    const Complex phase = std::polar(1.0, t.mismatch * state.t);
    const Complex term = t.coupling * std::conj(state.a[static_cast<std::size_t>(t.sum)]) *
                         state.a[static_cast<std::size_t>(t.lo)] *
                         state.a[static_cast<std::size_t>(t.hi)] * phase;
    h += epsilon * t.mult * 2.0 * term.real();
  }
  return h;
}

std::array<double, 2> momentum(const WaveState& state, const ModeSet& ms) {
  std::array<double, 2> p{0.0, 0.0};
  for (int j = 0; j < ms.count(); ++j) {
    const auto k = ms.wavevector(j);
    const double w = std::norm(state.a[static_cast<std::size_t>(j)]);
    p[0] += k[0] * w;
    p[1] += k[1] * w;
  }
  return p;
}

}  // namespace wavekin
