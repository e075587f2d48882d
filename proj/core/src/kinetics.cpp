#include "wavekin/kinetics.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

double sq(double x) { return x * x; }

// Shared triad sweep: Sum over canonical triads of the RHO/GAMMA integrands
// with ordered-pair multiplicities restored.
template <class PerTriad>
void sweep(const TriadTable& table, double t_broad, PerTriad&& f) {
  for (const Triad& t : table.entries) {
    const double kernel = sq(std::abs(t.coupling)) * broadened_delta(t.mismatch, t_broad);
    f(t, kernel);
  }
}

}  // namespace

double eta_coeff(int j, std::span<const double> n, const TriadTable& table, double epsilon,
                 double t_broad) {
  double acc = 0.0;
  sweep(table, t_broad, [&](const Triad& t, double kernel) {
    if (t.sum == j) acc += t.mult * kernel * n[static_cast<std::size_t>(t.lo)] *
                           n[static_cast<std::size_t>(t.hi)];
    if (t.lo == j) acc += 2.0 * kernel * n[static_cast<std::size_t>(t.sum)] *
                          n[static_cast<std::size_t>(t.hi)];
    if (t.hi == j && t.lo != t.hi) {
      acc += 2.0 * kernel * n[static_cast<std::size_t>(t.sum)] *
             n[static_cast<std::size_t>(t.lo)];
    }
  });
  return 4.0 * M_PI * epsilon * epsilon * table.measure() * acc;
}

double gamma_coeff(int j, std::span<const double> n, const TriadTable& table, double epsilon,
                   double t_broad) {
  double acc = 0.0;
  sweep(table, t_broad, [&](const Triad& t, double kernel) {
    if (t.sum == j) {
      acc += t.lo == t.hi
                 ? kernel * n[static_cast<std::size_t>(t.lo)]
                 : kernel * (n[static_cast<std::size_t>(t.lo)] + n[static_cast<std::size_t>(t.hi)]);
    }
    if (t.lo == j) {
      acc += kernel *
             (n[static_cast<std::size_t>(t.hi)] - n[static_cast<std::size_t>(t.sum)]);
    }
    if (t.hi == j && t.lo != t.hi) {
      acc += kernel *
             (n[static_cast<std::size_t>(t.lo)] - n[static_cast<std::size_t>(t.sum)]);
    }
  });
  return 8.0 * M_PI * epsilon * epsilon * table.measure() * acc;
}

KineticCoeffs kinetic_coeffs(std::span<const double> n, const TriadTable& table,
                             double epsilon, double t_broad) {
  if (n.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("kinetic_coeffs: spectrum/table mode count mismatch");
  }
  KineticCoeffs out;
  out.broadening_time = t_broad;
  out.eta.assign(n.size(), 0.0);
  out.gamma.assign(n.size(), 0.0);
  const double pref_eta = 4.0 * M_PI * epsilon * epsilon * table.measure();
  const double pref_gam = 8.0 * M_PI * epsilon * epsilon * table.measure();
  sweep(table, t_broad, [&](const Triad& t, double kernel) {
    const std::size_t c = static_cast<std::size_t>(t.sum);
    const std::size_t u = static_cast<std::size_t>(t.lo);
    const std::size_t v = static_cast<std::size_t>(t.hi);
    out.eta[c] += t.mult * kernel * n[u] * n[v];
    out.eta[u] += 2.0 * kernel * n[c] * n[v];
    if (u != v) out.eta[v] += 2.0 * kernel * n[c] * n[u];
    out.gamma[c] += u == v ? kernel * n[u] : kernel * (n[u] + n[v]);
    out.gamma[u] += kernel * (n[v] - n[c]);
    if (u != v) out.gamma[v] += kernel * (n[u] - n[c]);
  });
  for (std::size_t j = 0; j < n.size(); ++j) {
    out.eta[j] *= pref_eta;
    out.gamma[j] *= pref_gam;
  }
  return out;
}

SpectrumTrajectory evolve_spectrum(const SpectrumState& n0, const TriadTable& table,
                                   double epsilon, double t_broad, double t_end, double dt,
                                   int snapshots) {
  if (n0.waveaction.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("evolve_spectrum: spectrum/table mode count mismatch");
  }
  for (double v : n0.waveaction) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw ValidationError("evolve_spectrum: waveaction must be finite and >= 0");
    }
  }
  if (t_end < n0.t) throw ValidationError("evolve_spectrum: t_end precedes state time");

  const std::size_t n = n0.waveaction.size();
  auto deriv = [&](const std::vector<double>& y, std::vector<double>& dy) {
    const KineticCoeffs c = kinetic_coeffs(y, table, epsilon, t_broad);
    for (std::size_t j = 0; j < n; ++j) {
      dy[j] = c.eta[j] - c.gamma[j] * y[j];
      if (!std::isfinite(dy[j])) throw ValidationError("evolve_spectrum: non-finite coefficients");
    }
  };

  if (dt <= 0.0) {
    // a small fraction of the fastest initial relaxation time
    const KineticCoeffs c0 = kinetic_coeffs(n0.waveaction, table, epsilon, t_broad);
    double gmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      gmax = std::max(gmax, std::abs(c0.gamma[j]));
      if (n0.waveaction[j] > 0.0) gmax = std::max(gmax, c0.eta[j] / n0.waveaction[j]);
    }
    dt = gmax > 0.0 ? 0.02 / gmax : (t_end - n0.t);
    dt = std::min(dt, (t_end - n0.t) / 16.0);
    if (!(dt > 0.0)) dt = std::max(t_end - n0.t, 1e-30);
  }

  SpectrumTrajectory traj;
  std::vector<double> y = n0.waveaction;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = n0.t;
  const double span = t_end - n0.t;
  const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(span / dt - 1e-12)));
  const double h = span / static_cast<double>(steps);
  const long long stride =
      std::max<long long>(1, steps / std::max(1, snapshots - 1));
  bool warned = false;

  traj.times.push_back(t);
  traj.states.push_back(y);
  for (long long i = 0; i < steps; ++i) {
    deriv(y, k1);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    deriv(tmp, k2);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    deriv(tmp, k3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + h * k3[j];
    deriv(tmp, k4);
    for (std::size_t j = 0; j < n; ++j) {
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if (y[j] < 0.0) {
        if (!warned) {
          std::fprintf(stderr, "[wavekin] evolve_spectrum: waveaction floored at zero (t=%.6g)\n",
                       t + h);
          warned = true;
        }
        y[j] = 0.0;
      }
    }
    t = n0.t + static_cast<double>(i + 1) * h;
    if ((i + 1) % stride == 0 || i + 1 == steps) {
      traj.times.push_back(t);
      traj.states.push_back(y);
    }
  }
  return traj;
}

double PdfGrid1D::mass() const {
  double m = 0.0;
  for (double p : density) m += p;
  return m * cell_width();
}

double PdfGrid1D::moment(int p) const {
  double m = 0.0;
  for (int i = 0; i < cells(); ++i) {
    m += std::pow(cell_center(i), p) * density[static_cast<std::size_t>(i)];
  }
  return m * cell_width();
}

PdfGrid1D PdfGrid1D::exponential(double mean, double s_max, int cells) {
  PdfGrid1D g;
  g.s_max = s_max;
  g.density.resize(static_cast<std::size_t>(cells));
  const double w = s_max / cells;
  for (int i = 0; i < cells; ++i) {
    // exact cell average of e^{-s/mean}/mean
    const double a = i * w, b = a + w;
    g.density[static_cast<std::size_t>(i)] =
        (std::exp(-a / mean) - std::exp(-b / mean)) / w;
  }
  // normalize the truncated tail away
  const double m = g.mass();
  for (double& d : g.density) d /= m;
  return g;
}

PdfGrid1D PdfGrid1D::delta_like(double s_peak, double s_max, int cells, int spread_cells) {
  PdfGrid1D g;
  g.s_max = s_max;
  g.density.assign(static_cast<std::size_t>(cells), 0.0);
  const double w = s_max / cells;
  const int center = std::min(cells - 1, std::max(0, static_cast<int>(s_peak / w)));
  const int r = std::max(1, spread_cells);
  // triangular bump over ~2r cells
  for (int d = -r + 1; d <= r - 1; ++d) {
    const int i = center + d;
    if (i < 0 || i >= cells) continue;
    g.density[static_cast<std::size_t>(i)] = static_cast<double>(r - std::abs(d));
  }
  const double m = g.mass();
  for (double& v : g.density) v /= m;
  return g;
}

double pdf_cfl_limit(const PdfGrid1D& grid, double eta, double gamma) {
  const double w = grid.cell_width();
  const double diff = eta * grid.s_max;
  const double adv = std::abs(gamma) * grid.s_max;
  double limit = 1e300;
  if (diff > 0.0) limit = std::min(limit, w * w / (2.0 * diff));
  if (adv > 0.0) limit = std::min(limit, w / adv);
  return 0.9 * limit;
}

PdfGrid1D pdf_step(const PdfGrid1D& grid, double eta, double gamma, double dt) {
  const double limit = pdf_cfl_limit(grid, eta, gamma);
  if (dt > limit) throw CflError(dt, limit);
  const int m = grid.cells();
  const double w = grid.cell_width();
  PdfGrid1D out = grid;

  // face fluxes; faces 0 and m carry no flux (s factor / closed box)
  std::vector<double> flux(static_cast<std::size_t>(m) + 1, 0.0);
  for (int e = 1; e < m; ++e) {
    const double s = e * w;
    const double p_avg = 0.5 * (grid.density[static_cast<std::size_t>(e - 1)] +
                                grid.density[static_cast<std::size_t>(e)]);
    const double dp = (grid.density[static_cast<std::size_t>(e)] -
                       grid.density[static_cast<std::size_t>(e - 1)]) /
                      w;
    flux[static_cast<std::size_t>(e)] = -s * (gamma * p_avg + eta * dp);
  }
  for (int i = 0; i < m; ++i) {
    out.density[static_cast<std::size_t>(i)] -=
        dt / w * (flux[static_cast<std::size_t>(i) + 1] - flux[static_cast<std::size_t>(i)]);
  }
  for (double& d : out.density) {
    if (d < 0.0) {
      out.clamp_correction += -d * w;
      d = 0.0;
    }
  }
  return out;
}

namespace {

// adaptive Simpson for smooth positive integrands
double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_adaptive(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

FluxPdfCurve steady_pdf_with_flux(double eta, double gamma, double flux, double s0,
                                  double s_max, int points) {
  if (!(eta > 0.0)) throw ValidationError("steady_pdf_with_flux: eta must be > 0");
  if (!(gamma > 0.0)) throw ValidationError("steady_pdf_with_flux: gamma must be > 0");
  if (!(s0 > 0.0)) {
    throw ValidationError("steady_pdf_with_flux: s0 must be > 0 (forcing is singular at s=0)");
  }
  if (!(s_max > s0)) throw ValidationError("steady_pdf_with_flux: s_max must exceed s0");
  if (points < 3) points = 3;

  const double n = eta / gamma;
  FluxPdfCurve out;
  out.flux = flux;
  out.s.resize(static_cast<std::size_t>(points));
  out.p.resize(static_cast<std::size_t>(points));
  const double h = (s_max - s0) / static_cast<double>(points - 1);

  // cumulative I(s) = integral of e^{sigma/n}/sigma; scaled by e^{-s/n} on the
  // fly to keep magnitudes tame
  std::vector<double> integral(static_cast<std::size_t>(points), 0.0);
  auto f = [n](double sigma) { return std::exp(sigma / n) / sigma; };
  for (int i = 1; i < points; ++i) {
    const double a = s0 + (i - 1) * h, b = s0 + i * h;
    integral[static_cast<std::size_t>(i)] =
        integral[static_cast<std::size_t>(i - 1)] +
        integrate_smooth(f, a, b, 1e-14 * (1.0 + std::abs(integral[static_cast<std::size_t>(i - 1)])));
  }

  // particular part  q(s) = e^{-s/n} I(s); normalization fixes C in
  // P = C e^{-s/n} - (F/eta) q(s)
  std::vector<double> expo(static_cast<std::size_t>(points));
  std::vector<double> part(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double s = s0 + i * h;
    out.s[static_cast<std::size_t>(i)] = s;
    expo[static_cast<std::size_t>(i)] = std::exp(-s / n);
    part[static_cast<std::size_t>(i)] =
        expo[static_cast<std::size_t>(i)] * integral[static_cast<std::size_t>(i)];
  }
  auto trapz = [&](const std::vector<double>& y) {
    double acc = 0.0;
    for (int i = 1; i < points; ++i) {
      acc += 0.5 * h * (y[static_cast<std::size_t>(i - 1)] + y[static_cast<std::size_t>(i)]);
    }
    return acc;
  };
  const double area_expo = trapz(expo);
  const double area_part = trapz(part);
  out.c0 = (1.0 + (flux / eta) * area_part) / area_expo;

  for (int i = 0; i < points; ++i) {
    out.p[static_cast<std::size_t>(i)] = out.c0 * expo[static_cast<std::size_t>(i)] -
                                         (flux / eta) * part[static_cast<std::size_t>(i)];
    if (out.p[static_cast<std::size_t>(i)] < 0.0) out.nonnegative = false;
  }
  return out;
}

}  // namespace wavekin
