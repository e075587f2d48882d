#include "wavekin/perturb.hpp"

#include <cmath>

#include "wavekin/errors.hpp"
#include "wavekin/kernels.hpp"

namespace wavekin {

namespace {

// Ordered-pair views of the canonical table.
// down[l]:  ordered pairs (m, n) with k_m + k_n = k_l, carrying V^l_{mn}.
// up[l]:    pairs (p, w) with k_p = k_l + k_w, carrying V^p_{lw}.
struct OrderedPairs {
  struct Pair {
    int first, second;
    Complex v;
  };
  std::vector<std::vector<Pair>> down;
  std::vector<std::vector<Pair>> up;

  explicit OrderedPairs(const TriadTable& table) {
    down.resize(static_cast<std::size_t>(table.n_modes));
    up.resize(static_cast<std::size_t>(table.n_modes));
    for (const Triad& t : table.entries) {
      down[static_cast<std::size_t>(t.sum)].push_back({t.lo, t.hi, t.coupling});
      if (t.lo != t.hi) {
        down[static_cast<std::size_t>(t.sum)].push_back({t.hi, t.lo, t.coupling});
      }
      up[static_cast<std::size_t>(t.lo)].push_back({t.sum, t.hi, t.coupling});
      if (t.lo != t.hi) {
        up[static_cast<std::size_t>(t.hi)].push_back({t.sum, t.lo, t.coupling});
      }
    }
  }
};

void check_aligned(std::span<const Complex> a, const TriadTable& table, const char* op) {
  if (a.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError(std::string(op) + ": state/table mode count mismatch");
  }
}

}  // namespace

std::vector<Complex> first_order(std::span<const Complex> a0, const TriadTable& table,
                                 double horizon) {
  check_aligned(a0, table, "first_order");
  const OrderedPairs pairs(table);
  const std::vector<double>& w = table.omega;
  std::vector<Complex> out(a0.size(), Complex(0.0, 0.0));
  const Complex minus_i(0.0, -1.0);

  for (int l = 0; l < table.n_modes; ++l) {
    Complex acc(0.0, 0.0);
    for (const auto& p : pairs.down[static_cast<std::size_t>(l)]) {
      const double mism = w[static_cast<std::size_t>(l)] - w[static_cast<std::size_t>(p.first)] -
                          w[static_cast<std::size_t>(p.second)];
      acc += p.v * a0[static_cast<std::size_t>(p.first)] * a0[static_cast<std::size_t>(p.second)] *
             delta_kernel(mism, horizon);
    }
    for (const auto& p : pairs.up[static_cast<std::size_t>(l)]) {
      const double mism = w[static_cast<std::size_t>(p.first)] - w[static_cast<std::size_t>(l)] -
                          w[static_cast<std::size_t>(p.second)];
      acc += 2.0 * std::conj(p.v) * a0[static_cast<std::size_t>(p.first)] *
             std::conj(a0[static_cast<std::size_t>(p.second)]) *
             std::conj(delta_kernel(mism, horizon));
    }
    out[static_cast<std::size_t>(l)] = minus_i * acc;
  }
  return out;
}

std::vector<Complex> second_order(std::span<const Complex> a0, const TriadTable& table,
                                  double horizon) {
  check_aligned(a0, table, "second_order");
  const OrderedPairs pairs(table);
  const std::vector<double>& w = table.omega;
  const double T = horizon;
  std::vector<Complex> out(a0.size(), Complex(0.0, 0.0));

  auto wat = [&w](int j) { return w[static_cast<std::size_t>(j)]; };
  auto at = [&a0](int j) { return a0[static_cast<std::size_t>(j)]; };

  for (int l = 0; l < table.n_modes; ++l) {
    Complex acc(0.0, 0.0);

    for (const auto& outer : pairs.down[static_cast<std::size_t>(l)]) {
      const int m = outer.first;
      const int n = outer.second;
      const double w_l_mn = wat(l) - wat(m) - wat(n);

      // inner expansion of a^(1)_m feeding the direct coupling
      for (const auto& inner : pairs.down[static_cast<std::size_t>(m)]) {
        const int mu = inner.first, nu = inner.second;
        const double w_m_munu = wat(m) - wat(mu) - wat(nu);
        acc += -2.0 * outer.v * inner.v * at(n) * at(mu) * at(nu) *
               e_kernel(w_m_munu + w_l_mn, w_l_mn, T);
      }
      for (const auto& inner : pairs.up[static_cast<std::size_t>(m)]) {
        const int p = inner.first, v = inner.second;
        const double w_p_mv = wat(p) - wat(m) - wat(v);
        acc += -4.0 * outer.v * std::conj(inner.v) * at(n) * at(p) * std::conj(at(v)) *
               e_kernel(w_l_mn - w_p_mv, w_l_mn, T);
      }
    }

    for (const auto& outer : pairs.up[static_cast<std::size_t>(l)]) {
      const int p = outer.first;  // p = l + n on the lattice
      const int n = outer.second;
      const double w_p_ln = wat(p) - wat(l) - wat(n);

      // a^(1)_p feeding the conjugate coupling
      for (const auto& inner : pairs.down[static_cast<std::size_t>(p)]) {
        const int mu = inner.first, nu = inner.second;
        const double w_p_munu = wat(p) - wat(mu) - wat(nu);
        acc += -2.0 * std::conj(outer.v) * inner.v * std::conj(at(n)) * at(mu) * at(nu) *
               e_kernel(w_p_munu - w_p_ln, -w_p_ln, T);
      }
      for (const auto& inner : pairs.up[static_cast<std::size_t>(p)]) {
        const int q = inner.first, vv = inner.second;
        const double w_q_pv = wat(q) - wat(p) - wat(vv);
        acc += -4.0 * std::conj(outer.v) * std::conj(inner.v) * std::conj(at(n)) * at(q) *
               std::conj(at(vv)) * e_kernel(-w_p_ln - w_q_pv, -w_p_ln, T);
      }

      // conj(a^(1)_n) feeding the conjugate coupling
      for (const auto& inner : pairs.down[static_cast<std::size_t>(n)]) {
        const int mu = inner.first, nu = inner.second;
        const double w_n_munu = wat(n) - wat(mu) - wat(nu);
        acc += 2.0 * std::conj(outer.v) * std::conj(inner.v) * at(p) * std::conj(at(mu)) *
               std::conj(at(nu)) * e_kernel(-w_p_ln - w_n_munu, -w_p_ln, T);
      }
      for (const auto& inner : pairs.up[static_cast<std::size_t>(n)]) {
        const int q = inner.first, vv = inner.second;
        const double w_q_nv = wat(q) - wat(n) - wat(vv);
        acc += 4.0 * std::conj(outer.v) * inner.v * at(p) * std::conj(at(q)) * at(vv) *
               e_kernel(w_q_nv - w_p_ln, -w_p_ln, T);
      }
    }

    out[static_cast<std::size_t>(l)] = acc;
  }
  return out;
}

ExpansionResult expand(const WaveState& initial, const TriadTable& table, double horizon) {
  ExpansionResult r;
  r.a0 = initial.a;
  r.a1 = first_order(r.a0, table, horizon);
  r.a2 = second_order(r.a0, table, horizon);
  r.horizon = horizon;
  return r;
}

ExpansionScan expansion_residual_scan(const WaveState& initial, const TriadTable& table,
                                      double horizon, std::span<const double> epsilons,
                                      double step) {
  const ExpansionResult ex = expand(initial, table, horizon);
  ExpansionScan scan;
  for (double eps : epsilons) {
    IntegratorConfig cfg{step, eps};
    const WaveState end = integrate(initial, table, cfg, initial.t + horizon);
    double sq = 0.0;
    for (std::size_t j = 0; j < end.a.size(); ++j) {
      const Complex model = ex.a0[j] + eps * ex.a1[j] + eps * eps * ex.a2[j];
      sq += std::norm(end.a[j] - model);
    }
    scan.epsilon.push_back(eps);
    scan.residual.push_back(std::sqrt(sq));
  }
  // least-squares slope of log(residual) vs log(epsilon)
  const std::size_t n = scan.epsilon.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(scan.epsilon[i]);
      const double y = std::log(std::max(scan.residual[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double d = static_cast<double>(n) * sxx - sx * sx;
    scan.slope = (static_cast<double>(n) * sxy - sx * sy) / d;
  }
  return scan;
}

}  // namespace wavekin
