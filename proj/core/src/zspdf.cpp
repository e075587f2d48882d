#include "wavekin/zspdf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

constexpr double kPi = M_PI;

std::vector<std::size_t> cell_strides(const JointPdfGrid& g) {
  const int a = g.axes();
  std::vector<std::size_t> s(static_cast<std::size_t>(a));
  std::size_t acc = 1;
  for (int ax = a - 1; ax >= 0; --ax) {
    s[static_cast<std::size_t>(ax)] = acc;
    acc *= static_cast<std::size_t>(g.cells[static_cast<std::size_t>(ax)]);
  }
  return s;
}

// Derivative of P along `ax` at cell index (flat, with multi available),
// central in the interior and one-sided at the walls. `data` may be the
// density or its log.
double cell_derivative(const std::vector<double>& data, std::size_t flat, int i_ax, int cells_ax,
                       std::size_t stride_ax, double inv_w) {
  if (cells_ax == 1) return 0.0;
  if (i_ax == 0) return (data[flat + stride_ax] - data[flat]) * inv_w;
  if (i_ax == cells_ax - 1) return (data[flat] - data[flat - stride_ax]) * inv_w;
  return (data[flat + stride_ax] - data[flat - stride_ax]) * (0.5 * inv_w);
}

struct FaceGeom {
  std::size_t left, right;  // flat cell indices across the face
  std::vector<int> multi;   // face multi-index (i_axis is the face position)
};

}  // namespace

std::size_t JointPdfGrid::size() const {
  std::size_t n = 1;
  for (int c : cells) n *= static_cast<std::size_t>(c);
  return n;
}

double JointPdfGrid::cell_volume() const {
  double v = 1.0;
  for (int ax = 0; ax < axes(); ++ax) v *= cell_width(ax);
  return v;
}

double JointPdfGrid::mass() const {
  double m = 0.0;
  for (double d : density) m += d;
  return m * cell_volume();
}

double JointPdfGrid::marginal_mean(int ax) const {
  const auto strides = cell_strides(*this);
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const int idx = static_cast<int>((i / strides[static_cast<std::size_t>(ax)]) %
                                     static_cast<std::size_t>(cells[static_cast<std::size_t>(ax)]));
    acc += density[i] * cell_center(ax, idx);
  }
  return acc * cell_volume();
}

double JointPdfGrid::pair_mean(int ax1, int ax2) const {
  const auto strides = cell_strides(*this);
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const int i1 = static_cast<int>((i / strides[static_cast<std::size_t>(ax1)]) %
                                    static_cast<std::size_t>(cells[static_cast<std::size_t>(ax1)]));
    const int i2 = static_cast<int>((i / strides[static_cast<std::size_t>(ax2)]) %
                                    static_cast<std::size_t>(cells[static_cast<std::size_t>(ax2)]));
    acc += density[i] * cell_center(ax1, i1) * cell_center(ax2, i2);
  }
  return acc * cell_volume();
}

std::vector<double> JointPdfGrid::marginal(int ax) const {
  const auto strides = cell_strides(*this);
  std::vector<double> m(static_cast<std::size_t>(cells[static_cast<std::size_t>(ax)]), 0.0);
  const double other_vol = cell_volume() / cell_width(ax);
  for (std::size_t i = 0; i < density.size(); ++i) {
    const int idx = static_cast<int>((i / strides[static_cast<std::size_t>(ax)]) %
                                     static_cast<std::size_t>(cells[static_cast<std::size_t>(ax)]));
    m[static_cast<std::size_t>(idx)] += density[i] * other_vol;
  }
  return m;
}

JointPdfGrid JointPdfGrid::product_exponential(std::vector<int> modes, std::vector<int> cells,
                                               std::vector<double> s_max,
                                               std::span<const double> means) {
  if (modes.size() < 2 || modes.size() > 4) {
    throw ValidationError("zspdf.modes: participating set must have 2 to 4 modes");
  }
  if (cells.size() != modes.size() || s_max.size() != modes.size() ||
      means.size() != modes.size()) {
    throw ValidationError("zspdf: per-axis parameter count mismatch");
  }
  JointPdfGrid g;
  g.modes = std::move(modes);
  g.cells = std::move(cells);
  g.s_max = std::move(s_max);
  std::size_t total = 1;
  for (int c : g.cells) {
    if (c < 2) throw ValidationError("zspdf.cells: need at least 2 cells per axis");
    total *= static_cast<std::size_t>(c);
  }
  if (total > (std::size_t{1} << 26)) {
    throw ValidationError("zspdf: tensor grid exceeds the 2^26 cell budget");
  }

  std::vector<std::vector<double>> axis_avg(g.modes.size());
  for (int ax = 0; ax < g.axes(); ++ax) {
    const int m = g.cells[static_cast<std::size_t>(ax)];
    const double w = g.cell_width(ax);
    auto& v = axis_avg[static_cast<std::size_t>(ax)];
    v.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double a = i * w, b = a + w;
      v[static_cast<std::size_t>(i)] =
          (std::exp(-a / means[static_cast<std::size_t>(ax)]) -
           std::exp(-b / means[static_cast<std::size_t>(ax)])) /
          w;
    }
  }
  g.density.resize(total);
  const auto strides = cell_strides(g);
  for (std::size_t i = 0; i < total; ++i) {
    double p = 1.0;
    for (int ax = 0; ax < g.axes(); ++ax) {
      const int idx = static_cast<int>((i / strides[static_cast<std::size_t>(ax)]) %
                                       static_cast<std::size_t>(g.cells[static_cast<std::size_t>(ax)]));
      p *= axis_avg[static_cast<std::size_t>(ax)][static_cast<std::size_t>(idx)];
    }
    g.density[i] = p;
  }
  const double m0 = g.mass();
  for (double& d : g.density) d /= m0;
  return g;
}

ZsCluster build_cluster(const JointPdfGrid& grid, const TriadTable& table, double epsilon,
                        double t_broad, ClosureMode closure,
                        std::span<const double> outside_means) {
  auto axis_of = [&grid](int mode) {
    for (int ax = 0; ax < grid.axes(); ++ax) {
      if (grid.modes[static_cast<std::size_t>(ax)] == mode) return ax;
    }
    return -1;
  };
  if (closure == ClosureMode::kMeanField &&
      outside_means.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("zspdf: mean-field closure needs a full-spectrum mean per mode");
  }

  ZsCluster cl;
  for (const Triad& t : table.entries) {
    const int ac = axis_of(t.sum), au = axis_of(t.lo), av = axis_of(t.hi);
    const int inside = (ac >= 0) + (au >= 0) + (av >= 0);
    const double rate = 8.0 * kPi * epsilon * epsilon * table.measure() *
                        std::norm(t.coupling) * broadened_delta(t.mismatch, t_broad);
    if (inside == 3) {
      if (t.lo == t.hi) {
        throw ValidationError(
            "zspdf: degenerate triad (repeated lower leg) inside the participating set");
      }
      cl.inner.push_back({ac, au, av, rate});
    } else if (inside == 2 && closure == ClosureMode::kMeanField) {
      if (ac < 0) {
        cl.reduced.push_back({1, au, av, rate, outside_means[static_cast<std::size_t>(t.sum)]});
      } else if (au < 0) {
        cl.reduced.push_back({0, av, ac, rate, outside_means[static_cast<std::size_t>(t.lo)]});
      } else {
        cl.reduced.push_back({0, au, ac, rate, outside_means[static_cast<std::size_t>(t.hi)]});
      }
    } else if (inside > 0) {
      ++cl.dropped;
    }
  }
  return cl;
}

namespace {

struct FluxContext {
  const JointPdfGrid& grid;
  std::vector<std::size_t> strides;
  std::vector<double> inv_w;
  std::vector<double> log_density;
  double floor;

  explicit FluxContext(const JointPdfGrid& g) : grid(g), strides(cell_strides(g)) {
    inv_w.resize(static_cast<std::size_t>(g.axes()));
    for (int ax = 0; ax < g.axes(); ++ax) inv_w[static_cast<std::size_t>(ax)] = 1.0 / g.cell_width(ax);
    double peak = 0.0;
    for (double d : g.density) peak = std::max(peak, d);
    floor = peak * 1e-280;
    log_density.resize(g.density.size());
    for (std::size_t i = 0; i < g.density.size(); ++i) {
      log_density[i] = g.density[i] > floor ? std::log(g.density[i])
                                            : -std::numeric_limits<double>::infinity();
    }
  }

  // Directional derivative along `dax` at the face between cells l and r
  // (face axis fax). Tangential directions average the two adjacent cell
  // derivatives. In log mode the value is the derivative of ln P; callers
  // multiply by the geometric-mean density.
  double face_derivative(const std::vector<double>& data, const FaceGeom& f, int fax,
                         int dax) const {
    const std::size_t st = strides[static_cast<std::size_t>(dax)];
    const double iw = inv_w[static_cast<std::size_t>(dax)];
    if (dax == fax) return (data[f.right] - data[f.left]) * iw;
    const int i = f.multi[static_cast<std::size_t>(dax)];
    const int c = grid.cells[static_cast<std::size_t>(dax)];
    const double dl = cell_derivative(data, f.left, i, c, st, iw);
    const double dr = cell_derivative(data, f.right, i, c, st, iw);
    return 0.5 * (dl + dr);
  }

  // True when every cell the face stencil can touch carries positive density.
  // The face-normal derivative uses only the two adjacent cells; tangential
  // derivatives also reach the +-1 neighbors of both.
  bool log_ok(const FaceGeom& f, int fax, std::span<const int> daxes) const {
    auto probe = [&](std::size_t base) {
      if (!(grid.density[base] > floor)) return false;
      for (int dax : daxes) {
        if (dax == fax) continue;
        const int i = f.multi[static_cast<std::size_t>(dax)];
        const std::size_t st = strides[static_cast<std::size_t>(dax)];
        if (i > 0 && !(grid.density[base - st] > floor)) return false;
        if (i < grid.cells[static_cast<std::size_t>(dax)] - 1 && !(grid.density[base + st] > floor))
          return false;
      }
      return true;
    };
    return probe(f.left) && probe(f.right);
  }
};

// Iterate interior faces of `axis`, calling fn(face, flat_face_index).
template <class Fn>
void for_each_interior_face(const JointPdfGrid& g, const std::vector<std::size_t>& cstr, int axis,
                            Fn&& fn) {
  const int a = g.axes();
  std::vector<int> multi(static_cast<std::size_t>(a), 0);
  std::vector<std::size_t> fstr(static_cast<std::size_t>(a));
  std::size_t acc = 1;
  for (int ax = a - 1; ax >= 0; --ax) {
    fstr[static_cast<std::size_t>(ax)] = acc;
    acc *= static_cast<std::size_t>(g.cells[static_cast<std::size_t>(ax)] + (ax == axis ? 1 : 0));
  }
  const std::size_t total = acc;
  FaceGeom f;
  f.multi.resize(static_cast<std::size_t>(a));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    bool interior = true;
    for (int ax = 0; ax < a; ++ax) {
      const int extent = g.cells[static_cast<std::size_t>(ax)] + (ax == axis ? 1 : 0);
      const int idx = static_cast<int>((rem / fstr[static_cast<std::size_t>(ax)]) %
                                       static_cast<std::size_t>(extent));
      f.multi[static_cast<std::size_t>(ax)] = idx;
      if (ax == axis && (idx == 0 || idx == g.cells[static_cast<std::size_t>(ax)])) {
        interior = false;
      }
    }
    (void)rem;
    if (!interior) continue;
    // face i sits between cells i-1 (left) and i (right) along `axis`
    std::size_t right = 0;
    for (int ax = 0; ax < a; ++ax) {
      right += static_cast<std::size_t>(f.multi[static_cast<std::size_t>(ax)]) *
               cstr[static_cast<std::size_t>(ax)];
    }
    f.right = right;
    f.left = right - cstr[static_cast<std::size_t>(axis)];
    fn(f, flat);
  }
}

}  // namespace

ZsFluxField zs_flux(const JointPdfGrid& grid, const ZsCluster& cluster) {
  ZsFluxField field;
  field.axis_faces.resize(static_cast<std::size_t>(grid.axes()));
  for (int ax = 0; ax < grid.axes(); ++ax) {
    field.axis_faces[static_cast<std::size_t>(ax)] = zs_flux_axis(grid, cluster, ax);
  }
  return field;
}

std::vector<double> zs_flux_axis(const JointPdfGrid& grid, const ZsCluster& cluster, int axis) {
  const FluxContext ctx(grid);
  const auto cstr = cell_strides(grid);
  std::size_t faces = 1;
  for (int ax = 0; ax < grid.axes(); ++ax) {
    faces *= static_cast<std::size_t>(grid.cells[static_cast<std::size_t>(ax)] +
                                      (ax == axis ? 1 : 0));
  }
  std::vector<double> flux(faces, 0.0);

  auto s_at = [&](const FaceGeom& f, int ax) {
    // face coordinate on the owning axis, cell center elsewhere
    return ax == axis ? f.multi[static_cast<std::size_t>(ax)] * grid.cell_width(ax)
                      : grid.cell_center(ax, f.multi[static_cast<std::size_t>(ax)]);
  };

  for (const ZsCluster::Inner& t : cluster.inner) {
    if (t.ax_sum != axis && t.ax_lo != axis && t.ax_hi != axis) continue;
    const double sigma = axis == t.ax_sum ? -1.0 : 1.0;
    const std::array<int, 3> daxes{t.ax_lo, t.ax_hi, t.ax_sum};
    for_each_interior_face(grid, cstr, axis, [&](const FaceGeom& f, std::size_t flat) {
      const double g3 = s_at(f, t.ax_lo) * s_at(f, t.ax_hi) * s_at(f, t.ax_sum);
      if (g3 == 0.0) return;
      double dtp;
      if (ctx.log_ok(f, axis, daxes)) {
        const double sum = ctx.face_derivative(ctx.log_density, f, axis, t.ax_lo) +
                           ctx.face_derivative(ctx.log_density, f, axis, t.ax_hi) -
                           ctx.face_derivative(ctx.log_density, f, axis, t.ax_sum);
        dtp = std::sqrt(grid.density[f.left] * grid.density[f.right]) * sum;
      } else {
        dtp = ctx.face_derivative(grid.density, f, axis, t.ax_lo) +
              ctx.face_derivative(grid.density, f, axis, t.ax_hi) -
              ctx.face_derivative(grid.density, f, axis, t.ax_sum);
      }
      flux[flat] += -sigma * t.rate * g3 * dtp;
    });
  }

  for (const ZsCluster::Reduced& t : cluster.reduced) {
    if (t.ax_a != axis && t.ax_b != axis) continue;
    const std::array<int, 2> daxes{t.ax_a, t.ax_b};
    // kind 0: G = s_a s_b [n (d_a - d_b) P - P],  F_a = -rate G, F_b = +rate G
    // kind 1: G = s_a s_b [n (d_a + d_b) P + P],  F_a = F_b = -rate G
    const double sig_b = t.kind == 0 ? -1.0 : 1.0;
    const double sig_p = t.kind == 0 ? -1.0 : 1.0;
    const double sigma = (t.kind == 0 && axis == t.ax_b) ? 1.0 : -1.0;
    for_each_interior_face(grid, cstr, axis, [&](const FaceGeom& f, std::size_t flat) {
      const double g2 = s_at(f, t.ax_a) * s_at(f, t.ax_b);
      if (g2 == 0.0) return;
      double bracket;
      if (ctx.log_ok(f, axis, daxes)) {
        const double ptilde = std::sqrt(grid.density[f.left] * grid.density[f.right]);
        bracket = t.mean_outside * ptilde *
                      (ctx.face_derivative(ctx.log_density, f, axis, t.ax_a) +
                       sig_b * ctx.face_derivative(ctx.log_density, f, axis, t.ax_b)) +
                  sig_p * ptilde;
      } else {
        const double pmid = 0.5 * (grid.density[f.left] + grid.density[f.right]);
        bracket = t.mean_outside * (ctx.face_derivative(grid.density, f, axis, t.ax_a) +
                                    sig_b * ctx.face_derivative(grid.density, f, axis, t.ax_b)) +
                  sig_p * pmid;
      }
      flux[flat] += sigma * t.rate * g2 * bracket;
    });
  }
  return flux;
}

double zs_cfl_limit(const JointPdfGrid& grid, const ZsCluster& cluster) {
  double budget = 0.0;
  for (const ZsCluster::Inner& t : cluster.inner) {
    const double g3 = grid.s_max[static_cast<std::size_t>(t.ax_lo)] *
                      grid.s_max[static_cast<std::size_t>(t.ax_hi)] *
                      grid.s_max[static_cast<std::size_t>(t.ax_sum)];
    const double inv = 1.0 / grid.cell_width(t.ax_lo) + 1.0 / grid.cell_width(t.ax_hi) +
                       1.0 / grid.cell_width(t.ax_sum);
    budget += t.rate * g3 * inv * inv;
  }
  for (const ZsCluster::Reduced& t : cluster.reduced) {
    const double g2 = grid.s_max[static_cast<std::size_t>(t.ax_a)] *
                      grid.s_max[static_cast<std::size_t>(t.ax_b)];
    const double inv = 1.0 / grid.cell_width(t.ax_a) + 1.0 / grid.cell_width(t.ax_b);
    budget += t.rate * g2 * (t.mean_outside * inv * inv + inv);
  }
  return budget > 0.0 ? 0.4 / budget : 1e300;
}

JointPdfGrid zs_step(const JointPdfGrid& grid, const ZsCluster& cluster, double dt) {
  const double limit = zs_cfl_limit(grid, cluster);
  if (dt > limit) throw CflError(dt, limit);
  JointPdfGrid out = grid;
  const auto cstr = cell_strides(grid);

  for (int axis = 0; axis < grid.axes(); ++axis) {
    const std::vector<double> flux = zs_flux_axis(grid, cluster, axis);
    const double iw = 1.0 / grid.cell_width(axis);
    // face tensor strides
    std::vector<std::size_t> fstr(static_cast<std::size_t>(grid.axes()));
    std::size_t acc = 1;
    for (int ax = grid.axes() - 1; ax >= 0; --ax) {
      fstr[static_cast<std::size_t>(ax)] = acc;
      acc *= static_cast<std::size_t>(grid.cells[static_cast<std::size_t>(ax)] +
                                      (ax == axis ? 1 : 0));
    }
    for (std::size_t cell = 0; cell < out.density.size(); ++cell) {
      std::size_t lo_face = 0;
      std::size_t rem = cell;
      for (int ax = 0; ax < grid.axes(); ++ax) {
        const std::size_t idx = (rem / cstr[static_cast<std::size_t>(ax)]) %
                                static_cast<std::size_t>(grid.cells[static_cast<std::size_t>(ax)]);
        lo_face += idx * fstr[static_cast<std::size_t>(ax)];
      }
      (void)rem;
      const std::size_t hi_face = lo_face + fstr[static_cast<std::size_t>(axis)];
      out.density[cell] -= dt * iw * (flux[hi_face] - flux[lo_face]);
    }
  }

  double peak = 0.0;
  for (double d : grid.density) peak = std::max(peak, d);
  bool warned = false;
  for (double& d : out.density) {
    if (d < 0.0) {
      if (d < -1e-12 * peak && !warned) {
        std::fprintf(stderr, "[wavekin] zs_step: positivity limiter engaged (%.3e)\n", d);
        warned = true;
      }
      out.clamp_correction += -d * grid.cell_volume();
      d = 0.0;
    }
  }
  return out;
}

RateFit fit_rate(std::span<const double> times, std::span<const double> values) {
  RateFit fit;
  const std::size_t n = times.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += times[i];
    sy += values[i];
    sxx += times[i] * times[i];
    sxy += times[i] * values[i];
  }
  const double nn = static_cast<double>(n);
  const double det = nn * sxx - sx * sx;
  fit.rate = (nn * sxy - sx * sy) / det;
  const double icept = (sy - fit.rate * sx) / nn;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = values[i] - (icept + fit.rate * times[i]);
      ss += r * r;
    }
    fit.stderr_ = std::sqrt(ss / (nn - 2.0) * nn / det);
  }
  return fit;
}

}  // namespace wavekin
