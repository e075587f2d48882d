#include "wavekin/lattice.hpp"

#include <cmath>
#include <string>

#include "wavekin/errors.hpp"

namespace wavekin {

ModeSet::ModeSet(double box_length, int dim, int lmax, std::vector<Index2> modes)
    : box_length_(box_length), dim_(dim), lmax_(lmax), modes_(std::move(modes)) {
  const int side = 2 * lmax_ + 1;
  const int cells = dim_ == 1 ? side : side * side;
  lookup_.assign(static_cast<std::size_t>(cells), -1);
  for (int i = 0; i < count(); ++i) {
    const Index2 l = modes_[static_cast<std::size_t>(i)];
    const int row = l[0] + lmax_;
    const int col = dim_ == 1 ? 0 : l[1] + lmax_;
    lookup_[static_cast<std::size_t>(row * (dim_ == 1 ? 1 : side) + col)] = i;
  }
}

std::array<double, 2> ModeSet::wavevector(int i) const {
  const Index2 l = modes_[static_cast<std::size_t>(i)];
  const double f = 2.0 * M_PI / box_length_;
  return {f * l[0], f * l[1]};
}

double ModeSet::kmag(int i) const {
  const auto k = wavevector(i);
  return std::hypot(k[0], k[1]);
}

int ModeSet::find(Index2 l) const {
  if (l[0] < -lmax_ || l[0] > lmax_) return -1;
  if (dim_ == 1) {
    if (l[1] != 0) return -1;
    return lookup_[static_cast<std::size_t>(l[0] + lmax_)];
  }
  if (l[1] < -lmax_ || l[1] > lmax_) return -1;
  const int side = 2 * lmax_ + 1;
  return lookup_[static_cast<std::size_t>((l[0] + lmax_) * side + (l[1] + lmax_))];
}

ModeSet build_modeset(double box_length, int dim, int lmax) {
  if (!(box_length > 0.0)) throw ValidationError("grid.L: box side must be > 0");
  if (dim != 1 && dim != 2) throw ValidationError("grid.d: dimension must be 1 or 2");
  if (lmax < 1) throw ValidationError("grid.lmax: must be >= 1 (lmax = 0 leaves no modes)");

  std::vector<Index2> modes;
  if (dim == 1) {
    modes.reserve(static_cast<std::size_t>(2 * lmax));
    for (int i = -lmax; i <= lmax; ++i) {
      if (i != 0) modes.push_back({i, 0});
    }
  } else {
    modes.reserve(static_cast<std::size_t>((2 * lmax + 1) * (2 * lmax + 1) - 1));
    for (int i = -lmax; i <= lmax; ++i) {
      for (int j = -lmax; j <= lmax; ++j) {
        if (i != 0 || j != 0) modes.push_back({i, j});
      }
    }
  }
  return ModeSet(box_length, dim, lmax, std::move(modes));
}

double Dispersion::omega(double kmag) const { return scale * std::pow(kmag, exponent); }

InteractionModel InteractionModel::constant(double v0) {
  return InteractionModel(Family::kConstant, v0, 0.0);
}

InteractionModel InteractionModel::product_power(double v0, double beta) {
  return InteractionModel(Family::kProductPower, v0, beta);
}

std::complex<double> InteractionModel::raw(const ModeSet& ms, int l, int m, int n) const {
  switch (family_) {
    case Family::kConstant:
      return {v0_, 0.0};
    case Family::kProductPower: {
      // grouping keeps the evaluation bit-exact under m <-> n
      const double prod = ms.kmag(l) * (ms.kmag(m) * ms.kmag(n));
      return {v0_ * std::pow(prod, beta_), 0.0};
    }
  }
  return {};
}

std::complex<double> InteractionModel::value(const ModeSet& ms, int l, int m, int n) const {
  return 0.5 * (raw(ms, l, m, n) + raw(ms, l, n, m));
}

double TriadTable::omega_max() const {
  double w = 0.0;
  for (double v : omega) w = std::max(w, v);
  return w;
}

double TriadTable::measure() const {
  const double f = 2.0 * M_PI / box_length;
  return dim == 1 ? f : f * f;
}

TriadTable enumerate_triads(const ModeSet& ms, const Dispersion& disp,
                            const InteractionModel& im) {
  TriadTable table;
  table.n_modes = ms.count();
  table.dim = ms.dim();
  table.box_length = ms.box_length();
  table.omega.resize(static_cast<std::size_t>(ms.count()));
  for (int i = 0; i < ms.count(); ++i) {
    table.omega[static_cast<std::size_t>(i)] = disp.omega(ms.kmag(i));
  }

  for (int lo = 0; lo < ms.count(); ++lo) {
    for (int hi = lo; hi < ms.count(); ++hi) {
      const Index2 a = ms.index_vector(lo);
      const Index2 b = ms.index_vector(hi);
      const int sum = ms.find({a[0] + b[0], a[1] + b[1]});
      if (sum < 0) continue;
      Triad t;
      t.sum = sum;
      t.lo = lo;
      t.hi = hi;
      t.coupling = im.value(ms, sum, lo, hi);
      t.mismatch = table.omega[static_cast<std::size_t>(sum)] -
                   table.omega[static_cast<std::size_t>(lo)] -
                   table.omega[static_cast<std::size_t>(hi)];
      t.mult = lo == hi ? 1.0 : 2.0;
      table.entries.push_back(t);
    }
  }
  return table;
}

double broadened_delta(double x, double t_broad) {
  if (!(t_broad > 0.0)) throw ValidationError("broadened_delta: T must be > 0");
  const double half = 0.5 * x * t_broad;
  if (std::abs(half) < 1e-8) {
    // |Delta|^2 = T^2 (1 - half^2/3 + ...) near x = 0
    return t_broad * (1.0 - half * half / 3.0) / (2.0 * M_PI);
  }
  const double s = std::sin(half) / half;
  return t_broad * s * s / (2.0 * M_PI);
}

}  // namespace wavekin
