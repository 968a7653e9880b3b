#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace boxflow {

// Uniform discretization of the periodic unit cube.  Fields expand in
// exp(2*pi*i m.x) with integer wavevectors m in [-n/2, n/2) per axis,
// stored in FFT index order (index k maps to m = k for k < n/2, else k - n).
struct Grid {
  int n = 0;
  double dealias_fraction = 1.0;

  Grid() = default;
  explicit Grid(int n_, double dealias = 1.0) : n(n_), dealias_fraction(dealias) {
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid: n must be a power of two >= 8");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
      throw std::invalid_argument("Grid: dealias_fraction must be in (0,1]");
  }

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

  int mode(int idx) const { return idx < n / 2 ? idx : idx - n; }
  int index_of_mode(int m) const { return m >= 0 ? m : m + n; }

  std::array<int, 3> modes_at(std::size_t flat) const {
    const int n2 = n;
    const int i3 = static_cast<int>(flat % n2);
    const int i2 = static_cast<int>((flat / n2) % n2);
    const int i1 = static_cast<int>(flat / (static_cast<std::size_t>(n2) * n2));
    return {mode(i1), mode(i2), mode(i3)};
  }

  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
  }

  bool operator==(const Grid& o) const { return n == o.n; }
  bool operator!=(const Grid& o) const { return n != o.n; }
};

}  // namespace boxflow
