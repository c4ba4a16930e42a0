#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hvp {

// Symmetric matrix stored as the diagonal plus `bandwidth` superdiagonals:
// bands[d][i] = A[i][i+d]. Everything the oracle builds lives in a narrow band
// (position couples neighbours only), so this is all the storage it needs.
struct BandedSymmetricMatrix {
  int size = 0;
  int bandwidth = 0;
  std::vector<std::vector<double>> bands;

  static BandedSymmetricMatrix zero(int size, int bandwidth) {
    if (size < 1 || bandwidth < 0 || bandwidth >= size)
      throw std::domain_error("BandedSymmetricMatrix: bad shape");
    BandedSymmetricMatrix m;
    m.size = size;
    m.bandwidth = bandwidth;
    m.bands.resize(bandwidth + 1);
    for (int d = 0; d <= bandwidth; ++d) m.bands[d].assign(size - d, 0.0);
    return m;
  }

  double at(int i, int j) const {
    if (i < 0 || j < 0 || i >= size || j >= size)
      throw std::out_of_range("BandedSymmetricMatrix: index out of range");
    const int d = std::abs(i - j);
    return d > bandwidth ? 0.0 : bands[d][std::min(i, j)];
  }
};

// Matrix elements <i| x |j> of position in the harmonic basis of frequency omega:
// a single superdiagonal, <i| x |i+1> = sqrt((i+1)/(2 omega)).
inline BandedSymmetricMatrix position_matrix(int basis, double omega) {
  if (basis < 2) throw std::domain_error("position_matrix: basis must hold at least two states");
  if (omega <= 0) throw std::domain_error("position_matrix: omega must be positive");
  auto x = BandedSymmetricMatrix::zero(basis, 1);
  for (int i = 0; i + 1 < basis; ++i) x.bands[1][i] = std::sqrt((i + 1) / (2.0 * omega));
  return x;
}

// Product truncated to the shared basis. Used for powers of the (symmetric)
// position matrix, where the result is symmetric again; entries within
// max(i, j) + bandwidth < basis match the untruncated operator exactly, edge
// rows feel the cut, which is what the plateau search is for.
inline BandedSymmetricMatrix banded_product(const BandedSymmetricMatrix& a,
                                            const BandedSymmetricMatrix& b) {
  if (a.size != b.size) throw std::invalid_argument("banded_product: size mismatch");
  const int size = a.size;
  auto c = BandedSymmetricMatrix::zero(size, std::min(size - 1, a.bandwidth + b.bandwidth));
  for (int i = 0; i < size; ++i) {
    for (int d = 0; d <= c.bandwidth && i + d < size; ++d) {
      const int j = i + d;
      const int lo = std::max(0, std::max(i - a.bandwidth, j - b.bandwidth));
      const int hi = std::min(size - 1, std::min(i + a.bandwidth, j + b.bandwidth));
      double sum = 0.0;
      for (int m = lo; m <= hi; ++m) sum += a.at(i, m) * b.at(m, j);
      c.bands[d][i] = sum;
    }
  }
  return c;
}

// H = H0 + (lambda/2) x^2 + c lambda^2 x^3 in the eigenbasis of H0, whose
// diagonal is (i + 1/2) omega.
inline BandedSymmetricMatrix hamiltonian(int basis, double omega, double lambda, bool cubic) {
  if (basis < 8) throw std::domain_error("hamiltonian: basis must hold at least eight states");
  if (omega <= 0) throw std::domain_error("hamiltonian: omega must be positive");
  if (lambda < 0) throw std::domain_error("hamiltonian: lambda must be non-negative");
  const auto x = position_matrix(basis, omega);
  const auto x2 = banded_product(x, x);
  auto h = BandedSymmetricMatrix::zero(basis, cubic ? 3 : 2);
  for (int d = 0; d <= 2; ++d)
    for (int i = 0; i + d < basis; ++i) h.bands[d][i] = 0.5 * lambda * x2.bands[d][i];
  for (int i = 0; i < basis; ++i) h.bands[0][i] += (i + 0.5) * omega;
  if (cubic) {
    const auto x3 = banded_product(x2, x);
    for (int d = 0; d <= 3; ++d)
      for (int i = 0; i + d < basis; ++i) h.bands[d][i] += lambda * lambda * x3.bands[d][i];
  }
  return h;
}

}  // namespace hvp
