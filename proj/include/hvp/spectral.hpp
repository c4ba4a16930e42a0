#pragma once

#include "hvp/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hvp {

// Lowest `count` eigenvalues by cyclic Jacobi iteration on a dense copy,
// ascending. Dense O(B^2) work is fine at the basis sizes the plateau search
// visits (at most 512).
inline std::vector<double> lowest_eigenvalues(const BandedSymmetricMatrix& mat, int count) {
  if (count < 1 || count > mat.size)
    throw std::domain_error("lowest_eigenvalues: count must lie in 1..basis");
  const int n = mat.size;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  double frobenius_sq = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - mat.bandwidth); j <= std::min(n - 1, i + mat.bandwidth); ++j) {
      a[i][j] = mat.at(i, j);
      frobenius_sq += a[i][j] * a[i][j];
    }
  const double stop = 1e-14 * std::sqrt(frobenius_sq);

  bool converged = false;
  for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
    double off_sq = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off_sq += 2.0 * a[p][q] * a[p][q];
    if (std::sqrt(off_sq) <= stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        // exact rotation annihilating a[p][q]
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = a[p][r] = c * arp - s * arq;
          a[r][q] = a[q][r] = s * arp + c * arq;
        }
        const double app = a[p][p], aqq = a[q][q];
        a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a[p][q] = a[q][p] = 0.0;
      }
    }
  }
  if (!converged) throw std::runtime_error("lowest_eigenvalues: Jacobi iteration did not settle");

  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = a[i][i];
  std::sort(values.begin(), values.end());
  values.resize(count);
  return values;
}

struct ConvergedEnergy {
  double value = 0.0;
  bool converged = false;
  int basis = 0;           // basis size of the accepted estimate
  double plateau_delta = 0.0;  // last change between successive basis doublings
};

// Level-n energy by basis doubling (32, 64, ..., 512) until two successive
// estimates agree within tol. Failure to plateau reports converged = false
// rather than throwing: a report cell wants the best value plus the verdict.
// With the cubic term on, the potential is unbounded below, so the plateau
// value is a resonance-style estimate and never claimed as a variational bound.
inline ConvergedEnergy converged_energy(int n, double omega, double lambda, bool cubic,
                                        double tol) {
  if (tol <= 0) throw std::domain_error("converged_energy: tolerance must be positive");
  if (n < 0) throw std::domain_error("converged_energy: state index must be non-negative");
  ConvergedEnergy out;
  int start = 32;
  while (start <= n) start *= 2;
  bool have_previous = false;
  double previous = 0.0;
  for (int basis = start; basis <= 512; basis *= 2) {
    const double value = lowest_eigenvalues(hamiltonian(basis, omega, lambda, cubic), n + 1)[n];
    out.value = value;
    out.basis = basis;
    if (have_previous) {
      out.plateau_delta = std::fabs(value - previous);
      if (out.plateau_delta < tol) {
        out.converged = true;
        return out;
      }
    }
    previous = value;
    have_previous = true;
  }
  out.converged = false;
  return out;
}

namespace detail {

inline std::vector<double> apply_banded(const BandedSymmetricMatrix& m,
                                        const std::vector<double>& v) {
  std::vector<double> out(m.size, 0.0);
  for (int i = 0; i < m.size; ++i) {
    double sum = 0.0;
    const int lo = std::max(0, i - m.bandwidth);
    const int hi = std::min(m.size - 1, i + m.bandwidth);
    for (int j = lo; j <= hi; ++j) sum += m.at(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

}  // namespace detail

// Rayleigh-Schrodinger expansion of level n in powers of lambda, by matrix
// recursion in a truncated basis with intermediate normalization
// <n|psi^(k)> = delta_k0. The perturbation splits as lambda W1 + lambda^2 W2
// with W1 = x^2/2 and W2 = x^3 (if the cubic term is on), so
//   E^(k) = <n| W1 psi^(k-1) + W2 psi^(k-2) >,
//   (H0 - E^(0)) psi^(k) = sum_{j=1..k} E^(j) psi^(k-j) - W1 psi^(k-1) - W2 psi^(k-2).
// Entirely independent of the hypervirial route; used to cross-check it.
inline std::vector<double> rspt_coefficients(int n, double omega, bool cubic, int max_order,
                                             int basis) {
  if (n < 0 || max_order < 0) throw std::domain_error("rspt_coefficients: bad state or order");
  if (omega <= 0) throw std::domain_error("rspt_coefficients: omega must be positive");
  if (basis < n + 3 * max_order + 10)
    throw std::domain_error(
        "rspt_coefficients: basis too small; each order climbs at most three rungs");

  const auto x = position_matrix(basis, omega);
  auto w1 = banded_product(x, x);
  for (auto& band : w1.bands)
    for (double& entry : band) entry *= 0.5;
  const auto w2 = banded_product(banded_product(x, x), x);

  std::vector<double> level(basis);
  for (int i = 0; i < basis; ++i) level[i] = (i + 0.5) * omega;

  std::vector<std::vector<double>> psi;
  std::vector<double> energy;
  std::vector<double> ground(basis, 0.0);
  ground[n] = 1.0;
  psi.push_back(std::move(ground));
  energy.push_back(level[n]);

  for (int k = 1; k <= max_order; ++k) {
    std::vector<double> driven = detail::apply_banded(w1, psi[k - 1]);
    if (cubic && k >= 2) {
      const std::vector<double> w2_term = detail::apply_banded(w2, psi[k - 2]);
      for (int i = 0; i < basis; ++i) driven[i] += w2_term[i];
    }
    energy.push_back(driven[n]);

    std::vector<double> next(basis, 0.0);
    for (int i = 0; i < basis; ++i) {
      if (i == n) continue;
      double rhs = -driven[i];
      for (int j = 1; j <= k; ++j) rhs += energy[j] * psi[k - j][i];
      next[i] = rhs / (level[i] - level[n]);
    }
    psi.push_back(std::move(next));
  }
  return energy;
}

}  // namespace hvp
