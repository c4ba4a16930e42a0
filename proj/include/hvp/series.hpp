#pragma once

#include "hvp/model.hpp"
#include "hvp/scalar.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hvp {

// Coefficients A_N^(k) of the moment expansions <n| x^N |n> = sum_k A_N^(k) lambda^k.
// Row k holds powers N = 0..max_moment(k); the triangular cut is exactly as far as
// the recurrences can advance the power at each order, and as far as higher orders
// ever need (the only power-raising dependency sits two orders below).
template <class S>
class CoefficientTable {
 public:
  explicit CoefficientTable(int max_order) : max_order_(max_order) {
    if (max_order < 0) throw std::domain_error("CoefficientTable: negative order");
    rows_.resize(max_order + 1);
    filled_.resize(max_order + 1);
    for (int k = 0; k <= max_order; ++k) {
      rows_[k].assign(static_cast<size_t>(max_moment(k)) + 1, S(0));
      filled_[k].assign(static_cast<size_t>(max_moment(k)) + 1, false);
    }
  }

  int max_order() const { return max_order_; }
  int max_moment(int order) const { return max_order_ - order + 3; }

  bool has(int power, int order) const {
    return order >= 0 && order <= max_order_ && power >= 0 && power <= max_moment(order) &&
           filled_[order][power];
  }

  // A_N^(k) with the convention that negative indices contribute nothing.
  S get(int power, int order) const {
    if (power < 0 || order < 0) return S(0);
    return at(power, order);
  }

  const S& at(int power, int order) const {
    check_range(power, order);
    if (!filled_[order][power])
      throw std::logic_error("CoefficientTable: entry requested before it was computed");
    return rows_[order][power];
  }

  void set(int power, int order, S value) {
    check_range(power, order);
    if (filled_[order][power]) throw std::logic_error("CoefficientTable: entry already set");
    rows_[order][power] = std::move(value);
    filled_[order][power] = true;
  }

 private:
  void check_range(int power, int order) const {
    if (order < 0 || order > max_order_ || power < 0 || power > max_moment(order))
      throw std::logic_error("CoefficientTable: index outside the stored triangle");
  }

  int max_order_;
  std::vector<std::vector<S>> rows_;
  std::vector<std::vector<bool>> filled_;
};

// Energy perturbation series E_n(lambda) ~ sum_{k=0..K} E^(k) lambda^k.
template <class S>
struct EnergySeries {
  ModelSpec spec;
  std::vector<S> coefficients;

  int order() const { return static_cast<int>(coefficients.size()) - 1; }

  const S& at(int k) const {
    if (k < 0 || k > order()) throw std::logic_error("EnergySeries: order out of range");
    return coefficients[k];
  }
};

template <class S>
struct SeriesResult {
  EnergySeries<S> energy;
  CoefficientTable<S> moments;
};

namespace detail {

template <class S>
S cubic_factor(const ModelSpec& spec) {
  return S(spec.cubic ? 1 : 0);
}

template <class S>
S omega_squared(const ModelSpec& spec) {
  S w = from_rational<S>(spec.omega);
  return w * w;
}

}  // namespace detail

// E^(0) = omega (n + 1/2).
template <class S>
S unperturbed_energy(const ModelSpec& spec) {
  spec.validate();
  return from_rational<S>(spec.omega * Rational(2 * spec.state + 1, 2));
}

// E^(k) for k >= 1 from the first-order response of <H> to the coupling:
//   k E^(k) = (1/2) A_2^(k-1) + 2 c A_3^(k-2).
template <class S>
S energy_coefficient(const ModelSpec& spec, const CoefficientTable<S>& moments, int order) {
  if (order < 1) throw std::domain_error("energy_coefficient: defined for order >= 1");
  S value = moments.get(2, order - 1) / S(2) +
            S(2) * detail::cubic_factor<S>(spec) * moments.get(3, order - 2);
  return value / S(order);
}

// Order-k coefficient of the odd-moment seed A_1^(k), from the force balance
// <V'(x)> = 0:  omega^2 A_1^(k) + A_1^(k-1) + 3 c A_2^(k-2) = 0.
template <class S>
S seed_odd_moment(const ModelSpec& spec, const CoefficientTable<S>& moments, int order) {
  if (order < 0) throw std::domain_error("seed_odd_moment: negative order");
  S rhs = moments.get(1, order - 1) +
          S(3) * detail::cubic_factor<S>(spec) * moments.get(2, order - 2);
  return -rhs / detail::omega_squared<S>(spec);
}

// Advances the order-k hypervirial identity to its highest stored power: solves it
// for A_M^(k), M >= 2, using this order's lower powers, the two previous orders,
// and E^(0..k):
//   omega^2 A_M^(k) = (2(M-1)/M) [ sum_{j=0..k} E^(j) A_{M-2}^(k-j)
//                                  + (1/8)(M-2)(M-3) A_{M-4}^(k)
//                                  - c (2M+1)/(2(M-1)) A_{M+1}^(k-2) ] - A_M^(k-1).
template <class S>
S moment_coefficient(const ModelSpec& spec, const CoefficientTable<S>& moments,
                     const std::vector<S>& energies, int power, int order) {
  if (power < 2) throw std::domain_error("moment_coefficient: power must be >= 2");
  if (order < 0 || static_cast<int>(energies.size()) <= order)
    throw std::domain_error("moment_coefficient: energies must cover orders 0..k");
  const int m = power;
  S sum(0);
  for (int j = 0; j <= order; ++j) sum += energies[j] * moments.get(m - 2, order - j);
  sum += S((m - 2) * (m - 3)) / S(8) * moments.get(m - 4, order);
  sum -= detail::cubic_factor<S>(spec) * S(2 * m + 1) / S(2 * (m - 1)) *
         moments.get(m + 1, order - 2);
  S value = S(2 * (m - 1)) / S(m) * sum - moments.get(m, order - 1);
  return value / detail::omega_squared<S>(spec);
}

template <class S>
S moment_coefficient(const ModelSpec& spec, const CoefficientTable<S>& moments,
                     const EnergySeries<S>& energies, int power, int order) {
  return moment_coefficient(spec, moments, energies.coefficients, power, order);
}

// Order-0 slice of the table: the unperturbed moments <n| x^N |n>, reaching at
// least power n_max. Even entries are strictly positive, odd ones zero.
template <class S>
CoefficientTable<S> harmonic_moment_table(const ModelSpec& spec, int n_max) {
  spec.validate();
  if (n_max < 0) throw std::domain_error("harmonic_moment_table: n_max must be non-negative");
  CoefficientTable<S> table(std::max(0, n_max - 3));
  const std::vector<S> energies{unperturbed_energy<S>(spec)};
  table.set(0, 0, S(1));
  table.set(1, 0, S(0));
  for (int m = 2; m <= table.max_moment(0); ++m)
    table.set(m, 0, moment_coefficient(spec, table, energies, m, 0));
  return table;
}

// Builds the complete series order by order: E^(k) first (it needs only rows
// below k), then the order-k moment row from power 0 upward, so every entry is
// present before anything reads it.
template <class S>
SeriesResult<S> compute_series(const ModelSpec& spec) {
  spec.validate();
  const int top = spec.max_order;
  CoefficientTable<S> moments(top);
  std::vector<S> energies;
  energies.reserve(top + 1);
  energies.push_back(unperturbed_energy<S>(spec));
  for (int k = 0; k <= top; ++k) {
    if (k >= 1) energies.push_back(energy_coefficient(spec, moments, k));
    moments.set(0, k, S(k == 0 ? 1 : 0));  // normalization: <x^0> = 1
    moments.set(1, k, seed_odd_moment(spec, moments, k));
    for (int m = 2; m <= moments.max_moment(k); ++m)
      moments.set(m, k, moment_coefficient(spec, moments, energies, m, k));
  }
  return {EnergySeries<S>{spec, std::move(energies)}, std::move(moments)};
}

// Order-k coefficient of the hypervirial relation for <x^N>, written so that a
// correct table gives exactly zero:
//   sum_{j=0..k} E^(j) A_N^(k-j)
//     - (N+2)/(2(N+1)) [ omega^2 A_{N+2}^(k) + A_{N+2}^(k-1) ]
//     - c (2N+5)/(2(N+1)) A_{N+3}^(k-2)
//     + (1/8) N(N-1) A_{N-2}^(k).
// Defined wherever the table holds the entries, i.e. N <= max_order - k + 1.
template <class S>
S hypervirial_residual(const SeriesResult<S>& table, int power, int order) {
  if (power < 0 || order < 0) throw std::domain_error("hypervirial_residual: negative index");
  const ModelSpec& spec = table.energy.spec;
  const CoefficientTable<S>& a = table.moments;
  const int n = power;
  S lhs(0);
  for (int j = 0; j <= order; ++j) lhs += table.energy.at(j) * a.get(n, order - j);
  S rhs = S(n + 2) / S(2 * (n + 1)) *
          (detail::omega_squared<S>(spec) * a.get(n + 2, order) + a.get(n + 2, order - 1));
  rhs += detail::cubic_factor<S>(spec) * S(2 * n + 5) / S(2 * (n + 1)) *
         a.get(n + 3, order - 2);
  rhs -= S(n * (n - 1)) / S(8) * a.get(n - 2, order);
  return lhs - rhs;
}

// Truncated sum through lambda^m, evaluated by Horner's rule in double precision.
template <class S>
double partial_sum(const EnergySeries<S>& series, double lambda, int m) {
  if (m < 0 || m > series.order())
    throw std::domain_error("partial_sum: truncation order outside the series");
  double acc = 0.0;
  for (int k = m; k >= 0; --k) acc = acc * lambda + to_double(series.at(k));
  return acc;
}

// Same truncated sum carried out in the series' own scalar type.
template <class S>
S evaluate_series(const EnergySeries<S>& series, const S& lambda, int m) {
  if (m < 0 || m > series.order())
    throw std::domain_error("evaluate_series: truncation order outside the series");
  S acc(0);
  for (int k = m; k >= 0; --k) acc = acc * lambda + series.at(k);
  return acc;
}

// Closed-form fourth-order truncation quoted alongside the published reference
// tables. Its lambda^3 and lambda^4 brackets carry a (2n+1)^2 term that parity
// forbids at those orders and that contradicts the recurrence series and the
// matrix-mechanics oracle, so this is reported for comparison only and never
// used as ground truth. The CSV column for it keeps its legacy name "eq13".
inline double reference_fourth_order(int n, double omega, double lambda) {
  if (n < 0 || omega <= 0) throw std::domain_error("reference_fourth_order: bad state or omega");
  const double half = n + 0.5;
  const double odd = 2.0 * n + 1.0;
  const double odd_sq = odd * odd;  // the disputed (2n+1)^2 factor, kept verbatim
  const double w = omega;
  const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
  double value = w * half;
  value += lambda / (2.0 * w) * half;
  value -= lambda * lambda / (8.0 * w3) * half;
  value -= lambda * lambda * lambda / w4 * (5.0 / (96.0 * w) * odd + 2.0 / 3.0 * odd_sq);
  value += lambda * lambda * lambda * lambda / (4.0 * w4) *
           (25.0 / (96.0 * w3) * half + 23.0 / (12.0 * w2) * odd_sq +
            3.5 * (2.0 * n * n + 2.0 * n + 1.0));
  return value;
}

}  // namespace hvp
