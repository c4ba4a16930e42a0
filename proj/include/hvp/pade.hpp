#pragma once

#include "hvp/scalar.hpp"
#include "hvp/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hvp {

// The requested [N,M] table entry does not exist: the coefficient-matching
// system is inconsistent.
struct DefectiveApproximant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The denominator vanishes exactly at the requested point.
struct PoleAtEvaluationPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rational approximant  leading (1 + sum_i p_i lambda^i) / (1 + sum_j q_j lambda^j)
// whose Taylor expansion matches the source series through order N + M, where
// N = denominator degree and M = numerator degree (the [N,M] convention used by
// the report's E[3,3] and E[3,4] columns).
template <class S>
struct PadeApproximant {
  S leading;                  // E^(0)
  std::vector<S> numerator;   // p_1..p_M
  std::vector<S> denominator; // q_1..q_N

  int den_order() const { return static_cast<int>(denominator.size()); }
  int num_order() const { return static_cast<int>(numerator.size()); }
};

namespace detail {

template <class S>
S abs_value(const S& x) {
  using std::abs;
  return abs(x);
}

template <class S>
struct PivotPolicy {
  // Inexact scalars: entries below a fixed fraction of the matrix scale count
  // as zero, and full pivoting keeps the elimination stable.
  static constexpr bool full_pivoting = true;
  S threshold;
  explicit PivotPolicy(const std::vector<std::vector<S>>& a) : threshold(0) {
    S scale(1);
    for (const auto& row : a)
      for (const S& x : row)
        if (abs_value(x) > scale) scale = abs_value(x);
    threshold = scale * S(1e-30);
  }
  bool is_zero(const S& x) const { return abs_value(x) <= threshold; }
};

template <>
struct PivotPolicy<Rational> {
  static constexpr bool full_pivoting = false;
  explicit PivotPolicy(const std::vector<std::vector<Rational>>&) {}
  bool is_zero(const Rational& x) const { return x == 0; }
};

// Solves a x = b by Gaussian elimination with row (and, for inexact scalars,
// full) pivoting. A consistent singular system takes the canonical solution
// with the free unknowns set to zero; an inconsistent one throws
// DefectiveApproximant. The zero-tail series pins this choice: its matching
// system is all-zero yet the approximant exists (everything zero).
template <class S>
std::vector<S> solve_matching_system(std::vector<std::vector<S>> a, std::vector<S> b) {
  const int n = static_cast<int>(b.size());
  PivotPolicy<S> policy(a);
  std::vector<int> unknown_of_column(n);
  for (int c = 0; c < n; ++c) unknown_of_column[c] = c;

  int rank = 0;
  for (int step = 0; step < n; ++step) {
    int pivot_row = -1, pivot_col = -1;
    if constexpr (PivotPolicy<S>::full_pivoting) {
      S best(0);
      for (int r = rank; r < n; ++r)
        for (int c = step; c < n; ++c)
          if (!policy.is_zero(a[r][c]) && abs_value(a[r][c]) > best) {
            best = abs_value(a[r][c]);
            pivot_row = r;
            pivot_col = c;
          }
    } else {
      for (int c = step; c < n && pivot_col < 0; ++c)
        for (int r = rank; r < n; ++r)
          if (!policy.is_zero(a[r][c])) {
            pivot_row = r;
            pivot_col = c;
            break;
          }
    }
    if (pivot_row < 0) break;  // remaining block is zero; unknowns there stay free

    std::swap(a[rank], a[pivot_row]);
    std::swap(b[rank], b[pivot_row]);
    if (pivot_col != step) {
      for (int r = 0; r < n; ++r) std::swap(a[r][step], a[r][pivot_col]);
      std::swap(unknown_of_column[step], unknown_of_column[pivot_col]);
    }
    for (int r = rank + 1; r < n; ++r) {
      if (policy.is_zero(a[r][step])) continue;
      S factor = a[r][step] / a[rank][step];
      for (int c = step; c < n; ++c) a[r][c] -= factor * a[rank][c];
      b[r] -= factor * b[rank];
    }
    ++rank;
  }

  for (int r = rank; r < n; ++r)
    if (!policy.is_zero(b[r]))
      throw DefectiveApproximant(
          "coefficient-matching system is inconsistent; the requested entry does not exist");

  std::vector<S> by_column(n, S(0));
  for (int r = rank - 1; r >= 0; --r) {
    S acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * by_column[c];
    by_column[r] = acc / a[r][r];
  }

  std::vector<S> solution(n, S(0));
  for (int c = 0; c < n; ++c) solution[unknown_of_column[c]] = by_column[c];
  return solution;
}

template <class S>
std::vector<S> normalized_coefficients(const EnergySeries<S>& series) {
  const S& leading = series.at(0);
  if (leading == S(0)) throw std::domain_error("build_pade: vanishing leading coefficient");
  std::vector<S> e(series.order() + 1);
  for (int k = 0; k <= series.order(); ++k) e[k] = series.at(k) / leading;
  return e;
}

}  // namespace detail

// Solves the matching conditions sum_{j=0..N} q_j e_{k-j} = 0 (k = M+1..M+N,
// q_0 = 1, e_{<0} = 0) for the denominator, then reads off the numerator as
// p_i = sum_{j=0..min(i,N)} q_j e_{i-j}.
template <class S>
PadeApproximant<S> build_pade(const EnergySeries<S>& series, int den_order, int num_order) {
  if (den_order < 0 || num_order < 0)
    throw std::domain_error("build_pade: orders must be non-negative");
  if (series.order() < den_order + num_order)
    throw std::domain_error("build_pade: series must reach order N + M");

  std::vector<S> e = detail::normalized_coefficients(series);
  auto e_at = [&](int i) -> S {
    return (i >= 0 && i < static_cast<int>(e.size())) ? e[i] : S(0);
  };

  std::vector<std::vector<S>> a(den_order, std::vector<S>(den_order, S(0)));
  std::vector<S> rhs(den_order, S(0));
  for (int r = 0; r < den_order; ++r) {
    const int k = num_order + 1 + r;
    for (int c = 0; c < den_order; ++c) a[r][c] = e_at(k - (c + 1));
    rhs[r] = -e_at(k);
  }
  std::vector<S> q =
      den_order > 0 ? detail::solve_matching_system(std::move(a), std::move(rhs))
                    : std::vector<S>{};

  std::vector<S> p(num_order, S(0));
  for (int i = 1; i <= num_order; ++i) {
    S acc = e_at(i);
    for (int j = 1; j <= std::min(i, den_order); ++j) acc += q[j - 1] * e_at(i - j);
    p[i - 1] = acc;
  }
  return {series.at(0), std::move(p), std::move(q)};
}

struct PadeEvaluation {
  double value = 0;
  double denominator_magnitude = 0;  // |1 + sum q_j lambda^j|, poles announce themselves here
};

// Value and normalized denominator magnitude at lambda. Callers treat a small
// magnitude (default threshold 1e-3) as pole-contaminated; an exact zero throws.
template <class S>
PadeEvaluation evaluate_pade(const PadeApproximant<S>& approx, double lambda) {
  double num = 0.0;
  for (int i = approx.num_order(); i >= 1; --i)
    num = (num + to_double(approx.numerator[i - 1])) * lambda;
  num += 1.0;
  double den = 0.0;
  for (int j = approx.den_order(); j >= 1; --j)
    den = (den + to_double(approx.denominator[j - 1])) * lambda;
  den += 1.0;
  if (den == 0.0)
    throw PoleAtEvaluationPoint("denominator vanishes at lambda = " + std::to_string(lambda));
  return {to_double(approx.leading) * num / den, std::fabs(den)};
}

// Same evaluation carried out in the approximant's own scalar type.
template <class S>
S evaluate_pade_exact(const PadeApproximant<S>& approx, const S& lambda) {
  S num(0);
  for (int i = approx.num_order(); i >= 1; --i)
    num = (num + approx.numerator[i - 1]) * lambda;
  num += S(1);
  S den(0);
  for (int j = approx.den_order(); j >= 1; --j)
    den = (den + approx.denominator[j - 1]) * lambda;
  den += S(1);
  if (den == S(0)) throw PoleAtEvaluationPoint("denominator vanishes at the evaluation point");
  return approx.leading * num / den;
}

// Residual of each matched Taylor order 0..N+M of  Q(lambda) E(lambda)/E^(0) - P(lambda);
// identically zero for a correctly built approximant (exactly so in rational mode).
template <class S>
std::vector<S> taylor_residuals(const PadeApproximant<S>& approx, const EnergySeries<S>& series) {
  const int n = approx.den_order(), m = approx.num_order();
  if (series.order() < n + m)
    throw std::domain_error("taylor_residuals: series must reach order N + M");
  std::vector<S> e = detail::normalized_coefficients(series);
  std::vector<S> residuals(n + m + 1, S(0));
  for (int k = 0; k <= n + m; ++k) {
    S acc = e[k];
    for (int j = 1; j <= std::min(k, n); ++j) acc += approx.denominator[j - 1] * e[k - j];
    if (k == 0)
      acc -= S(1);
    else if (k <= m)
      acc -= approx.numerator[k - 1];
    residuals[k] = acc;
  }
  return residuals;
}

// Real denominator roots inside [lo, hi]: a dense sign-change scan (2e4 panels)
// refined by bisection to 1e-12 absolute.
template <class S>
std::vector<double> real_poles_in(const PadeApproximant<S>& approx, double lo, double hi) {
  if (!(lo < hi)) throw std::domain_error("real_poles_in: interval must satisfy lo < hi");
  std::vector<double> q(approx.den_order());
  for (int j = 0; j < approx.den_order(); ++j) q[j] = to_double(approx.denominator[j]);
  auto den = [&](double x) {
    double acc = 0.0;
    for (int j = static_cast<int>(q.size()); j >= 1; --j) acc = (acc + q[j - 1]) * x;
    return acc + 1.0;
  };

  const int panels = 20000;
  const double width = (hi - lo) / panels;
  std::vector<double> roots;
  auto push_root = [&](double r) {
    if (roots.empty() || std::fabs(r - roots.back()) > 1e-9) roots.push_back(r);
  };

  double x0 = lo, f0 = den(lo);
  for (int i = 1; i <= panels; ++i) {
    const double x1 = (i == panels) ? hi : lo + i * width;
    const double f1 = den(x1);
    if (f0 == 0.0) push_root(x0);
    else if (f0 * f1 < 0.0) {
      double a = x0, b = x1, fa = f0;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = den(mid);
        if (fm == 0.0) { a = b = mid; break; }
        if (fa * fm < 0.0) b = mid;
        else { a = mid; fa = fm; }
      }
      push_root(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) push_root(hi);
  return roots;
}

}  // namespace hvp
