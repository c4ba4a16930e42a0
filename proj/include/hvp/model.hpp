#pragma once

#include "hvp/scalar.hpp"

#include <stdexcept>

namespace hvp {

enum class Arithmetic { exact_rational, extended_float };

// Problem definition: V(x) = (omega^2/2) x^2 + (lambda/2) x^2 + c lambda^2 x^3
// with hbar = m = 1, where c is 1 or 0 depending on `cubic`. `state` is the
// unperturbed level index n and `max_order` the truncation order K of the
// energy series in lambda.
struct ModelSpec {
  Rational omega = Rational(1);
  int state = 0;
  bool cubic = true;
  int max_order = 8;
  Arithmetic mode = Arithmetic::exact_rational;

  void validate() const {
    if (omega <= 0) throw std::domain_error("ModelSpec: omega must be positive");
    if (state < 0) throw std::domain_error("ModelSpec: state index must be non-negative");
    if (max_order < 1) throw std::domain_error("ModelSpec: series order must be at least 1");
  }
};

}  // namespace hvp
