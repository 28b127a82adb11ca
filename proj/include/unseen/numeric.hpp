#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace unseen {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum, which is the
/// common case for alternating series with growing terms.
template <typename Value>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Value value) {
    const Value total = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - total) + value;
    } else {
      compensation_ += (value - total) + sum_;
    }
    sum_ = total;
    return *this;
  }

  Value value() const { return sum_ + compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

struct QuadratureResult {
  double value = 0.0;
  bool converged = true;
  std::uint64_t evaluations = 0;
};

/// Adaptive Simpson quadrature of f over [a, b]. Subintervals are split until
/// the Richardson error estimate drops below the (halved) local tolerance or
/// max_depth is reached; reaching the depth limit clears `converged`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth = 40);

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol = 1e-10);

/// Shortest text that still has 17 significant digits ("%.17g").
std::string format_double(double value);

/// Parses a floating-point field; rejects trailing garbage.
double parse_double(const std::string& text);

/// Parses a nonnegative integer field; rejects signs and trailing garbage.
std::uint64_t parse_uint(const std::string& text);

}  // namespace unseen
