#include "unseen/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "unseen/error.hpp"

namespace unseen {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  bool converged = true;
  std::uint64_t evaluations = 0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      converged = false;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth) {
  if (a == b) {
    return {};
  }
  SimpsonState state{f, max_depth};
  // 16 initial panels.
  constexpr int kPanels = 16;
  const double width = (b - a) / kPanels;
  CompensatedSum<double> total;
  double fa = state.eval(a);
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == kPanels ? b : a + (p + 1) * width;
    const double mid = 0.5 * (lo + hi);
    const double fm = state.eval(mid);
    const double fb = state.eval(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += state.recurse(lo, hi, fa, fm, fb, whole, abs_tol / kPanels, 0);
    fa = fb;
  }
  return {total.value(), state.converged, state.evaluations};
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw InvalidArgument("not a number: '" + text + "'");
  }
  return value;
}

std::uint64_t parse_uint(const std::string& text) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw InvalidArgument("not a nonnegative integer: '" + text + "'");
  }
  return value;
}

}  // namespace unseen
