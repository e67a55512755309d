#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

namespace ostrowski::oracle {

using Fn = std::function<double(double)>;

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureEstimate {
  double value = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// Neumaier-compensated accumulator. Summation order is fixed by the caller,
// which keeps every reduction in this module bit-reproducible.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }

  double result() const { return sum + carry; }
};

// Gauss 7 / Kronrod 15 pair on [-1, 1]. Nodes are symmetric; index 0 is the
// center. Gauss weights are attached to the even-indexed Kronrod nodes.
inline constexpr std::array<double, 8> kNodes = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr std::array<double, 8> kKronrodW = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.06309209262997855,
    0.02293532201052922,
};
inline constexpr std::array<double, 4> kGaussW = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Panel {
  double left = 0.0;
  double right = 0.0;
  double value = 0.0;  // Kronrod-15 estimate
  double err = 0.0;    // |K15 - G7|
};

inline Panel gk15(const Fn& f, double left, double right) {
  const double center = 0.5 * (left + right);
  const double half = 0.5 * (right - left);

  auto sample = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw OracleError("integrand is not finite");
    return v;
  };

  const double f0 = sample(center);
  double k15 = kKronrodW[0] * f0;
  double g7 = kGaussW[0] * f0;
  for (std::size_t i = 1; i < kNodes.size(); ++i) {
    const double dx = half * kNodes[i];
    const double fi = sample(center + dx) + sample(center - dx);
    k15 += kKronrodW[i] * fi;
    if (i % 2 == 0) g7 += kGaussW[i / 2] * fi;
  }

  Panel p;
  p.left = left;
  p.right = right;
  p.value = half * k15;
  p.err = std::fabs(half * (k15 - g7));
  return p;
}

struct WorstFirst {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.err != b.err) return a.err > b.err;
    return a.left < b.left;
  }
};

}  // namespace detail

// Adaptive bisection driven by the G7/K15 discrepancy. The reported value is
// the compensated sum of panel estimates taken in left-to-right order, so the
// result does not depend on the refinement schedule's internal ordering.
// Exceeding the evaluation budget returns converged = false.
inline QuadratureEstimate integrate(const Fn& f, double a, double b, double tol,
                                    long max_evaluations = 1000000) {
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: requires tol > 0");

  std::multiset<detail::Panel, detail::WorstFirst> active;
  active.insert(detail::gk15(f, a, b));
  long evals = 15;

  double running_err = active.begin()->err;
  int since_resync = 0;

  auto resum_err = [&active]() {
    detail::CompensatedSum s;
    for (const auto& p : active) s.add(p.err);
    return s.result();
  };

  while (running_err > tol && evals + 30 <= max_evaluations) {
    const detail::Panel worst = *active.begin();
    active.erase(active.begin());
    const double mid = 0.5 * (worst.left + worst.right);
    const detail::Panel l = detail::gk15(f, worst.left, mid);
    const detail::Panel r = detail::gk15(f, mid, worst.right);
    active.insert(l);
    active.insert(r);
    evals += 30;
    running_err += (l.err + r.err) - worst.err;
    if (++since_resync == 64) {
      running_err = resum_err();
      since_resync = 0;
    }
  }

  std::vector<detail::Panel> panels(active.begin(), active.end());
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.left < y.left; });

  detail::CompensatedSum value, err;
  for (const auto& p : panels) {
    value.add(p.value);
    err.add(p.err);
  }

  QuadratureEstimate out;
  out.value = value.result();
  out.err_estimate = err.result();
  out.evaluations = evals;
  out.converged = out.err_estimate <= tol;
  return out;
}

enum class ConvexityTarget { Self, AbsDeriv, AbsDerivPow };

// Minimum over a fixed sample of the strong-convexity defect
//   t h(x) + (1-t) h(y) - c t(1-t)(x-y)^2 - h(tx + (1-t)y)
// for x, y on a 65-point grid and t in {1/8, ..., 7/8}. A certificate passes
// when the returned slack is >= -1e-10. This is a falsifier on a fixed grid,
// not a proof.
inline double convexity_slack(const Fn& h, double a, double b, double c) {
  constexpr int kGrid = 64;
  std::array<double, kGrid + 1> xs{};
  std::array<double, kGrid + 1> hs{};
  for (int i = 0; i <= kGrid; ++i) {
    xs[i] = (i == kGrid) ? b : a + (b - a) * i / kGrid;
    hs[i] = h(xs[i]);
  }

  double slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      const double dx = xs[i] - xs[j];
      for (int k = 1; k <= 7; ++k) {
        const double t = k / 8.0;
        const double mixed = h(t * xs[i] + (1.0 - t) * xs[j]);
        const double s =
            t * hs[i] + (1.0 - t) * hs[j] - c * t * (1.0 - t) * dx * dx - mixed;
        slack = std::min(slack, s);
      }
    }
  }
  return slack;
}

inline double check_strong_convexity(const Fn& fn, double a, double b, double c,
                                     ConvexityTarget target, double q = 1.0) {
  if (!(c >= 0.0)) throw std::invalid_argument("check_strong_convexity: c >= 0");
  switch (target) {
    case ConvexityTarget::Self:
      return convexity_slack(fn, a, b, c);
    case ConvexityTarget::AbsDeriv:
      return convexity_slack([&fn](double x) { return std::fabs(fn(x)); }, a, b, c);
    case ConvexityTarget::AbsDerivPow:
      return convexity_slack(
          [&fn, q](double x) { return std::pow(std::fabs(fn(x)), q); }, a, b, c);
  }
  throw std::invalid_argument("check_strong_convexity: bad target");
}

// Largest modulus consistent with the sampled second difference of h:
//   c* = max(0, min_j (h(x+d) - 2h(x) + h(x-d)) / (2 d^2)),  d = (b-a)/1024,
// over 513 points with the stencil kept inside [a, b]. An estimate only;
// callers re-validate with check_strong_convexity before relying on it.
inline double estimate_modulus(const Fn& h, double a, double b) {
  const double d = (b - a) / 1024.0;
  const double lo = a + d;
  const double hi = b - d;
  double min_second = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 512; ++j) {
    const double x = lo + (hi - lo) * j / 512.0;
    const double second = (h(x + d) - 2.0 * h(x) + h(x - d)) / (d * d);
    min_second = std::min(min_second, second);
  }
  return std::max(0.0, 0.5 * min_second);
}

// Grid supremum of |f'| inflated by 1.0001; used when estimating M for
// functions without analytic derivative bounds.
inline double sup_abs_derivative(const Fn& fprime, double a, double b) {
  constexpr int kGrid = 1024;
  double sup = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = (i == kGrid) ? b : a + (b - a) * i / kGrid;
    sup = std::max(sup, std::fabs(fprime(x)));
  }
  return sup * 1.0001;
}

}  // namespace ostrowski::oracle
