#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ostrowski::bounds {

// Closed-form right-hand sides of the Ostrowski-type bounds for a function f
// on [a, b] with |f'| <= M and a strong-convexity modulus c for |f'| (or for
// |f'|^q). Everything here is pure arithmetic; integrals live in the oracle.
//
// All evaluators are templates over the scalar type so the same formulas can
// be re-evaluated with a 50-digit floating type to cross-check the binary64
// results.
//
// The variants are deliberately built from shared term kernels: the c = 0 and
// q = 1 reductions and the midpoint specializations then agree bit-for-bit
// with their general forms instead of merely agreeing to rounding error.

class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <class Real>
void check_interval(Real x, Real a, Real b, Real M, Real c) {
  if (!(a < b)) throw std::invalid_argument("bounds: requires a < b");
  if (!(a <= x && x <= b)) throw std::invalid_argument("bounds: requires x in [a, b]");
  if (!(M > Real(0))) throw std::invalid_argument("bounds: requires M > 0");
  if (!(c >= Real(0))) throw std::invalid_argument("bounds: requires c >= 0");
}

template <class Real>
Real pow_q(Real base, Real q) {
  if (q == Real(1)) return base;
  using std::pow;
  return pow(base, q);
}

// (M^q - c d^2 / 6)^(1/q), with the exact shortcuts that keep the reductions
// bit-identical: c = 0 gives back M, q = 1 skips the root.
template <class Real>
Real radicand_root(Real M, Real Mq, Real c, Real d, Real q) {
  if (c == Real(0)) return M;
  const Real rad = Mq - c * (d * d) / Real(6);
  if (rad < Real(0))
    throw HypothesisError("bounds: negative radicand; hypothesis violated");
  if (q == Real(1)) return rad;
  using std::pow;
  return pow(rad, Real(1) / q);
}

template <class Real>
void check_hypothesis_sides(Real x, Real a, Real b, Real Mq, Real c) {
  const Real da = x - a;
  const Real db = b - x;
  const bool left = Mq >= c * da * da / Real(6);
  const bool right = Mq >= c * db * db / Real(6);
  if (left && right) return;
  std::string side = !left && !right ? "both segments" : (!left ? "left segment [a, x]" : "right segment [x, b]");
  throw HypothesisError("bounds: hypothesis M (or M^q) >= c d^2/6 fails on " + side);
}

// One half-weighted term (d^2 / (2 w)) * (M^q - c d^2/6)^(1/q).
template <class Real>
Real term_half(Real d, Real w, Real M, Real Mq, Real c, Real q) {
  return (d * d) / (Real(2) * w) * radicand_root(M, Mq, c, d, q);
}

// One Hoelder-weighted term (d^2 / w) * (1/(p+1))^(1/p) * (...)^(1/q).
template <class Real>
Real term_holder(Real d, Real w, Real K, Real M, Real Mq, Real c, Real q) {
  return (d * d) / w * K * radicand_root(M, Mq, c, d, q);
}

}  // namespace detail

template <class Real>
Real holder_weight(Real p) {
  using std::pow;
  return pow(Real(1) / (p + Real(1)), Real(1) / p);
}

template <class Real>
void check_holder_pair(Real p, Real q) {
  using std::abs;
  if (!(p > Real(1)) || !(q > Real(1)) ||
      abs(Real(1) / p + Real(1) / q - Real(1)) > Real(1e-12))
    throw std::invalid_argument("bounds: (p, q) is not a valid Hoelder pair");
}

template <class Real>
bool hypothesis_ok(Real x, Real a, Real b, Real M, Real c) {
  detail::check_interval(x, a, b, M, c);
  const Real da = x - a;
  const Real db = b - x;
  return M >= c * da * da / Real(6) && M >= c * db * db / Real(6);
}

template <class Real>
bool hypothesis_ok(Real x, Real a, Real b, Real M, Real c, Real power_q) {
  detail::check_interval(x, a, b, M, c);
  if (!(power_q >= Real(1))) throw std::invalid_argument("bounds: requires q >= 1");
  const Real Mq = detail::pow_q(M, power_q);
  const Real da = x - a;
  const Real db = b - x;
  return Mq >= c * da * da / Real(6) && Mq >= c * db * db / Real(6);
}

// |f(x) - avg| <= (x-a)^2/(2(b-a)) (M - c(x-a)^2/6) + (b-x)^2/(2(b-a)) (M - c(b-x)^2/6)
template <class Real>
Real sc_rhs_t1(Real x, Real a, Real b, Real M, Real c) {
  detail::check_interval(x, a, b, M, c);
  detail::check_hypothesis_sides(x, a, b, M, c);
  const Real w = b - a;
  return detail::term_half(x - a, w, M, M, c, Real(1)) +
         detail::term_half(b - x, w, M, M, c, Real(1));
}

// Classical form: the c -> 0 limit of the strongly convex bound.
template <class Real>
Real classic_ostrowski_rhs(Real x, Real a, Real b, Real M) {
  detail::check_interval(x, a, b, M, Real(0));
  const Real w = b - a;
  return detail::term_half(x - a, w, M, M, Real(0), Real(1)) +
         detail::term_half(b - x, w, M, M, Real(0), Real(1));
}

// |f(x) - avg| <= sum (d^2/(b-a)) (1/(p+1))^(1/p) (M^q - c d^2/6)^(1/q)
template <class Real>
Real sc_rhs_t2(Real x, Real a, Real b, Real M, Real c, Real p, Real q) {
  detail::check_interval(x, a, b, M, c);
  check_holder_pair(p, q);
  const Real Mq = detail::pow_q(M, q);
  detail::check_hypothesis_sides(x, a, b, Mq, c);
  const Real w = b - a;
  const Real K = holder_weight(p);
  return detail::term_holder(x - a, w, K, M, Mq, c, q) +
         detail::term_holder(b - x, w, K, M, Mq, c, q);
}

// Convex-|f'|^q form with the Hoelder weight but no strong-convexity gain.
template <class Real>
Real alomari_rhs(Real x, Real a, Real b, Real M, Real p) {
  detail::check_interval(x, a, b, M, Real(0));
  if (!(p > Real(1))) throw std::invalid_argument("bounds: requires p > 1");
  const Real w = b - a;
  const Real K = holder_weight(p);
  return detail::term_holder(x - a, w, K, M, M, Real(0), Real(1)) +
         detail::term_holder(b - x, w, K, M, M, Real(0), Real(1));
}

// Power-mean form: sum (d^2/(2(b-a))) (M^q - c d^2/6)^(1/q), q >= 1.
template <class Real>
Real sc_rhs_t3(Real x, Real a, Real b, Real M, Real c, Real q) {
  detail::check_interval(x, a, b, M, c);
  if (!(q >= Real(1))) throw std::invalid_argument("bounds: requires q >= 1");
  const Real Mq = detail::pow_q(M, q);
  detail::check_hypothesis_sides(x, a, b, Mq, c);
  const Real w = b - a;
  return detail::term_half(x - a, w, M, Mq, c, q) +
         detail::term_half(b - x, w, M, Mq, c, q);
}

// Midpoint specializations. Algebraically
//   t1: M(b-a)/4 - c(b-a)^3/96
//   t2: ((b-a)/2) (1/(p+1))^(1/p) (M^q - c(b-a)^2/24)^(1/q)
//   t3: ((b-a)/4) (M^q - c(b-a)^2/24)^(1/q)
// computed by evaluating the general forms at x = (a+b)/2 so the
// specialization is exact rather than a reassociated clone.
template <class Real>
Real midpoint_rhs_t1(Real a, Real b, Real M, Real c) {
  return sc_rhs_t1((a + b) / Real(2), a, b, M, c);
}

template <class Real>
Real midpoint_rhs_t2(Real a, Real b, Real M, Real c, Real p, Real q) {
  return sc_rhs_t2((a + b) / Real(2), a, b, M, c, p, q);
}

template <class Real>
Real midpoint_rhs_t3(Real a, Real b, Real M, Real c, Real q) {
  return sc_rhs_t3((a + b) / Real(2), a, b, M, c, q);
}

// Moment bounds used inside the proofs of the pointwise theorems:
//   weighted:   int_0^1 t |f'(..)|^q dt <= M^q/2 - c d^2/12
//   unweighted: int_0^1   |f'(..)|^q dt <= M^q   - c d^2/6
template <class Real>
Real segment_moment_bound(Real d, Real M, Real c, bool weighted,
                          std::optional<Real> power_q = std::nullopt) {
  if (!(M > Real(0))) throw std::invalid_argument("bounds: requires M > 0");
  if (!(c >= Real(0)) || !(d >= Real(0)))
    throw std::invalid_argument("bounds: requires c >= 0 and d >= 0");
  const Real q = power_q.value_or(Real(1));
  const Real Mq = detail::pow_q(M, q);
  if (!(Mq >= c * d * d / Real(6)))
    throw std::invalid_argument("bounds: segment moment requires M^q >= c d^2/6");
  const Real r = weighted ? Mq / Real(2) - c * d * d / Real(12)
                          : Mq - c * d * d / Real(6);
  return r;
}

// Product bound for two nonnegative strongly convex functions, as stated:
//   (1/(b-a)) int fg <= (1/3)[fa ga + fb gb] + (1/6)[fa gb + fb ga]
//                       - (c(b-a)^2/12)[fa + fb + ga + gb] + c(b-a)^4/30
template <class Real>
Real product_rhs_z1(Real fa, Real fb, Real ga, Real gb, Real a, Real b, Real c) {
  if (!(a < b)) throw std::invalid_argument("bounds: requires a < b");
  if (!(c >= Real(0))) throw std::invalid_argument("bounds: requires c >= 0");
  if (fa < Real(0) || fb < Real(0) || ga < Real(0) || gb < Real(0))
    throw std::invalid_argument("bounds: boundary values must be nonnegative");
  const Real w = b - a;
  const Real w2 = w * w;
  return (fa * ga + fb * gb) / Real(3) + (fa * gb + fb * ga) / Real(6) -
         c * w2 / Real(12) * (fa + fb + ga + gb) + c * (w2 * w2) / Real(30);
}

// Weighted moments of a single function h over [a, b]:
//   left = int (x-a) h, right = int (b-x) h, cross = int (x-a)(b-x) h.
struct WeightedMoments {
  double left = 0.0;
  double right = 0.0;
  double cross = 0.0;
};

// Left side of the chord-rearrangement product bound, with the stated
// 1/(b-a)^3 weight on the cross moments.
inline double z2_lhs(double fa, double fb, double ga, double gb,
                     const WeightedMoments& mf, const WeightedMoments& mg,
                     double a, double b, double c) {
  const double w = b - a;
  const double w2 = w * w;
  const double w3 = w2 * w;
  return gb * mf.left / w2 + ga * mf.right / w2 + fb * mg.left / w2 +
         fa * mg.right / w2 - c * mf.cross / w3 - c * mg.cross / w3;
}

inline double z2_rhs(double mean_fg, double fa, double fb, double ga, double gb,
                     double a, double b, double c) {
  return mean_fg + product_rhs_z1(fa, fb, ga, gb, a, b, c);
}

// Convex-times-strongly-convex product bound pieces: the extra term travels
// on the left of the inequality.
template <class Real>
Real mixed_lhs_extra_z3(Real fa, Real fb, Real a, Real b, Real c) {
  const Real w = b - a;
  return c * w * w / Real(6) * ((fa + fb) / Real(2));
}

template <class Real>
Real mixed_rhs_z3(Real fa, Real fb, Real ga, Real gb, Real /*a*/, Real /*b*/,
                  Real /*c*/) {
  return (fa * ga + fb * gb) / Real(3) + (fa * gb + fb * ga) / Real(6);
}

// Two-sided variant mixing the chord rearrangement with the z3 gain; the
// modulus acts only through g, so the cross moment of f alone is subtracted.
inline double t7_lhs(double fa, double fb, double ga, double gb,
                     const WeightedMoments& mf, const WeightedMoments& mg,
                     double a, double b, double c) {
  const double w = b - a;
  const double w2 = w * w;
  const double w3 = w2 * w;
  return gb * mf.left / w2 + ga * mf.right / w2 + fb * mg.left / w2 +
         fa * mg.right / w2 - c * mf.cross / w3;
}

inline double t7_rhs(double mean_fg, double fa, double fb, double ga, double gb,
                     double a, double b, double c) {
  return mean_fg + mixed_rhs_z3(fa, fb, ga, gb, a, b, c) -
         mixed_lhs_extra_z3(fa, fb, a, b, c);
}

// g == 1 substitutions, implemented exactly as stated. Both are checked with
// expected-failure semantics by the verification harness: a constant is not
// strongly convex for any c > 0, and the harness documents where the
// substituted forms break.
template <class Real>
Real cor5_rhs(Real fa, Real fb, Real a, Real b, Real c) {
  const Real w = b - a;
  const Real w2 = w * w;
  return (fa + fb) / Real(2) - c * w2 / Real(12) * (fa + fb + Real(2)) +
         c * (w2 * w2) / Real(30);
}

template <class Real>
Real cor6_rhs(Real fa, Real fb, Real a, Real b, Real c) {
  const Real w = b - a;
  return (Real(1) - c * w * w / Real(6)) * ((fa + fb) / Real(2));
}

// Parameter snapshot carried through reports and the CLI.
struct BoundParams {
  double a = 0.0;
  double b = 0.0;
  std::optional<double> x;
  std::optional<double> M;
  std::optional<double> c;
  std::optional<double> p;
  std::optional<double> q;
};

}  // namespace ostrowski::bounds
