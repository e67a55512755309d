#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ostrowski/bounds.hpp"
#include "ostrowski/corpus.hpp"
#include "ostrowski/oracle.hpp"

namespace ostrowski::integrator {

// Composite midpoint integrator with a-priori error certificates. Each panel
// [u, v] contributes (v-u) f((u+v)/2), and its certificate is the panel-width
// scaling of the midpoint bound:
//   strong-convex: (v-u) (M_uv (v-u)/4 - c (v-u)^3/96)   when M_uv >= c(v-u)^2/24
//   classical:     M_uv (v-u)^2 / 4                       otherwise, or c = 0
// The modulus c of |f'| carries over to every subinterval unchanged; only the
// local derivative bound M_uv tightens under refinement.

enum class PanelRule { StrongConvex, Classical };

enum class Strategy { Greedy, Uniform };

struct Panel {
  double left = 0.0;
  double right = 0.0;
  double contribution = 0.0;   // (v-u) f(mid)
  double local_M = 0.0;
  double local_c = 0.0;
  double certificate = 0.0;
  PanelRule rule = PanelRule::Classical;
};

struct CertifiedIntegral {
  double value = 0.0;
  double certificate = 0.0;    // sum of panel certificates
  std::vector<Panel> panels;   // left-to-right partition of [a, b]
  long evaluations = 0;
  bool converged = false;
};

// Everything certify_panel needs to know about the integrand.
struct IntegrandModel {
  oracle::Fn f;
  oracle::Fn fprime;           // may be empty when monotone_abs_deriv is false
  double M = 0.0;              // global bound on |f'|
  double c = 0.0;              // strong-convexity modulus of |f'|
  bool monotone_abs_deriv = false;
};

inline IntegrandModel make_model(const corpus::FunctionInstance& inst) {
  IntegrandModel m;
  m.f = inst.f_fn();
  m.fprime = inst.fprime_fn();
  m.monotone_abs_deriv = inst.abs_deriv_monotone;
  if (const auto cert = inst.abs_deriv_certificate()) {
    m.M = cert->M;
    m.c = cert->c;
  } else {
    m.M = inst.best_M();
    m.c = 0.0;
  }
  return m;
}

inline Panel certify_panel(const IntegrandModel& model, double u, double v,
                           long& evaluations) {
  if (!(u <= v)) throw std::invalid_argument("certify_panel: requires u <= v");
  if (!(model.M > 0.0)) throw std::invalid_argument("certify_panel: missing M");

  Panel p;
  p.left = u;
  p.right = v;
  p.local_c = model.c;
  if (u == v) {
    p.local_M = model.M;
    return p;
  }

  const double h = v - u;
  double local_M = model.M;
  if (model.monotone_abs_deriv && model.fprime) {
    local_M = std::max(std::fabs(model.fprime(u)), std::fabs(model.fprime(v)));
    evaluations += 2;
  }
  p.local_M = local_M;

  const double mid = 0.5 * (u + v);
  p.contribution = h * model.f(mid);
  ++evaluations;

  if (model.c > 0.0 && local_M >= model.c * h * h / 24.0) {
    p.rule = PanelRule::StrongConvex;
    p.certificate = h * bounds::midpoint_rhs_t1(u, v, local_M, model.c);
  } else {
    p.rule = PanelRule::Classical;
    p.certificate = local_M * h * h / 4.0;
  }
  return p;
}

namespace detail {

struct WorstFirst {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.certificate != b.certificate) return a.certificate > b.certificate;
    return a.left < b.left;
  }
};

inline double resum(const std::vector<Panel>& panels,
                    double Panel::*field) {
  oracle::detail::CompensatedSum s;
  for (const auto& p : panels) s.add(p.*field);
  return s.result();
}

inline std::vector<Panel> sorted_left(std::multiset<Panel, WorstFirst>&& active) {
  std::vector<Panel> panels(active.begin(), active.end());
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.left < y.left; });
  return panels;
}

}  // namespace detail

// Refine until the summed certificate reaches target_cert or the panel budget
// runs out. Greedy bisects the panel with the largest certificate (leftmost on
// ties); uniform bisects every panel each round. Budget exhaustion returns the
// best partition found with converged = false.
inline CertifiedIntegral integrate_certified(const IntegrandModel& model, double a,
                                             double b, double target_cert,
                                             std::size_t max_panels = 1u << 16,
                                             Strategy strategy = Strategy::Greedy) {
  if (!(a < b)) throw std::invalid_argument("integrate_certified: requires a < b");
  if (!(target_cert > 0.0))
    throw std::invalid_argument("integrate_certified: requires target_cert > 0");
  if (max_panels == 0) throw std::invalid_argument("integrate_certified: max_panels");

  long evaluations = 0;
  CertifiedIntegral out;

  if (strategy == Strategy::Uniform) {
    std::vector<Panel> panels{certify_panel(model, a, b, evaluations)};
    double total = panels.front().certificate;
    while (total > target_cert && 2 * panels.size() <= max_panels) {
      std::vector<Panel> next;
      next.reserve(2 * panels.size());
      for (const auto& p : panels) {
        const double mid = 0.5 * (p.left + p.right);
        next.push_back(certify_panel(model, p.left, mid, evaluations));
        next.push_back(certify_panel(model, mid, p.right, evaluations));
      }
      panels = std::move(next);
      total = detail::resum(panels, &Panel::certificate);
    }
    out.panels = std::move(panels);
  } else {
    std::multiset<Panel, detail::WorstFirst> active;
    active.insert(certify_panel(model, a, b, evaluations));
    double running = active.begin()->certificate;
    int since_resync = 0;
    auto canonical = [&active]() {
      oracle::detail::CompensatedSum s;
      for (const auto& p : active) s.add(p.certificate);
      return s.result();
    };
    for (;;) {
      while (running > target_cert && active.size() < max_panels) {
        const Panel worst = *active.begin();
        active.erase(active.begin());
        const double mid = 0.5 * (worst.left + worst.right);
        const Panel l = certify_panel(model, worst.left, mid, evaluations);
        const Panel r = certify_panel(model, mid, worst.right, evaluations);
        active.insert(l);
        active.insert(r);
        running += (l.certificate + r.certificate) - worst.certificate;
        if (++since_resync == 256) {
          running = canonical();
          since_resync = 0;
        }
      }
      // The incrementally tracked total can drift by a few ulp; the canonical
      // left-to-right sum decides convergence.
      running = canonical();
      if (running <= target_cert || active.size() >= max_panels) break;
    }
    out.panels = detail::sorted_left(std::move(active));
  }

  out.value = detail::resum(out.panels, &Panel::contribution);
  out.certificate = detail::resum(out.panels, &Panel::certificate);
  out.evaluations = evaluations;
  out.converged = out.certificate <= target_cert;
  return out;
}

inline CertifiedIntegral integrate_certified(const corpus::FunctionInstance& inst,
                                             double a, double b, double target_cert,
                                             std::size_t max_panels = 1u << 16,
                                             Strategy strategy = Strategy::Greedy) {
  if (!(inst.a <= a && b <= inst.b))
    throw std::invalid_argument("integrate_certified: [a, b] outside instance domain");
  return integrate_certified(make_model(inst), a, b, target_cert, max_panels,
                             strategy);
}

}  // namespace ostrowski::integrator
