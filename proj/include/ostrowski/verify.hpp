#pragma once

#include <algorithm>
#include <atomic>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ostrowski/bounds.hpp"
#include "ostrowski/corpus.hpp"
#include "ostrowski/json_writer.hpp"
#include "ostrowski/oracle.hpp"

namespace ostrowski::verify {

// Inequality harness: for every bound the library evaluates, instantiate it
// over the corpus with randomized parameters, compute the left side through
// the oracle and the right side through the closed forms, and record the
// margin. The two sides never share code; that separation is the point.

enum class TheoremId {
  H11,    // classical Ostrowski bound
  C1_12,  // Hoelder-weighted convex-|f'|^q bound
  T1_AA,  // strongly convex |f'|
  T2_A,   // strongly convex |f'|^q, Hoelder weights
  T3_K,   // strongly convex |f'|^q, power-mean weights
  COR2,   // midpoint form of T1_AA
  COR3,   // midpoint form of T2_A
  COR4,   // midpoint form of T3_K
  T4_Z1,  // product of two strongly convex functions
  T5_Z2,  // chord rearrangement, both strongly convex
  T6_Z3,  // convex times strongly convex
  T7,     // chord rearrangement, convex times strongly convex
  COR5,   // g == 1 substituted into T4_Z1 (suspect, expected failures)
  COR6,   // g == 1 substituted into T6_Z3 (suspect, expected failures)
  LEMMA1, // exact two-integral representation of f(x) - avg
};

inline constexpr std::array<TheoremId, 15> kAllTheorems = {
    TheoremId::H11,   TheoremId::C1_12, TheoremId::T1_AA, TheoremId::T2_A,
    TheoremId::T3_K,  TheoremId::COR2,  TheoremId::COR3,  TheoremId::COR4,
    TheoremId::T4_Z1, TheoremId::T5_Z2, TheoremId::T6_Z3, TheoremId::T7,
    TheoremId::COR5,  TheoremId::COR6,  TheoremId::LEMMA1,
};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::H11: return "H11";
    case TheoremId::C1_12: return "C1_12";
    case TheoremId::T1_AA: return "T1_AA";
    case TheoremId::T2_A: return "T2_A";
    case TheoremId::T3_K: return "T3_K";
    case TheoremId::COR2: return "COR2";
    case TheoremId::COR3: return "COR3";
    case TheoremId::COR4: return "COR4";
    case TheoremId::T4_Z1: return "T4_Z1";
    case TheoremId::T5_Z2: return "T5_Z2";
    case TheoremId::T6_Z3: return "T6_Z3";
    case TheoremId::T7: return "T7";
    case TheoremId::COR5: return "COR5";
    case TheoremId::COR6: return "COR6";
    case TheoremId::LEMMA1: return "LEMMA1";
  }
  return "?";
}

inline bool is_suspect(TheoremId id) {
  return id == TheoremId::COR5 || id == TheoremId::COR6;
}

struct BoundResult {
  TheoremId theorem = TheoremId::H11;
  std::string instance;
  int draw = 0;
  bounds::BoundParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs; nonnegative when the inequality held
  bool holds = false;
  bool suspect = false;
  // empty | "numerical-suspect" (within 1e-6 of zero) | "mathematical"
  std::string violation_class;
};

struct SkipRecord {
  TheoremId theorem = TheoremId::H11;
  std::string instance;
  int draw = 0;
  std::string reason;
};

struct TheoremCounts {
  long checked = 0;
  long held = 0;
  long violated = 0;
};

struct VerifyConfig {
  double tol_verify = 1e-9;
  int samples = 64;        // parameter draws per (theorem, instance) family
  double quad_tol = 1e-10;
  int threads = 0;         // 0 = hardware concurrency
};

struct VerificationReport {
  std::uint64_t seed = 0;
  double tol_verify = 1e-9;
  int samples = 64;
  std::vector<BoundResult> results;
  std::vector<SkipRecord> skips;

  std::map<std::string, TheoremCounts> per_theorem() const {
    std::map<std::string, TheoremCounts> out;
    for (const auto& r : results) {
      auto& c = out[to_string(r.theorem)];
      ++c.checked;
      r.holds ? ++c.held : ++c.violated;
    }
    return out;
  }

  long violations_nonsuspect() const {
    long n = 0;
    for (const auto& r : results)
      if (!r.holds && !r.suspect) ++n;
    return n;
  }

  long violations_suspect() const {
    long n = 0;
    for (const auto& r : results)
      if (!r.holds && r.suspect) ++n;
    return n;
  }

  bool passed() const { return violations_nonsuspect() == 0; }
};

namespace detail {

// Fixed-algorithm uniform draw; mt19937_64 output is specified by the
// standard, so reports are reproducible across platforms.
class DrawRng {
 public:
  explicit DrawRng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 eng_;
};

inline std::string classify_violation(double margin, double tol_verify) {
  if (margin >= -tol_verify) return "";
  return margin < -1e-6 ? "mathematical" : "numerical-suspect";
}

inline BoundResult make_result(TheoremId id, std::string instance, int draw,
                               bounds::BoundParams params, double lhs, double rhs,
                               double tol_verify) {
  BoundResult r;
  r.theorem = id;
  r.instance = std::move(instance);
  r.draw = draw;
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.holds = r.margin >= -tol_verify;
  r.suspect = is_suspect(id);
  r.violation_class = classify_violation(r.margin, tol_verify);
  return r;
}

}  // namespace detail

// Residual |L - R| of the exact representation
//   L = f(x) - (1/(b-a)) int_a^b f
//   R = (x-a)^2/(b-a) int_0^1 t f'(tx+(1-t)a) dt
//     - (b-x)^2/(b-a) int_0^1 t f'(tx+(1-t)b) dt
// with both t-integrals taken through the oracle.
inline double verify_lemma1_identity(const corpus::FunctionInstance& inst, double x,
                                     double tol) {
  if (!(inst.a <= x && x <= inst.b))
    throw std::invalid_argument("verify_lemma1_identity: x outside [a, b]");
  const double w = inst.b - inst.a;
  const double L = inst.eval_f(x) - inst.mean(tol);

  auto t_integral = [&](double endpoint) {
    const oracle::Fn g = [&inst, x, endpoint](double t) {
      return t * inst.eval_fprime(t * x + (1.0 - t) * endpoint);
    };
    const auto est = oracle::integrate(g, 0.0, 1.0, tol);
    if (!est.converged)
      throw oracle::OracleError("lemma residual: quadrature did not converge for " +
                                inst.name);
    return est.value;
  };

  const double da = x - inst.a;
  const double db = inst.b - x;
  const double R = da * da / w * t_integral(inst.a) - db * db / w * t_integral(inst.b);
  return std::fabs(L - R);
}

// Oracle-side data shared by every product check on one ordered pair.
struct PairCache {
  const corpus::FunctionInstance* f = nullptr;
  const corpus::FunctionInstance* g = nullptr;
  std::string name;
  double a = 0.0, b = 0.0;
  double fa = 0.0, fb = 0.0, ga = 0.0, gb = 0.0;
  double mean_fg = 0.0;
  bounds::WeightedMoments mf, mg;
  double c_common = 0.0;  // min of the two self moduli
  double c_g = 0.0;       // self modulus of the second (strongly convex) role
};

inline PairCache make_pair_cache(const corpus::FunctionInstance& f,
                                 const corpus::FunctionInstance& g,
                                 double quad_tol) {
  if (f.a != g.a || f.b != g.b)
    throw std::invalid_argument("pair: instances span different intervals");
  const auto cf = f.self_modulus();
  const auto cg = g.self_modulus();
  if (!cf || !cg)
    throw std::invalid_argument("pair: both instances need SELF certificates");
  if (!f.nonneg || !g.nonneg)
    throw std::invalid_argument("pair: both instances must be nonnegative");

  PairCache pc;
  pc.f = &f;
  pc.g = &g;
  pc.name = f.name + "*" + g.name;
  pc.a = f.a;
  pc.b = f.b;
  pc.fa = f.eval_f(f.a);
  pc.fb = f.eval_f(f.b);
  pc.ga = g.eval_f(g.a);
  pc.gb = g.eval_f(g.b);
  pc.c_common = std::min(*cf, *cg);
  pc.c_g = *cg;

  auto quad = [&](const oracle::Fn& fn) {
    const auto est = oracle::integrate(fn, f.a, f.b, quad_tol);
    if (!est.converged)
      throw oracle::OracleError("pair " + pc.name + ": quadrature did not converge");
    return est.value;
  };
  auto moments = [&](const corpus::FunctionInstance& h) {
    const double a = h.a, b = h.b;
    bounds::WeightedMoments m;
    m.left = quad([&h, a](double x) { return (x - a) * h.eval_f(x); });
    m.right = quad([&h, b](double x) { return (b - x) * h.eval_f(x); });
    m.cross = quad([&h, a, b](double x) { return (x - a) * (b - x) * h.eval_f(x); });
    return m;
  };

  pc.mean_fg = quad([&f, &g](double x) { return f.eval_f(x) * g.eval_f(x); }) /
               (f.b - f.a);
  pc.mf = moments(f);
  pc.mg = moments(g);
  return pc;
}

// Single-check entry points. Premise failures surface as exceptions here;
// run_suite converts them into skip records.

inline BoundResult check_theorem(const corpus::FunctionInstance& inst, TheoremId id,
                                 const bounds::BoundParams& params, double mean_f,
                                 double tol_verify) {
  const double a = params.a, b = params.b;
  const double M = params.M.value_or(0.0);
  const double c = params.c.value_or(0.0);
  const double mid = (a + b) / 2.0;

  auto point_lhs = [&](double x) { return std::fabs(inst.eval_f(x) - mean_f); };

  double lhs = 0.0, rhs = 0.0;
  bounds::BoundParams out = params;
  switch (id) {
    case TheoremId::H11: {
      const double x = params.x.value();
      lhs = point_lhs(x);
      rhs = bounds::classic_ostrowski_rhs(x, a, b, M);
      break;
    }
    case TheoremId::C1_12: {
      const double x = params.x.value();
      lhs = point_lhs(x);
      rhs = bounds::alomari_rhs(x, a, b, M, params.p.value());
      break;
    }
    case TheoremId::T1_AA: {
      const double x = params.x.value();
      if (!bounds::hypothesis_ok(x, a, b, M, c))
        throw bounds::HypothesisError("hypothesis fails for T1_AA");
      lhs = point_lhs(x);
      rhs = bounds::sc_rhs_t1(x, a, b, M, c);
      break;
    }
    case TheoremId::T2_A: {
      const double x = params.x.value();
      if (!bounds::hypothesis_ok(x, a, b, M, c, params.q.value()))
        throw bounds::HypothesisError("hypothesis fails for T2_A");
      lhs = point_lhs(x);
      rhs = bounds::sc_rhs_t2(x, a, b, M, c, params.p.value(), params.q.value());
      break;
    }
    case TheoremId::T3_K: {
      const double x = params.x.value();
      if (!bounds::hypothesis_ok(x, a, b, M, c, params.q.value()))
        throw bounds::HypothesisError("hypothesis fails for T3_K");
      lhs = point_lhs(x);
      rhs = bounds::sc_rhs_t3(x, a, b, M, c, params.q.value());
      break;
    }
    case TheoremId::COR2: {
      if (!bounds::hypothesis_ok(mid, a, b, M, c))
        throw bounds::HypothesisError("hypothesis fails for COR2");
      lhs = point_lhs(mid);
      rhs = bounds::midpoint_rhs_t1(a, b, M, c);
      break;
    }
    case TheoremId::COR3: {
      if (!bounds::hypothesis_ok(mid, a, b, M, c, params.q.value()))
        throw bounds::HypothesisError("hypothesis fails for COR3");
      lhs = point_lhs(mid);
      rhs = bounds::midpoint_rhs_t2(a, b, M, c, params.p.value(), params.q.value());
      break;
    }
    case TheoremId::COR4: {
      if (!bounds::hypothesis_ok(mid, a, b, M, c, params.q.value()))
        throw bounds::HypothesisError("hypothesis fails for COR4");
      lhs = point_lhs(mid);
      rhs = bounds::midpoint_rhs_t3(a, b, M, c, params.q.value());
      break;
    }
    case TheoremId::COR5: {
      const double fa = inst.eval_f(a), fb = inst.eval_f(b);
      lhs = mean_f;
      rhs = bounds::cor5_rhs(fa, fb, a, b, c);
      break;
    }
    case TheoremId::COR6: {
      const double fa = inst.eval_f(a), fb = inst.eval_f(b);
      lhs = mean_f;
      rhs = bounds::cor6_rhs(fa, fb, a, b, c);
      break;
    }
    default:
      throw std::invalid_argument("check_theorem: not a single-instance theorem");
  }
  return detail::make_result(id, inst.name, 0, out, lhs, rhs, tol_verify);
}

inline BoundResult check_theorem(const PairCache& pc, TheoremId id, double c,
                                 double tol_verify) {
  bounds::BoundParams params;
  params.a = pc.a;
  params.b = pc.b;
  params.c = c;

  double lhs = 0.0, rhs = 0.0;
  switch (id) {
    case TheoremId::T4_Z1:
      lhs = pc.mean_fg;
      rhs = bounds::product_rhs_z1(pc.fa, pc.fb, pc.ga, pc.gb, pc.a, pc.b, c);
      break;
    case TheoremId::T5_Z2:
      lhs = bounds::z2_lhs(pc.fa, pc.fb, pc.ga, pc.gb, pc.mf, pc.mg, pc.a, pc.b, c);
      rhs = bounds::z2_rhs(pc.mean_fg, pc.fa, pc.fb, pc.ga, pc.gb, pc.a, pc.b, c);
      break;
    case TheoremId::T6_Z3:
      lhs = pc.mean_fg + bounds::mixed_lhs_extra_z3(pc.fa, pc.fb, pc.a, pc.b, c);
      rhs = bounds::mixed_rhs_z3(pc.fa, pc.fb, pc.ga, pc.gb, pc.a, pc.b, c);
      break;
    case TheoremId::T7:
      lhs = bounds::t7_lhs(pc.fa, pc.fb, pc.ga, pc.gb, pc.mf, pc.mg, pc.a, pc.b, c);
      rhs = bounds::t7_rhs(pc.mean_fg, pc.fa, pc.fb, pc.ga, pc.gb, pc.a, pc.b, c);
      break;
    default:
      throw std::invalid_argument("check_theorem: not a pair theorem");
  }
  return detail::make_result(id, pc.name, 0, params, lhs, rhs, tol_verify);
}

// ---------------------------------------------------------------------------
// Suite driver

namespace detail {

struct Outcome {
  std::optional<BoundResult> result;
  std::optional<SkipRecord> skip;
};

using Task = std::function<Outcome()>;

// Executes tasks on the requested number of threads; outcome order is the
// task order, independent of scheduling.
inline std::vector<Outcome> run_tasks(const std::vector<Task>& tasks, int threads) {
  std::vector<Outcome> outcomes(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::size_t nthreads =
      threads > 0 ? static_cast<std::size_t>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, std::max<std::size_t>(1, tasks.size()));

  if (nthreads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) outcomes[i] = tasks[i]();
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        outcomes[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return outcomes;
}

}  // namespace detail

// Every inequality over every premise-compatible instance or declared pair,
// with `samples` parameter draws per family. Deterministic for a fixed seed:
// draws happen serially up front, execution may be parallel, and assembly is
// ordered by (theorem, instance, generation order).
inline VerificationReport run_suite(const corpus::Corpus& corpus,
                                    const VerifyConfig& cfg, std::uint64_t seed) {
  VerificationReport report;
  report.seed = seed;
  report.tol_verify = cfg.tol_verify;
  report.samples = cfg.samples;

  detail::DrawRng rng(seed);

  // Oracle-side caches, computed before any draw so the RNG stream only
  // covers parameters.
  struct InstCache {
    double mean = 0.0;
  };
  std::vector<InstCache> icache(corpus.instances.size());
  for (std::size_t i = 0; i < corpus.instances.size(); ++i)
    icache[i].mean = corpus.instances[i].mean(cfg.quad_tol);

  std::vector<PairCache> pcache;
  pcache.reserve(corpus.pairs.size());
  for (const auto& pair : corpus.pairs) {
    const auto* f = corpus.find(pair.first);
    const auto* g = corpus.find(pair.second);
    if (!f || !g)
      throw corpus::CorpusValidationError("pair references unknown instance");
    pcache.push_back(make_pair_cache(*f, *g, cfg.quad_tol));
  }

  std::vector<detail::Task> tasks;

  auto draw_x = [&](const corpus::FunctionInstance& inst, int j) {
    if (j == 0) return inst.a;
    if (j == 1) return inst.b;
    if (j == 2) return (inst.a + inst.b) / 2.0;
    const double margin = (inst.b - inst.a) / 1000.0;
    return rng.uniform(inst.a + margin, inst.b - margin);
  };
  auto draw_c = [&](double c_max, int j) {
    if (j == 0) return c_max;
    if (j == 1) return 0.0;
    return c_max == 0.0 ? 0.0 : rng.uniform(0.0, c_max);
  };

  auto add_point_family = [&](std::size_t inst_idx, TheoremId id, double M,
                              double c_max, std::optional<double> p,
                              std::optional<double> q, bool x_varies) {
    const corpus::FunctionInstance& inst = corpus.instances[inst_idx];
    const double mean = icache[inst_idx].mean;
    for (int j = 0; j < cfg.samples; ++j) {
      bounds::BoundParams params;
      params.a = inst.a;
      params.b = inst.b;
      params.M = M;
      params.p = p;
      params.q = q;
      if (x_varies) params.x = draw_x(inst, j);
      if (id != TheoremId::H11 && id != TheoremId::C1_12) {
        // Deterministic draws pin the declared modulus; the rest sample the
        // downward-closed range [0, c_max].
        if (x_varies)
          params.c = j < 3 ? c_max : draw_c(c_max, 2);
        else
          params.c = draw_c(c_max, j);
      }
      const double tol = cfg.tol_verify;
      tasks.push_back([&inst, id, params, mean, tol, j]() -> detail::Outcome {
        detail::Outcome out;
        try {
          BoundResult r = check_theorem(inst, id, params, mean, tol);
          r.draw = j;
          out.result = std::move(r);
        } catch (const bounds::HypothesisError& e) {
          out.skip = SkipRecord{id, inst.name, j, e.what()};
        }
        return out;
      });
    }
  };

  auto add_pair_family = [&](const PairCache& pc, TheoremId id, double c_max) {
    for (int j = 0; j < cfg.samples; ++j) {
      const double c = draw_c(c_max, j);
      const double tol = cfg.tol_verify;
      tasks.push_back([&pc, id, c, tol, j]() -> detail::Outcome {
        detail::Outcome out;
        BoundResult r = check_theorem(pc, id, c, tol);
        r.draw = j;
        out.result = std::move(r);
        return out;
      });
    }
  };

  auto add_lemma_family = [&](std::size_t inst_idx) {
    const corpus::FunctionInstance& inst = corpus.instances[inst_idx];
    constexpr int kLemmaDraws = 16;
    for (int j = 0; j < kLemmaDraws; ++j) {
      const double x = draw_x(inst, j);
      const double quad_tol = cfg.quad_tol;
      const double tol = cfg.tol_verify;
      tasks.push_back([&inst, x, quad_tol, tol, j]() -> detail::Outcome {
        bounds::BoundParams params;
        params.a = inst.a;
        params.b = inst.b;
        params.x = x;
        const double residual = verify_lemma1_identity(inst, x, quad_tol);
        detail::Outcome out;
        BoundResult r = detail::make_result(TheoremId::LEMMA1, inst.name, j, params,
                                            residual, 10.0 * quad_tol, tol);
        out.result = std::move(r);
        return out;
      });
    }
  };

  // Generation order fixes both the RNG stream and the report order.
  for (TheoremId id : kAllTheorems) {
    switch (id) {
      case TheoremId::H11:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          add_point_family(i, id, corpus.instances[i].best_M(), 0.0, std::nullopt,
                           std::nullopt, true);
        break;
      case TheoremId::C1_12:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates)
            if (cert.target == corpus::CertTarget::AbsDerivPow && cert.q > 1.0)
              add_point_family(i, id, cert.M, 0.0, cert.q / (cert.q - 1.0), cert.q,
                               true);
        break;
      case TheoremId::T1_AA:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates)
            if (cert.target == corpus::CertTarget::AbsDeriv)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, std::nullopt,
                               true);
        break;
      case TheoremId::T2_A:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates)
            if (cert.target == corpus::CertTarget::AbsDerivPow && cert.q > 1.0)
              add_point_family(i, id, cert.M, cert.c, cert.q / (cert.q - 1.0),
                               cert.q, true);
        break;
      case TheoremId::T3_K:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates) {
            if (cert.target == corpus::CertTarget::AbsDeriv)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, 1.0, true);
            else if (cert.target == corpus::CertTarget::AbsDerivPow)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, cert.q, true);
          }
        break;
      case TheoremId::COR2:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates)
            if (cert.target == corpus::CertTarget::AbsDeriv)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, std::nullopt,
                               false);
        break;
      case TheoremId::COR3:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates)
            if (cert.target == corpus::CertTarget::AbsDerivPow && cert.q > 1.0)
              add_point_family(i, id, cert.M, cert.c, cert.q / (cert.q - 1.0),
                               cert.q, false);
        break;
      case TheoremId::COR4:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i)
          for (const auto& cert : corpus.instances[i].certificates) {
            if (cert.target == corpus::CertTarget::AbsDeriv)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, 1.0, false);
            else if (cert.target == corpus::CertTarget::AbsDerivPow)
              add_point_family(i, id, cert.M, cert.c, std::nullopt, cert.q, false);
          }
        break;
      case TheoremId::T4_Z1:
      case TheoremId::T5_Z2:
        for (const auto& pc : pcache) add_pair_family(pc, id, pc.c_common);
        break;
      case TheoremId::T6_Z3:
      case TheoremId::T7:
        for (const auto& pc : pcache) add_pair_family(pc, id, pc.c_g);
        break;
      case TheoremId::COR5:
      case TheoremId::COR6:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
          const auto& inst = corpus.instances[i];
          const auto c_self = inst.self_modulus();
          if (!inst.nonneg || !c_self) continue;
          const double mean = icache[i].mean;
          for (int j = 0; j < cfg.samples; ++j) {
            const double c = draw_c(*c_self, j);
            bounds::BoundParams params;
            params.a = inst.a;
            params.b = inst.b;
            params.c = c;
            const double tol = cfg.tol_verify;
            tasks.push_back([&inst, id, params, mean, tol, j]() -> detail::Outcome {
              detail::Outcome out;
              BoundResult r = check_theorem(inst, id, params, mean, tol);
              r.draw = j;
              out.result = std::move(r);
              return out;
            });
          }
        }
        break;
      case TheoremId::LEMMA1:
        for (std::size_t i = 0; i < corpus.instances.size(); ++i) add_lemma_family(i);
        break;
    }
  }

  std::vector<detail::Outcome> outcomes = detail::run_tasks(tasks, cfg.threads);
  for (auto& o : outcomes) {
    if (o.result) report.results.push_back(std::move(*o.result));
    if (o.skip) report.skips.push_back(std::move(*o.skip));
  }

  // Families were generated theorem-major in corpus order; present instances
  // alphabetically within each theorem.
  std::stable_sort(report.results.begin(), report.results.end(),
                   [](const BoundResult& x, const BoundResult& y) {
                     if (x.theorem != y.theorem) return x.theorem < y.theorem;
                     return x.instance < y.instance;
                   });
  std::stable_sort(report.skips.begin(), report.skips.end(),
                   [](const SkipRecord& x, const SkipRecord& y) {
                     if (x.theorem != y.theorem) return x.theorem < y.theorem;
                     return x.instance < y.instance;
                   });
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline void write_params(jsonio::Writer& w, const bounds::BoundParams& p) {
  w.key("params").begin_object();
  if (p.M) w.key("M").value(*p.M);
  w.key("a").value(p.a);
  w.key("b").value(p.b);
  if (p.c) w.key("c").value(*p.c);
  if (p.p) w.key("p").value(*p.p);
  if (p.q) w.key("q").value(*p.q);
  if (p.x) w.key("x").value(*p.x);
  w.end_object();
}

inline void write_result(jsonio::Writer& w, const BoundResult& r) {
  w.begin_object();
  w.key("draw").value(r.draw);
  w.key("holds").value(r.holds);
  w.key("instance").value(r.instance);
  w.key("lhs").value(r.lhs);
  w.key("margin").value(r.margin);
  write_params(w, r.params);
  w.key("rhs").value(r.rhs);
  w.key("suspect").value(r.suspect);
  w.key("theorem").value(to_string(r.theorem));
  w.key("violation_class").value(r.violation_class);
  w.end_object();
}

}  // namespace detail

inline std::string to_json(const VerificationReport& report,
                           bool include_suspect_violations = false) {
  jsonio::Writer w;
  w.begin_object();

  w.key("results").begin_array();
  for (const auto& r : report.results) detail::write_result(w, r);
  w.end_array();

  w.key("samples").value(report.samples);
  w.key("seed").value(static_cast<unsigned long long>(report.seed));

  w.key("skips").begin_array();
  for (const auto& s : report.skips) {
    w.begin_object();
    w.key("draw").value(s.draw);
    w.key("instance").value(s.instance);
    w.key("reason").value(s.reason);
    w.key("theorem").value(to_string(s.theorem));
    w.end_object();
  }
  w.end_array();

  w.key("summary").begin_object();
  w.key("per_theorem").begin_object();
  for (const auto& [name, counts] : report.per_theorem()) {
    w.key(name).begin_object();
    w.key("checked").value(counts.checked);
    w.key("held").value(counts.held);
    w.key("violated").value(counts.violated);
    w.end_object();
  }
  w.end_object();
  w.key("totals").begin_object();
  w.key("checked").value(static_cast<long long>(report.results.size()));
  w.key("suspect_violated").value(report.violations_suspect());
  w.key("violated").value(report.violations_nonsuspect());
  w.end_object();
  w.end_object();

  w.key("tol_verify").value(report.tol_verify);

  w.key("violations").begin_array();
  for (const auto& r : report.results)
    if (!r.holds && (!r.suspect || include_suspect_violations))
      detail::write_result(w, r);
  w.end_array();

  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

inline std::string to_csv(const VerificationReport& report) {
  std::string out =
      "theorem,instance,draw,a,b,x,M,c,p,q,lhs,rhs,margin,holds,suspect,"
      "violation_class\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? jsonio::format_double(*v) : std::string();
  };
  for (const auto& r : report.results) {
    out += to_string(r.theorem);
    out += ',';
    out += r.instance;
    out += ',';
    out += std::to_string(r.draw);
    out += ',';
    out += jsonio::format_double(r.params.a);
    out += ',';
    out += jsonio::format_double(r.params.b);
    out += ',';
    out += cell(r.params.x);
    out += ',';
    out += cell(r.params.M);
    out += ',';
    out += cell(r.params.c);
    out += ',';
    out += cell(r.params.p);
    out += ',';
    out += cell(r.params.q);
    out += ',';
    out += jsonio::format_double(r.lhs);
    out += ',';
    out += jsonio::format_double(r.rhs);
    out += ',';
    out += jsonio::format_double(r.margin);
    out += ',';
    out += r.holds ? "true" : "false";
    out += ',';
    out += r.suspect ? "true" : "false";
    out += ',';
    out += r.violation_class;
    out += '\n';
  }
  return out;
}

}  // namespace ostrowski::verify
