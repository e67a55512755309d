#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ostrowski/expr.hpp"
#include "ostrowski/oracle.hpp"

namespace ostrowski::corpus {

// Built-in and user-supplied integrands with machine-validated convexity
// certificates. Certificates are declared (from analytic knowledge or a
// config file) and then checked against the oracle; nothing is trusted from
// input alone.

enum class CertTarget { Self, AbsDeriv, AbsDerivPow };

inline const char* to_string(CertTarget t) {
  switch (t) {
    case CertTarget::Self: return "SELF";
    case CertTarget::AbsDeriv: return "ABS_DERIV";
    case CertTarget::AbsDerivPow: return "ABS_DERIV_POW";
  }
  return "?";
}

struct ConvexityCertificate {
  CertTarget target = CertTarget::Self;
  double c = 0.0;   // strong-convexity modulus of the target function
  double M = 0.0;   // uniform bound, |f'| <= M on [a, b]
  double q = 1.0;   // exponent, AbsDerivPow only
};

struct FunctionInstance {
  std::string name;
  expr::ExprPtr f;
  expr::ExprPtr fprime;
  expr::ExprPtr antiderivative;  // null when no exact antiderivative is known
  double a = 0.0;
  double b = 1.0;
  std::vector<ConvexityCertificate> certificates;
  bool nonneg = false;
  // |f'| monotone on [a, b]; allows exact per-subinterval suprema from
  // endpoint evaluations in the certified integrator.
  bool abs_deriv_monotone = false;

  double eval_f(double x) const { return expr::eval(f, x); }
  double eval_fprime(double x) const { return expr::eval(fprime, x); }

  oracle::Fn f_fn() const {
    return [ast = f](double x) { return expr::eval(ast, x); };
  }
  oracle::Fn fprime_fn() const {
    return [ast = fprime](double x) { return expr::eval(ast, x); };
  }

  // Exact mean (F(b) - F(a))/(b - a) when an antiderivative is declared,
  // otherwise adaptive quadrature at the given tolerance.
  double mean(double quad_tol = 1e-10) const {
    if (antiderivative)
      return (expr::eval(antiderivative, b) - expr::eval(antiderivative, a)) /
             (b - a);
    const auto est = oracle::integrate(f_fn(), a, b, quad_tol);
    if (!est.converged)
      throw oracle::OracleError("mean: quadrature did not converge for " + name);
    return est.value / (b - a);
  }

  // Tightest declared uniform derivative bound.
  double best_M() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : certificates) m = std::min(m, c.M);
    if (!std::isfinite(m))
      throw std::logic_error("instance '" + name + "' declares no certificate");
    return m;
  }

  std::optional<double> self_modulus() const {
    std::optional<double> best;
    for (const auto& cert : certificates)
      if (cert.target == CertTarget::Self)
        best = best ? std::max(*best, cert.c) : cert.c;
    return best;
  }

  std::optional<ConvexityCertificate> abs_deriv_certificate() const {
    std::optional<ConvexityCertificate> best;
    for (const auto& cert : certificates)
      if (cert.target == CertTarget::AbsDeriv)
        if (!best || cert.c > best->c) best = cert;
    return best;
  }
};

// Ordered pair of instance names checked by the product-inequality harness.
// The first entry plays the convex role in the mixed bounds; the common
// modulus for the symmetric bounds is the smaller of the two self moduli.
struct ProductPair {
  std::string first;
  std::string second;
};

struct Corpus {
  std::vector<FunctionInstance> instances;
  std::vector<ProductPair> pairs;

  const FunctionInstance* find(const std::string& name) const {
    for (const auto& inst : instances)
      if (inst.name == name) return &inst;
    return nullptr;
  }
};

class CorpusParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorpusValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Validation

struct CertValidation {
  std::string instance;
  ConvexityCertificate cert;
  double slack = 0.0;     // strong-convexity slack on the validation grid
  bool m_ok = false;      // M dominates the 1025-point grid sup of |f'|
  bool pass = false;
  std::string detail;
};

struct InstanceValidation {
  std::string name;
  std::vector<CertValidation> certs;
  std::optional<double> antiderivative_residual;
  std::optional<double> nonneg_min;
  bool pass = false;
  std::string detail;
};

inline constexpr double kSlackTolerance = -1e-10;

inline InstanceValidation validate_instance(const FunctionInstance& inst) {
  InstanceValidation out;
  out.name = inst.name;
  out.pass = true;

  auto fail = [&out](const std::string& why) {
    out.pass = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += why;
  };

  if (!(inst.a < inst.b)) fail("requires a < b");
  if (inst.certificates.empty()) fail("requires at least one certificate");

  double grid_sup = 0.0;
  for (int i = 0; i <= 1024; ++i) {
    const double x = (i == 1024) ? inst.b : inst.a + (inst.b - inst.a) * i / 1024.0;
    grid_sup = std::max(grid_sup, std::fabs(inst.eval_fprime(x)));
  }

  for (const auto& cert : inst.certificates) {
    CertValidation cv;
    cv.instance = inst.name;
    cv.cert = cert;
    cv.pass = true;
    if (!(cert.c >= 0.0)) {
      cv.pass = false;
      cv.detail = "requires c >= 0";
    }
    if (!(cert.M > 0.0)) {
      cv.pass = false;
      cv.detail = "requires M > 0";
    }
    if (cert.target == CertTarget::AbsDerivPow && !(cert.q >= 1.0)) {
      cv.pass = false;
      cv.detail = "requires q >= 1";
    }
    if (cv.pass) {
      const oracle::ConvexityTarget target =
          cert.target == CertTarget::Self         ? oracle::ConvexityTarget::Self
          : cert.target == CertTarget::AbsDeriv   ? oracle::ConvexityTarget::AbsDeriv
                                                  : oracle::ConvexityTarget::AbsDerivPow;
      const oracle::Fn probe =
          cert.target == CertTarget::Self ? inst.f_fn() : inst.fprime_fn();
      cv.slack = oracle::check_strong_convexity(probe, inst.a, inst.b, cert.c,
                                                target, cert.q);
      if (cv.slack < kSlackTolerance) {
        cv.pass = false;
        cv.detail = "strong-convexity slack " + std::to_string(cv.slack) +
                    " below tolerance";
      }
      cv.m_ok = cert.M >= grid_sup;
      if (!cv.m_ok) {
        cv.pass = false;
        if (!cv.detail.empty()) cv.detail += "; ";
        cv.detail += "declared M below grid sup of |f'|";
      }
    }
    if (!cv.pass)
      fail("certificate " + std::string(to_string(cert.target)) + ": " + cv.detail);
    out.certs.push_back(std::move(cv));
  }

  if (inst.antiderivative) {
    // F' must reproduce f on a 257-point grid.
    const expr::ExprPtr Fp = expr::derive(inst.antiderivative);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
      const double x = (i == 256) ? inst.b : inst.a + (inst.b - inst.a) * i / 256.0;
      worst = std::max(worst, std::fabs(expr::eval(Fp, x) - inst.eval_f(x)));
    }
    out.antiderivative_residual = worst;
    if (worst > 1e-9) fail("antiderivative residual exceeds 1e-9");
  }

  if (inst.nonneg) {
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1024; ++i) {
      const double x = (i == 1024) ? inst.b : inst.a + (inst.b - inst.a) * i / 1024.0;
      mn = std::min(mn, inst.eval_f(x));
    }
    out.nonneg_min = mn;
    if (mn < -1e-12) fail("declared nonneg but grid minimum below -1e-12");
  }

  return out;
}

inline std::vector<InstanceValidation> validate_corpus(const Corpus& corpus) {
  std::vector<InstanceValidation> rows;
  rows.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances) rows.push_back(validate_instance(inst));
  return rows;
}

inline void validate_pairs(const Corpus& corpus) {
  for (const auto& pair : corpus.pairs) {
    const FunctionInstance* f = corpus.find(pair.first);
    const FunctionInstance* g = corpus.find(pair.second);
    if (!f || !g)
      throw CorpusValidationError("pair references unknown instance '" +
                                  (f ? pair.second : pair.first) + "'");
    if (f->a != g->a || f->b != g->b)
      throw CorpusValidationError("pair (" + pair.first + ", " + pair.second +
                                  ") spans different intervals");
    if (!f->nonneg || !g->nonneg)
      throw CorpusValidationError("pair (" + pair.first + ", " + pair.second +
                                  ") requires nonnegative instances");
    if (!f->self_modulus() || !g->self_modulus())
      throw CorpusValidationError("pair (" + pair.first + ", " + pair.second +
                                  ") requires SELF certificates");
  }
}

// ---------------------------------------------------------------------------
// Built-in corpus

namespace detail {

inline FunctionInstance make_instance(std::string name, const char* f_text,
                                      const char* anti_text, double a, double b,
                                      std::vector<ConvexityCertificate> certs,
                                      bool nonneg, bool monotone) {
  FunctionInstance inst;
  inst.name = std::move(name);
  inst.f = expr::parse(f_text);
  inst.fprime = expr::derive(inst.f);
  if (anti_text) inst.antiderivative = expr::parse(anti_text);
  inst.a = a;
  inst.b = b;
  inst.certificates = std::move(certs);
  inst.nonneg = nonneg;
  inst.abs_deriv_monotone = monotone;
  return inst;
}

}  // namespace detail

// Fixtures with analytically known moduli and derivative bounds. Moduli are
// the exact maxima (half the minimum second derivative of the target over
// the interval); M values are the exact suprema of |f'|.
inline Corpus builtin_corpus() {
  const double kExpqM = std::exp(1.0) + 2.0;  // sup of e^x + 2x on [0, 1]
  const double kCoshM = std::sinh(1.0);       // sup of |sinh| on [-1, 1]

  Corpus corpus;
  corpus.instances = {
      detail::make_instance(
          "quad", "x^2", "x^3/3", 0.0, 1.0,
          {{CertTarget::Self, 1.0, 2.0},
           {CertTarget::AbsDeriv, 0.0, 2.0},
           {CertTarget::AbsDerivPow, 4.0, 2.0, 2.0}},
          true, true),
      detail::make_instance(
          "cubic", "x^3/3", "x^4/12", 0.0, 1.0,
          {{CertTarget::Self, 0.0, 1.0},
           {CertTarget::AbsDeriv, 1.0, 1.0},
           {CertTarget::AbsDerivPow, 0.0, 1.0, 2.0}},
          true, true),
      detail::make_instance(
          "expq", "exp(x)+x^2", "exp(x)+x^3/3", 0.0, 1.0,
          {{CertTarget::Self, 1.5, kExpqM},
           {CertTarget::AbsDeriv, 0.5, kExpqM},
           {CertTarget::AbsDerivPow, 10.0, kExpqM, 2.0}},
          true, true),
      detail::make_instance(
          "cosh", "cosh(x)", "sinh(x)", -1.0, 1.0,
          {{CertTarget::Self, 0.5, kCoshM},
           {CertTarget::AbsDeriv, 0.0, kCoshM}},
          true, false),
      detail::make_instance(
          "poly2", "0.5*x^2+2*x+3", "x^3/6+x^2+3*x", -1.0, 2.0,
          {{CertTarget::Self, 0.5, 4.0},
           {CertTarget::AbsDeriv, 0.0, 4.0}},
          true, true),
      detail::make_instance(
          "prod_a", "x^2+1", "x^3/3+x", 0.0, 1.0,
          {{CertTarget::Self, 1.0, 2.0},
           {CertTarget::AbsDeriv, 0.0, 2.0}},
          true, true),
      detail::make_instance(
          "prod_b", "2*x^2-x+1", "2*x^3/3-x^2/2+x", 0.0, 1.0,
          {{CertTarget::Self, 2.0, 3.0},
           {CertTarget::AbsDeriv, 0.0, 3.0}},
          true, false),
      detail::make_instance(
          "affine", "2*x+3", "x^2+3*x", 0.0, 1.0,
          {{CertTarget::Self, 0.0, 2.0},
           {CertTarget::AbsDeriv, 0.0, 2.0}},
          true, true),
  };

  // Product pairs for the chord / rearrangement bounds. All live on a
  // unit-width interval with common modulus at most 1: the stated product
  // inequalities carry a final term linear in c where the chord integration
  // produces c^2, and cross-moment weights 1/(b-a)^3 where the substitution
  // gives 1/(b-a), so outside this regime the stated forms stop holding
  // (see the bounds tests for explicit witnesses).
  corpus.pairs = {
      {"quad", "quad"},     {"quad", "prod_a"}, {"prod_a", "prod_b"},
      {"expq", "quad"},     {"affine", "quad"}, {"cubic", "quad"},
  };
  return corpus;
}

// ---------------------------------------------------------------------------
// Corpus config files
//
//   [function]
//   name = quad
//   f = x^2
//   a = 0
//   b = 1
//   antiderivative = x^3/3          (optional)
//   cert = SELF c=1 M=2             (repeatable; ABS_DERIV_POW adds q=...)
//   nonneg = true                   (optional, default false)
//   monotone_abs_deriv = true       (optional, default false)
//
//   [pair]
//   f = quad
//   g = quad
//
// Lines starting with '#' are comments.

namespace detail {

inline void line_error(int line, const std::string& msg) {
  throw CorpusParseError("corpus config line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(const std::string& text, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    line_error(line, "malformed number '" + text + "'");
  return v;
}

inline ConvexityCertificate parse_cert(const std::string& text, int line) {
  std::istringstream in(text);
  std::string target_token;
  in >> target_token;
  ConvexityCertificate cert;
  if (target_token == "SELF")
    cert.target = CertTarget::Self;
  else if (target_token == "ABS_DERIV")
    cert.target = CertTarget::AbsDeriv;
  else if (target_token == "ABS_DERIV_POW")
    cert.target = CertTarget::AbsDerivPow;
  else
    line_error(line, "unknown certificate target '" + target_token + "'");

  bool has_c = false, has_m = false, has_q = false;
  std::string kv;
  while (in >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) line_error(line, "expected key=value in cert");
    const std::string key = kv.substr(0, eq);
    const double value = parse_number(kv.substr(eq + 1), line);
    if (key == "c") {
      cert.c = value;
      has_c = true;
    } else if (key == "M") {
      cert.M = value;
      has_m = true;
    } else if (key == "q") {
      cert.q = value;
      has_q = true;
    } else {
      line_error(line, "unknown cert key '" + key + "'");
    }
  }
  if (!has_c || !has_m) line_error(line, "cert requires c= and M=");
  if (cert.target == CertTarget::AbsDerivPow && !has_q)
    line_error(line, "ABS_DERIV_POW cert requires q=");
  if (cert.target != CertTarget::AbsDerivPow && has_q)
    line_error(line, "q= is only valid for ABS_DERIV_POW");
  return cert;
}

struct RawBlock {
  bool is_pair = false;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<int> entry_lines;
};

inline std::vector<RawBlock> split_blocks(std::istream& in) {
  std::vector<RawBlock> blocks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // trim
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string trimmed = line.substr(begin, end - begin + 1);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (trimmed == "[function]" || trimmed == "[pair]") {
      RawBlock b;
      b.is_pair = trimmed == "[pair]";
      b.line = lineno;
      blocks.push_back(std::move(b));
      continue;
    }
    if (trimmed[0] == '[') line_error(lineno, "unknown block '" + trimmed + "'");
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) line_error(lineno, "expected key = value");
    if (blocks.empty()) line_error(lineno, "entry outside of a block");
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    blocks.back().entries.emplace_back(trim(trimmed.substr(0, eq)),
                                       trim(trimmed.substr(eq + 1)));
    blocks.back().entry_lines.push_back(lineno);
  }
  return blocks;
}

}  // namespace detail

// Parse only; see load_corpus for the validating entry point.
inline Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  for (const auto& block : detail::split_blocks(in)) {
    if (block.is_pair) {
      ProductPair pair;
      for (std::size_t i = 0; i < block.entries.size(); ++i) {
        const auto& [key, value] = block.entries[i];
        if (key == "f")
          pair.first = value;
        else if (key == "g")
          pair.second = value;
        else
          detail::line_error(block.entry_lines[i], "unknown pair key '" + key + "'");
      }
      if (pair.first.empty() || pair.second.empty())
        detail::line_error(block.line, "pair requires f = and g =");
      corpus.pairs.push_back(std::move(pair));
      continue;
    }

    FunctionInstance inst;
    bool has_a = false, has_b = false;
    for (std::size_t i = 0; i < block.entries.size(); ++i) {
      const auto& [key, value] = block.entries[i];
      const int line = block.entry_lines[i];
      try {
        if (key == "name")
          inst.name = value;
        else if (key == "f")
          inst.f = expr::parse(value);
        else if (key == "antiderivative")
          inst.antiderivative = expr::parse(value);
        else if (key == "a") {
          inst.a = detail::parse_number(value, line);
          has_a = true;
        } else if (key == "b") {
          inst.b = detail::parse_number(value, line);
          has_b = true;
        } else if (key == "cert")
          inst.certificates.push_back(detail::parse_cert(value, line));
        else if (key == "nonneg")
          inst.nonneg = value == "true";
        else if (key == "monotone_abs_deriv")
          inst.abs_deriv_monotone = value == "true";
        else
          detail::line_error(line, "unknown key '" + key + "'");
      } catch (const expr::ParseError& e) {
        detail::line_error(line, std::string("expression error: ") + e.what());
      }
    }
    if (inst.name.empty()) detail::line_error(block.line, "function requires name =");
    if (!inst.f) detail::line_error(block.line, "function requires f =");
    if (!has_a || !has_b)
      detail::line_error(block.line, "function requires a = and b =");
    inst.fprime = expr::derive(inst.f);
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

inline Corpus parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusParseError("cannot open corpus file '" + path + "'");
  return parse_corpus(in);
}

// Parse and validate. Instances failing oracle validation are rejected with
// the offending instance and certificate target named in the error.
inline Corpus load_corpus(const std::string& path) {
  Corpus corpus = parse_corpus_file(path);
  for (const auto& inst : corpus.instances) {
    const InstanceValidation v = validate_instance(inst);
    if (!v.pass)
      throw CorpusValidationError("instance '" + inst.name + "' rejected: " + v.detail);
  }
  validate_pairs(corpus);
  return corpus;
}

}  // namespace ostrowski::corpus
