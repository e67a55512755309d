// Command-line front end: bound evaluation, inequality verification over a
// corpus, certified midpoint integration, and corpus inspection.
//
// Exit codes: 0 success, 1 verification/validation failure, 2 usage or input
// error, 3 hypothesis violation or exhausted refinement budget.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ostrowski/bounds.hpp"
#include "ostrowski/corpus.hpp"
#include "ostrowski/expr.hpp"
#include "ostrowski/integrator.hpp"
#include "ostrowski/json_writer.hpp"
#include "ostrowski/oracle.hpp"
#include "ostrowski/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitUsage;
}

struct BoundsArgs {
  std::string theorem;
  double a = 0.0, b = 0.0, M = 0.0;
  std::optional<double> x, c, p, q;
};

void write_bounds_params(ostrowski::jsonio::Writer& w, const BoundsArgs& args) {
  w.key("params").begin_object();
  w.key("M").value(args.M);
  w.key("a").value(args.a);
  w.key("b").value(args.b);
  if (args.c) w.key("c").value(*args.c);
  if (args.p) w.key("p").value(*args.p);
  if (args.q) w.key("q").value(*args.q);
  if (args.x) w.key("x").value(*args.x);
  w.end_object();
}

int cmd_bounds(BoundsArgs args) {
  using namespace ostrowski;

  const bool midpoint = args.theorem == "cor2" || args.theorem == "cor3" ||
                        args.theorem == "cor4";
  const bool needs_c = args.theorem == "t1" || args.theorem == "t2" ||
                       args.theorem == "t3" || midpoint;
  const bool needs_holder = args.theorem == "alomari" || args.theorem == "t2" ||
                            args.theorem == "cor3";
  const bool needs_q =
      args.theorem == "t3" || args.theorem == "cor4" || needs_holder;

  if (!(args.a < args.b)) return usage_error("requires --a < --b");
  if (midpoint && args.x) return usage_error("--x is fixed to (a+b)/2 for " + args.theorem);
  if (!midpoint && !args.x) return usage_error("--x is required for " + args.theorem);
  if (needs_c && !args.c) return usage_error("--c is required for " + args.theorem);
  if (needs_holder) {
    if (!args.p && !args.q) return usage_error("--p or --q required for " + args.theorem);
    if (args.p && !args.q) args.q = *args.p / (*args.p - 1.0);
    if (args.q && !args.p) args.p = *args.q / (*args.q - 1.0);
  } else if (needs_q && !args.q) {
    return usage_error("--q is required for " + args.theorem);
  }

  const double x = midpoint ? (args.a + args.b) / 2.0 : *args.x;
  const double c = args.c.value_or(0.0);

  bool hyp = true;
  std::optional<double> rhs;
  try {
    if (args.theorem == "classic") {
      rhs = bounds::classic_ostrowski_rhs(x, args.a, args.b, args.M);
    } else if (args.theorem == "alomari") {
      bounds::check_holder_pair(*args.p, *args.q);
      rhs = bounds::alomari_rhs(x, args.a, args.b, args.M, *args.p);
    } else if (args.theorem == "t1" || args.theorem == "cor2") {
      hyp = bounds::hypothesis_ok(x, args.a, args.b, args.M, c);
      if (hyp)
        rhs = args.theorem == "t1"
                  ? bounds::sc_rhs_t1(x, args.a, args.b, args.M, c)
                  : bounds::midpoint_rhs_t1(args.a, args.b, args.M, c);
    } else if (args.theorem == "t2" || args.theorem == "cor3") {
      bounds::check_holder_pair(*args.p, *args.q);
      hyp = bounds::hypothesis_ok(x, args.a, args.b, args.M, c, *args.q);
      if (hyp)
        rhs = args.theorem == "t2"
                  ? bounds::sc_rhs_t2(x, args.a, args.b, args.M, c, *args.p, *args.q)
                  : bounds::midpoint_rhs_t2(args.a, args.b, args.M, c, *args.p,
                                            *args.q);
    } else if (args.theorem == "t3" || args.theorem == "cor4") {
      hyp = bounds::hypothesis_ok(x, args.a, args.b, args.M, c, *args.q);
      if (hyp)
        rhs = args.theorem == "t3"
                  ? bounds::sc_rhs_t3(x, args.a, args.b, args.M, c, *args.q)
                  : bounds::midpoint_rhs_t3(args.a, args.b, args.M, c, *args.q);
    } else {
      return usage_error("unknown theorem '" + args.theorem + "'");
    }
  } catch (const bounds::HypothesisError&) {
    hyp = false;
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }

  jsonio::Writer w;
  w.begin_object();
  w.key("hypothesis_ok").value(hyp);
  write_bounds_params(w, args);
  if (rhs)
    w.key("rhs").value(*rhs);
  else
    w.key("rhs").null();
  w.key("theorem").value(args.theorem);
  w.end_object();
  std::cout << w.take() << "\n";
  return hyp ? kExitOk : kExitHypothesis;
}

struct VerifyArgs {
  std::string corpus_path;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  int samples = 64;
  int threads = 0;
  std::string format = "json";
  bool include_suspect = false;
};

int cmd_verify(const VerifyArgs& args) {
  using namespace ostrowski;

  corpus::Corpus c;
  try {
    c = args.corpus_path.empty() ? corpus::builtin_corpus()
                                 : corpus::load_corpus(args.corpus_path);
  } catch (const std::exception& e) {
    return usage_error(std::string("corpus load failed: ") + e.what());
  }

  verify::VerifyConfig cfg;
  cfg.tol_verify = args.tol;
  cfg.samples = args.samples;
  cfg.threads = args.threads;

  verify::VerificationReport report;
  try {
    report = verify::run_suite(c, cfg, args.seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }

  if (args.format == "csv")
    std::cout << verify::to_csv(report);
  else
    std::cout << verify::to_json(report, args.include_suspect);
  return report.passed() ? kExitOk : kExitVerificationFailure;
}

struct IntegrateArgs {
  std::string function;
  double a = 0.0, b = 0.0;
  double target_cert = 0.0;
  std::optional<double> M, c;
  bool auto_certify = false;
  std::string strategy = "greedy";
  std::size_t max_panels = 1u << 16;
  int threads = 1;  // accepted for interface symmetry; integration is serial
};

int cmd_integrate(const IntegrateArgs& args) {
  using namespace ostrowski;

  if (!(args.a < args.b)) return usage_error("requires --a < --b");
  if (!(args.target_cert > 0.0)) return usage_error("requires --target-cert > 0");
  if (!args.M && !args.auto_certify)
    return usage_error("provide --M (and optionally --c) or --auto-certify");

  integrator::IntegrandModel model;
  expr::ExprPtr f, fprime;
  try {
    f = expr::parse(args.function);
    fprime = expr::derive(f);
  } catch (const std::exception& e) {
    return usage_error(std::string("--function: ") + e.what());
  }
  model.f = [f](double x) { return expr::eval(f, x); };
  model.fprime = [fprime](double x) { return expr::eval(fprime, x); };

  if (args.auto_certify) {
    model.M = oracle::sup_abs_derivative(model.fprime, args.a, args.b);
    const oracle::Fn abs_fp = [fp = model.fprime](double x) {
      return std::fabs(fp(x));
    };
    double c = oracle::estimate_modulus(abs_fp, args.a, args.b);
    if (c > 0.0) {
      double slack = oracle::check_strong_convexity(
          model.fprime, args.a, args.b, c, oracle::ConvexityTarget::AbsDeriv);
      if (slack < corpus::kSlackTolerance) {
        c *= 0.999;  // second-difference estimates can overshoot by O(step)
        slack = oracle::check_strong_convexity(
            model.fprime, args.a, args.b, c, oracle::ConvexityTarget::AbsDeriv);
        if (slack < corpus::kSlackTolerance) c = 0.0;
      }
    }
    model.c = c;
  } else {
    model.M = *args.M;
    model.c = args.c.value_or(0.0);
  }

  integrator::CertifiedIntegral result;
  try {
    result = integrator::integrate_certified(
        model, args.a, args.b, args.target_cert, args.max_panels,
        args.strategy == "uniform" ? integrator::Strategy::Uniform
                                   : integrator::Strategy::Greedy);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }

  long classical = 0, strong = 0;
  for (const auto& p : result.panels)
    (p.rule == integrator::PanelRule::StrongConvex ? strong : classical) += 1;

  jsonio::Writer w;
  w.begin_object();
  w.key("M").value(model.M);
  w.key("c").value(model.c);
  w.key("certificate").value(result.certificate);
  w.key("converged").value(result.converged);
  w.key("evaluations").value(static_cast<long long>(result.evaluations));
  w.key("panels").value(static_cast<long long>(result.panels.size()));
  w.key("rules").begin_object();
  w.key("classical").value(classical);
  w.key("strong_convex").value(strong);
  w.end_object();
  w.key("strategy").value(args.strategy);
  w.key("target_cert").value(args.target_cert);
  w.key("value").value(result.value);
  w.end_object();
  std::cout << w.take() << "\n";
  return result.converged ? kExitOk : kExitHypothesis;
}

struct CorpusArgs {
  std::string corpus_path;
  bool validate = false;
};

int cmd_corpus(const CorpusArgs& args) {
  using namespace ostrowski;

  corpus::Corpus c;
  try {
    c = args.corpus_path.empty() ? corpus::builtin_corpus()
                                 : corpus::parse_corpus_file(args.corpus_path);
  } catch (const std::exception& e) {
    return usage_error(std::string("corpus load failed: ") + e.what());
  }

  bool all_pass = true;
  std::vector<corpus::InstanceValidation> validation;
  if (args.validate) {
    validation = corpus::validate_corpus(c);
    for (const auto& row : validation) all_pass = all_pass && row.pass;
    try {
      corpus::validate_pairs(c);
    } catch (const std::exception& e) {
      all_pass = false;
      std::cerr << "error: " << e.what() << "\n";
    }
  }

  jsonio::Writer w;
  w.begin_object();
  w.key("instances").begin_array();
  for (const auto& inst : c.instances) {
    w.begin_object();
    w.key("a").value(inst.a);
    if (inst.antiderivative)
      w.key("antiderivative").value(expr::to_string(inst.antiderivative));
    else
      w.key("antiderivative").null();
    w.key("b").value(inst.b);
    w.key("certificates").begin_array();
    for (const auto& cert : inst.certificates) {
      w.begin_object();
      w.key("M").value(cert.M);
      w.key("c").value(cert.c);
      if (cert.target == corpus::CertTarget::AbsDerivPow) w.key("q").value(cert.q);
      w.key("target").value(corpus::to_string(cert.target));
      w.end_object();
    }
    w.end_array();
    w.key("f").value(expr::to_string(inst.f));
    w.key("monotone_abs_deriv").value(inst.abs_deriv_monotone);
    w.key("name").value(inst.name);
    w.key("nonneg").value(inst.nonneg);
    w.end_object();
  }
  w.end_array();
  w.key("pairs").begin_array();
  for (const auto& pair : c.pairs) {
    w.begin_object();
    w.key("f").value(pair.first);
    w.key("g").value(pair.second);
    w.end_object();
  }
  w.end_array();
  if (args.validate) {
    w.key("validation").begin_array();
    for (const auto& row : validation) {
      for (const auto& cert : row.certs) {
        w.begin_object();
        w.key("M_ok").value(cert.m_ok);
        w.key("detail").value(cert.detail);
        w.key("instance").value(cert.instance);
        w.key("pass").value(cert.pass);
        if (cert.cert.target == corpus::CertTarget::AbsDerivPow)
          w.key("q").value(cert.cert.q);
        w.key("slack").value(cert.slack);
        w.key("target").value(corpus::to_string(cert.cert.target));
        w.end_object();
      }
      if (row.antiderivative_residual) {
        w.begin_object();
        w.key("check").value("antiderivative");
        w.key("instance").value(row.name);
        w.key("pass").value(*row.antiderivative_residual <= 1e-9);
        w.key("residual").value(*row.antiderivative_residual);
        w.end_object();
      }
      if (row.nonneg_min) {
        w.begin_object();
        w.key("check").value("nonneg");
        w.key("instance").value(row.name);
        w.key("min").value(*row.nonneg_min);
        w.key("pass").value(*row.nonneg_min >= -1e-12);
        w.end_object();
      }
    }
    w.end_array();
  }
  w.end_object();
  std::cout << w.take() << "\n";
  return (args.validate && !all_pass) ? kExitVerificationFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ostrowski-type error bounds for strongly convex functions: "
               "bound evaluation, numerical verification, certified integration"};
  app.require_subcommand(1);

  BoundsArgs bargs;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "evaluate one bound's right-hand side");
  bounds_cmd->add_option("--theorem", bargs.theorem)
      ->required()
      ->check(CLI::IsMember(
          {"classic", "alomari", "t1", "t2", "t3", "cor2", "cor3", "cor4"}));
  bounds_cmd->add_option("--a", bargs.a)->required();
  bounds_cmd->add_option("--b", bargs.b)->required();
  bounds_cmd->add_option("--M", bargs.M)->required();
  bounds_cmd->add_option("--x", bargs.x);
  bounds_cmd->add_option("--c", bargs.c);
  bounds_cmd->add_option("--p", bargs.p);
  bounds_cmd->add_option("--q", bargs.q);

  VerifyArgs vargs;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the inequality suite over a corpus");
  verify_cmd->add_option("--corpus", vargs.corpus_path);
  verify_cmd->add_option("--seed", vargs.seed)->envname("OSTROWSKI_SEED");
  verify_cmd->add_option("--tol", vargs.tol);
  verify_cmd->add_option("--samples", vargs.samples);
  verify_cmd->add_option("--threads", vargs.threads);
  verify_cmd->add_option("--format", vargs.format)
      ->check(CLI::IsMember({"json", "csv"}));
  verify_cmd->add_flag("--include-suspect", vargs.include_suspect);

  IntegrateArgs iargs;
  CLI::App* integrate_cmd =
      app.add_subcommand("integrate", "certified composite-midpoint integration");
  integrate_cmd->add_option("--function", iargs.function)->required();
  integrate_cmd->add_option("--a", iargs.a)->required();
  integrate_cmd->add_option("--b", iargs.b)->required();
  integrate_cmd->add_option("--target-cert", iargs.target_cert)->required();
  integrate_cmd->add_option("--M", iargs.M);
  integrate_cmd->add_option("--c", iargs.c);
  integrate_cmd->add_flag("--auto-certify", iargs.auto_certify);
  integrate_cmd->add_option("--strategy", iargs.strategy)
      ->check(CLI::IsMember({"greedy", "uniform"}));
  integrate_cmd->add_option("--max-panels", iargs.max_panels);
  integrate_cmd->add_option("--threads", iargs.threads);

  CorpusArgs cargs;
  CLI::App* corpus_cmd =
      app.add_subcommand("corpus", "list or validate corpus instances");
  corpus_cmd->add_option("--corpus", cargs.corpus_path);
  corpus_cmd->add_flag("--validate", cargs.validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(bargs);
    if (verify_cmd->parsed()) return cmd_verify(vargs);
    if (integrate_cmd->parsed()) return cmd_integrate(iargs);
    if (corpus_cmd->parsed()) return cmd_corpus(cargs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
