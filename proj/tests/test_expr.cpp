#include "ostrowski/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace ostrowski;

namespace {

double central_fd(const expr::ExprPtr& e, double x, double h) {
  return (expr::eval(e, x + h) - expr::eval(e, x - h)) / (2.0 * h);
}

const std::vector<std::string> kCorpusExpressions = {
    "x^2",          "x^3/3",       "exp(x)+x^2", "cosh(x)",
    "0.5*x^2+2*x+3", "x^2+1",      "2*x^2-x+1",  "2*x+3",
    "exp(x)+x^3/3", "sinh(x)",     "x^4/12",     "x^3/6+x^2+3*x",
};

}  // namespace

TEST(ExprParse, SimpleShapes) {
  const auto p = expr::parse("x^2");
  ASSERT_EQ(p->kind, expr::NodeKind::Pow);
  EXPECT_EQ(p->lhs->kind, expr::NodeKind::Variable);
  EXPECT_EQ(p->rhs->value, 2.0);

  const auto d = expr::parse("x^3/3");
  ASSERT_EQ(d->kind, expr::NodeKind::Div);
  EXPECT_EQ(d->lhs->kind, expr::NodeKind::Pow);
  EXPECT_EQ(d->rhs->value, 3.0);
}

TEST(ExprParse, WhitespaceInsensitive) {
  const auto a = expr::parse("exp(x) + 2*x^2 - 1");
  const auto b = expr::parse("exp( x )+2 * x ^ 2-1");
  EXPECT_TRUE(expr::structurally_equal(a, b));
  for (double x : {0.0, 0.3, 1.0, -0.7})
    EXPECT_DOUBLE_EQ(expr::eval(a, x), std::exp(x) + 2.0 * x * x - 1.0);
}

TEST(ExprParse, CaretIsRightAssociativeOverConstants) {
  // x^2^3 parses as x^(2^3); the exponent folds to a constant.
  const auto a = expr::parse("x^2^3");
  const auto b = expr::parse("x^8");
  EXPECT_TRUE(expr::structurally_equal(a, b));
}

TEST(ExprParse, ErrorsCarryByteOffsets) {
  try {
    expr::parse("x + foo(x)");
    FAIL() << "expected ParseError";
  } catch (const expr::ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }

  try {
    expr::parse("x^x");
    FAIL() << "expected ParseError";
  } catch (const expr::ParseError& e) {
    EXPECT_EQ(e.offset(), 1u);
  }

  EXPECT_THROW(expr::parse("(x"), expr::ParseError);
  EXPECT_THROW(expr::parse("2 +"), expr::ParseError);
  EXPECT_THROW(expr::parse("x 2"), expr::ParseError);
  EXPECT_THROW(expr::parse(""), expr::ParseError);
}

TEST(ExprEval, Examples) {
  EXPECT_EQ(expr::eval(expr::parse("x^2"), 0.5), 0.25);
  EXPECT_EQ(expr::eval(expr::parse("exp(x)"), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(expr::eval(expr::parse("x^3/3"), 1.0), 1.0 / 3.0);
}

TEST(ExprEval, DomainViolationsAreErrors) {
  EXPECT_THROW(expr::eval(expr::parse("log(x)"), 0.0), expr::EvalError);
  EXPECT_THROW(expr::eval(expr::parse("log(x-2)"), 1.0), expr::EvalError);
  EXPECT_THROW(expr::eval(expr::parse("1/x"), 0.0), expr::EvalError);
  EXPECT_THROW(expr::eval(expr::parse("exp(x)"), 1e6), expr::EvalError);  // overflow
}

TEST(ExprEval, Deterministic) {
  const auto e = expr::parse("exp(x)+x^2");
  const double v1 = expr::eval(e, 0.7318);
  const double v2 = expr::eval(e, 0.7318);
  EXPECT_EQ(std::memcmp(&v1, &v2, sizeof v1), 0);
}

TEST(ExprDerive, PowerRule) {
  const auto d = expr::derive(expr::parse("x^2"));
  EXPECT_TRUE(expr::structurally_equal(d, expr::parse("2*x")));
}

TEST(ExprDerive, QuotientWithConstantDenominator) {
  const auto d = expr::derive(expr::parse("x^3/3"));
  for (double x : {0.0, 0.25, 0.5, 1.0, 2.0})
    EXPECT_NEAR(expr::eval(d, x), x * x, 1e-12);
}

TEST(ExprDerive, SumOfExpAndSquare) {
  const auto d = expr::derive(expr::parse("exp(x)+x^2"));
  EXPECT_NEAR(expr::eval(d, 1.0), 4.718281828459045, 1e-9);
  const double fd = central_fd(expr::parse("exp(x)+x^2"), 1.0, 1e-5);
  EXPECT_NEAR(expr::eval(d, 1.0), fd, 1e-6 * (1.0 + std::fabs(fd)));
}

TEST(ExprDerive, AbsIsRejected) {
  EXPECT_THROW(expr::derive(expr::parse("abs(x)")), expr::DeriveError);
  EXPECT_THROW(expr::derive(expr::parse("x^2+abs(x)")), expr::DeriveError);
}

TEST(ExprRoundTrip, PrintParse) {
  for (const auto& text : kCorpusExpressions) {
    const auto e = expr::parse(text);
    const auto again = expr::parse(expr::to_string(e));
    EXPECT_TRUE(expr::structurally_equal(e, again)) << text;
  }
  // extra shapes: unary minus, nested functions, scientific constants
  for (const std::string text :
       {"-x", "2*-x", "exp(cosh(x))", "1.5e-3*x+2e+2", "(-(x))^2"}) {
    const auto e = expr::parse(text);
    EXPECT_TRUE(expr::structurally_equal(e, expr::parse(expr::to_string(e))))
        << text;
  }
}

TEST(ExprDerive, MatchesCentralDifferencesOnCorpus) {
  for (const auto& text : kCorpusExpressions) {
    const auto e = expr::parse(text);
    const auto d = expr::derive(e);
    for (int i = 0; i < 64; ++i) {
      const double x = 0.02 + 0.96 * i / 63.0;  // interior of [0, 1]
      const double sym = expr::eval(d, x);
      const double fd = central_fd(e, x, 1e-5);
      EXPECT_NEAR(sym, fd, 1e-6 * (1.0 + std::fabs(sym))) << text << " at " << x;
    }
  }
}
