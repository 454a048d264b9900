#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "hfstab/omega_dsl.hpp"

using namespace hfstab;
using namespace hfstab::dsl;

namespace {

double eval(const std::string& s, double k, const ModelParams& p = {}) { return evaluate(parse(s), k, p); }

ExprPtr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  static const char* names[] = {"k", "g", "h", "alpha", "pi", "x_1"};
  switch (pick(rng)) {
  case 0: {
    std::uniform_real_distribution<double> mant(0.0, 10.0);
    std::uniform_int_distribution<int> ex(-30, 30);
    double v = rng() % 3 == 0 ? static_cast<double>(rng() % 100) : mant(rng) * std::pow(10.0, ex(rng));
    return make_literal(v);
  }
  case 1: return make_variable(names[rng() % 6]);
  case 2: return make_negate(random_tree(rng, depth - 1));
  case 3: {
    static const BinOp ops[] = {BinOp::add, BinOp::sub, BinOp::mul, BinOp::div, BinOp::pow};
    return make_binary(ops[rng() % 5], random_tree(rng, depth - 1), random_tree(rng, depth - 1));
  }
  default: {
    static const Func fns[] = {Func::sqrt, Func::tanh, Func::sign, Func::abs, Func::sin, Func::cos, Func::exp};
    return make_call(fns[rng() % 7], random_tree(rng, depth - 1));
  }
  }
}

} // namespace

TEST(Parse, Precedence) {
  EXPECT_EQ(eval("-k^3", 2.0), -8.0);
  EXPECT_EQ(eval("2^3^2", 0.0), 512.0);
  EXPECT_EQ(eval("2*3+4", 0.0), 10.0);
  EXPECT_EQ(eval("2+3*4", 0.0), 14.0);
  EXPECT_EQ(eval("8/4/2", 0.0), 1.0);
  EXPECT_EQ(eval("8-4-2", 0.0), 2.0);
  EXPECT_EQ(eval("(1+2)*3", 0.0), 9.0);
  EXPECT_EQ(eval("2^-1", 0.0), 0.5);
  EXPECT_EQ(eval("--k", 3.0), 3.0);
  EXPECT_EQ(eval("-2^2", 0.0), -4.0);
  EXPECT_EQ(eval("3.5", 17.0), 3.5);
  EXPECT_DOUBLE_EQ(eval("1.5e2 + .5 + 2E-1", 0.0), 150.7);
  EXPECT_DOUBLE_EQ(eval("pi", 0.0), pi);
}

TEST(Parse, WaterWaveBranch) {
  ModelParams p{{"g", 1.0}, {"h", 1.0}};
  boost::multiprecision::cpp_bin_float_50 one = 1;
  double exact = sqrt(tanh(one)).convert_to<double>();
  EXPECT_NEAR(eval("sign(k)*sqrt(g*k*tanh(k*h))", 1.0, p), exact, 1e-16);
}

TEST(Parse, Errors) {
  auto offset_of = [](const std::string& s) -> long {
    try {
      parse(s);
    } catch (const ParseError& e) {
      EXPECT_LE(e.offset(), s.size());
      EXPECT_FALSE(e.expected().empty());
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  EXPECT_EQ(offset_of("k+"), 2);
  EXPECT_EQ(offset_of(""), 0);
  EXPECT_EQ(offset_of("(k"), 2);
  EXPECT_EQ(offset_of("k)"), 1);
  EXPECT_EQ(offset_of("2k"), 1);
  EXPECT_EQ(offset_of("foo(k)"), 0);
  EXPECT_EQ(offset_of("sqrt k"), 5);
  EXPECT_EQ(offset_of("1e"), 2);
  EXPECT_EQ(offset_of("k $ 2"), 2);
  EXPECT_EQ(offset_of("k**2"), 2);
  EXPECT_EQ(offset_of("1e999"), 0);
}

TEST(Parse, ErrorMessageCarriesOffset) {
  try {
    parse("k+");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 2"), std::string::npos);
  }
}

TEST(Evaluate, Errors) {
  auto kind_of = [](const std::string& s, double k) {
    try {
      eval(s, k);
    } catch (const EvalError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  EXPECT_EQ(kind_of("sqrt(-1)", 0.0), static_cast<int>(EvalError::Kind::domain));
  EXPECT_EQ(kind_of("tanh(k*h)/k", 0.0), static_cast<int>(EvalError::Kind::unbound_variable));
  EXPECT_EQ(kind_of("1/k", 0.0), static_cast<int>(EvalError::Kind::domain));
  EXPECT_EQ(kind_of("k^0.5", -1.0), static_cast<int>(EvalError::Kind::domain));
  EXPECT_EQ(kind_of("exp(k)", 1000.0), static_cast<int>(EvalError::Kind::non_finite));
  EXPECT_EQ(kind_of("q", 0.0), static_cast<int>(EvalError::Kind::unbound_variable));
  ModelParams h{{"h", 1.0}};
  EXPECT_THROW(evaluate(parse("tanh(k*h)/k"), 0.0, h), EvalError);
  EXPECT_NEAR(evaluate(parse("tanh(k*h)/k"), 1e-8, h), 1.0, 1e-12);
}

TEST(Evaluate, SignOfZero) {
  EXPECT_EQ(eval("sign(k)", 0.0), 0.0);
  EXPECT_EQ(eval("sign(k)", -2.0), -1.0);
  EXPECT_EQ(eval("abs(k)", -2.0), 2.0);
}

TEST(Oddness, Classification) {
  auto grid = symmetric_grid(5.0, 101);
  EXPECT_TRUE(validate_oddness(*parse("-k^3"), {}, grid).is_odd);
  auto even = validate_oddness(*parse("k^2"), {}, grid);
  EXPECT_FALSE(even.is_odd);
  EXPECT_DOUBLE_EQ(even.max_violation, 2 * 25.0);
  ModelParams p{{"g", 1.0}, {"h", 1.0}};
  EXPECT_TRUE(validate_oddness(*parse("sign(k)*sqrt(g*k*tanh(k*h))"), p, grid).is_odd);
  EXPECT_TRUE(validate_oddness(*parse("k^3 - 0.25*k^5"), {}, grid).is_odd);
  EXPECT_FALSE(validate_oddness(*parse("sqrt(1+k^2)"), {}, grid).is_odd);
  EXPECT_THROW(validate_oddness(*parse("k"), {}, {}), ConfigError);
  EXPECT_THROW(validate_oddness(*parse("sqrt(k)"), {}, grid), EvalError);
}

TEST(Printer, CanonicalForm) {
  EXPECT_EQ(print(parse("-k^3")), "(-(k^3))");
  EXPECT_EQ(print(parse("a+b*c")), "(a+(b*c))");
  EXPECT_EQ(print(parse("sqrt(g*k)")), "sqrt((g*k))");
  EXPECT_EQ(print(parse("0.1")), "0.10000000000000001");
}

TEST(Printer, RoundTripIdempotent) {
  for (const char* s : {"-k^3", "sign(k)*sqrt(g*k*tanh(k*h))", "2^3^2", "-(k-1)/(k+1)", "pi*exp(-k^2)",
                        "1e-300*k", "123456789.123456789"}) {
    ExprPtr a = parse(s);
    ExprPtr b = parse(print(a));
    EXPECT_TRUE(structurally_equal(*a, *b)) << s;
    EXPECT_EQ(print(a), print(b));
  }
}

TEST(Printer, RandomTreesRoundTrip) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 10000; ++i) {
    ExprPtr t = random_tree(rng, 6);
    std::string text = print(t);
    ExprPtr back = parse(text);
    ASSERT_TRUE(structurally_equal(*t, *back)) << text;
  }
}

TEST(FreeVariables, ExcludesPi) {
  auto v = free_variables(*parse("g*k*pi + h"));
  EXPECT_EQ(v, (std::set<std::string>{"g", "h", "k"}));
}
