#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "oscint/corpus.hpp"
#include "oscint/invert.hpp"

using namespace oscint;
using std::numbers::pi;

TEST(Kernels, BuiltinValidation) {
  for (const char* name : {"gauss", "abel"}) {
    auto k = builtin_kernel(name);
    EXPECT_TRUE(k.validated);
    EXPECT_TRUE(k.validation.all()) << name;
    EXPECT_NEAR(k.validation.thetahat_integral, 2 * pi, 1e-7) << name;
    EXPECT_LE(k.validation.tail_slope, -0.9) << name;
  }
  auto c = builtin_kernel("cesaro");
  EXPECT_FALSE(c.validation.all());
  auto failed = c.validation.failed();
  ASSERT_FALSE(failed.empty());
  EXPECT_EQ(failed.front(), "sThetahatPrime_L1");
  // the other clauses hold, including the 2 pi integral
  EXPECT_TRUE(c.validation.theta0_is_1);
  EXPECT_TRUE(c.validation.thetahat_integral_2pi);
  EXPECT_THROW(builtin_kernel("dirichlet"), UnknownEntry);
}

TEST(Kernels, CesaroDyadicSumsDoNotShrink) {
  auto c = builtin_kernel("cesaro");
  const auto& d = c.validation.dyadic_sums;
  ASSERT_GE(d.size(), 4u);
  double last = d.back();
  EXPECT_GT(last, 0.5 * d[d.size() - 3]);
}

TEST(Kernels, JsonDocumentsAndNames) {
  EXPECT_EQ(builtin_kernel_names(), (std::vector<std::string>{"abel", "cesaro", "gauss"}));
  auto k = kernel_from_json(nlohmann::json("abel"));
  EXPECT_EQ(k.name, "abel");
  auto doc = nlohmann::json::parse(R"({"name": "g2", "theta": {"kind": "gauss"},
      "theta_hat": {"kind": "gauss", "amplitude": 1.7724538509055159, "center": 0, "width": 2}})");
  auto g = validated(kernel_from_json(doc));
  EXPECT_TRUE(g.validation.all());
  // Theta(0) = 2 fails the normalisation clause
  auto bad = nlohmann::json::parse(R"({"theta": {"kind": "gauss", "amplitude": 2}, "theta_hat": {"kind": "exp_abs"}})");
  EXPECT_FALSE(validate_kernel(kernel_from_json(bad)).theta0_is_1);
  EXPECT_THROW(kernel_from_json(nlohmann::json::parse("{}")), PreconditionError);
}

TEST(Path, ApertureIsEnforced) {
  auto p = NonTangentialPath::standard(1.0, 2.0, 5);
  ASSERT_EQ(p.y.size(), 5u);
  EXPECT_DOUBLE_EQ(p.y[0], 0.5);
  EXPECT_DOUBLE_EQ(p.x[4], 1.0 + 2.0 / 32);
  EXPECT_THROW(NonTangentialPath::make(0.0, 1.0, {0.5, 0.25}, {0.0, 0.3}), PreconditionError);
  EXPECT_THROW(NonTangentialPath::make(0.0, 1.0, {0.25, 0.5}, {0.0, 0.0}), PreconditionError);
  EXPECT_NO_THROW(NonTangentialPath::make(0.0, 1.0, {0.5, 0.25}, {-0.5, 0.25}));
}

TEST(Invert, CorpusFunctionsAtContinuityPoints) {
  const double xs[] = {-1.3, -0.4, 0.2, 0.9, 2.1};
  for (const char* kn : {"gauss", "abel"}) {
    auto k = builtin_kernel(kn);
    for (const char* name : {"ex1b", "ex1c", "ex1d"}) {
      const auto& f = corpus_lookup(name).f;
      for (double C : {0.0, 1.0}) {
        for (double x : xs) {
          auto r = invert_at(f, k, NonTangentialPath::standard(x, C), 1e-8);
          EXPECT_LT(std::abs(r.limit - f(x)), 1e-3) << kn << ' ' << name << " C=" << C << " x=" << x;
          EXPECT_LE(r.max_mass_error, 1e-8);
        }
      }
    }
  }
}

TEST(Invert, SpecialPoints) {
  auto g = builtin_kernel("gauss");
  auto a = invert_at(corpus_lookup("ex1d").f, g, NonTangentialPath::standard(1.0, 1.0), 1e-8);
  EXPECT_NEAR(a.limit.real(), 0.5, 1e-6);
  auto b = invert_at(corpus_lookup("ex1b").f, g, NonTangentialPath::standard(0.0, 0.0), 1e-8);
  EXPECT_LT(std::abs(b.limit - 1.0), 1e-6);
  EXPECT_EQ(a.trace.size(), 14u);
  EXPECT_FALSE(a.note.empty());
}

TEST(Invert, CesaroIsRejected) {
  auto c = builtin_kernel("cesaro");
  EXPECT_THROW(invert_at(rational_odd(), c, NonTangentialPath::standard(1.0, 0.0)), KernelInvalid);
  try {
    invert_at(rational_odd(), c, NonTangentialPath::standard(1.0, 0.0));
  } catch (const KernelInvalid& e) {
    EXPECT_NE(std::string(e.what()).find("fails Definition"), std::string::npos);
  }
}

TEST(Invert, SpectralRouteAgrees) {
  const auto& e = corpus_lookup("ex1d");
  ASSERT_TRUE(e.fhat_closed_form.has_value());
  auto k = builtin_kernel("gauss");
  auto path = NonTangentialPath::standard(0.8, 1.0, 12);
  auto s = invert_spectral(*e.fhat_closed_form, k, path, 1e-8);
  auto d = invert_at(e.f, k, path, 1e-8);
  EXPECT_LT(std::abs(s.limit - e.f(0.8)), 1e-3);
  EXPECT_LT(std::abs(s.limit - d.limit), 1e-3);
}

TEST(Uniqueness, ZeroTransformRecoversZero) {
  auto r = uniqueness_probe(zero_function(), {-2.0, 0.0, 2.0}, {0.0, 1.0});
  EXPECT_TRUE(r.applicable);
  EXPECT_LT(r.max_recovered, 1e-6);
  auto n = uniqueness_probe(gauss_envelope(), {-2.0, 0.0, 2.0}, {0.0});
  EXPECT_FALSE(n.applicable);
}

TEST(StationaryPhase, MatchesQuadratureAsSGrows) {
  auto f = chirp(1.5, 3.0, true);
  const std::pair<double, double> expect_rel[] = {{10.0, 8.29e-4}, {20.0, 3.6e-5}, {40.0, 5.6e-7}};
  double prev = kInf;
  for (auto [s, want] : expect_rel) {
    auto q = transform(f, s, 1e-10);
    ASSERT_TRUE(q.converged());
    double rel = std::abs(std::abs(stationary_phase_asymptotic(1.5, 3.0, s)) - std::abs(q.value)) / std::abs(q.value);
    EXPECT_NEAR(rel, want, 0.05 * want + 1e-8) << s;
    EXPECT_LT(rel, prev);
    prev = rel;
  }
  EXPECT_THROW(stationary_phase_asymptotic(1.5, 1.0, 2.0), DomainError);
  EXPECT_THROW(stationary_phase_asymptotic(1.5, 3.0, 0.0), DomainError);
}

TEST(Nonreversible, ForwardConvergesInverseDiverges) {
  auto rep = nonreversible_fixture(1.5, 3.0);
  EXPECT_TRUE(rep.forward_converged);
  EXPECT_EQ(rep.inverse.verdict, Verdict::DivergesProven);
  EXPECT_TRUE(rep.confirmed);
  EXPECT_NEAR(rep.growth, 0.5, 1e-15);
  EXPECT_NEAR(rep.phase_exponent, 1.5, 1e-15);
  ASSERT_EQ(rep.forward.size(), 2u);
  EXPECT_LT(std::abs(rep.forward[0].value - cplx{0.47024651221666139468, 0.28806567808668560536}), 1e-7);
  EXPECT_LT(std::abs(rep.forward[1].value - cplx{-1.2360888581044370078, 0.51534396441929955146}), 1e-7);
  EXPECT_THROW(nonreversible_fixture(1.0, 3.0), PreconditionError);
  EXPECT_THROW(nonreversible_fixture(1.5, 2.0), PreconditionError);
}
