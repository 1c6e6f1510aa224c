#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oscint/accel.hpp"

using namespace oscint;

namespace {

std::vector<cplx> partial_sums(int n, double (*term)(int)) {
  std::vector<cplx> s;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += term(k);
    s.push_back(acc);
  }
  return s;
}

double alt_harmonic(int k) { return (k % 2 ? -1.0 : 1.0) / (k + 1); }
double leibniz(int k) { return (k % 2 ? -4.0 : 4.0) / (2 * k + 1); }

}  // namespace

TEST(Wynn, AlternatingHarmonicToLog2) {
  auto r = wynn_epsilon(partial_sums(14, alt_harmonic));
  EXPECT_NEAR(r.value.real(), std::log(2.0), 1e-10);
  EXPECT_LT(r.error, 1e-8);
  EXPECT_FALSE(r.unstable);
}

TEST(Wynn, LeibnizToPi) {
  auto r = wynn_epsilon(partial_sums(16, leibniz));
  EXPECT_NEAR(r.value.real(), std::numbers::pi, 1e-11);
}

TEST(Wynn, GeometricIsExact) {
  // first even column is the limit; the error estimate stays conservative (distance to the last sum)
  std::vector<cplx> s{1.0, 4.0 / 3, 13.0 / 9, 40.0 / 27};
  auto r = wynn_epsilon(s);
  EXPECT_NEAR(r.value.real(), 1.5, 1e-14);
  EXPECT_LE(r.error, 1.5 - 40.0 / 27 + 1e-15);
}

TEST(Wynn, ComplexSequence) {
  std::vector<cplx> s;
  cplx acc = 0.0, z{0.0, -0.5};
  for (int k = 0; k < 12; ++k) {
    acc += std::pow(z, k);
    s.push_back(acc);
  }
  auto r = wynn_epsilon(s);
  cplx want = 1.0 / (1.0 - z);
  EXPECT_LT(std::abs(r.value - want), 1e-13);
}

TEST(Wynn, ConstantSequenceIsFlaggedButValueKept) {
  std::vector<cplx> s(6, cplx{3.0, 0.0});
  auto r = accelerate(s);
  EXPECT_NEAR(r.value.real(), 3.0, 0.0);
}

TEST(Euler, AlternatingHarmonic) {
  auto r = euler_average(partial_sums(30, alt_harmonic));
  EXPECT_NEAR(r.value.real(), std::log(2.0), 1e-9);
}

TEST(Aitken, Geometric) {
  std::vector<cplx> s{1.0, 1.0 + 1.0 / 3, 1.0 + 1.0 / 3 + 1.0 / 9};
  auto r = aitken(s);
  EXPECT_NEAR(r.value.real(), 1.5, 1e-14);
}

TEST(Richardson, RemovesFirstOrderTerm) {
  // I_k = L + c h_k with h halved each step
  std::vector<cplx> seq;
  for (int k = 0; k < 5; ++k) seq.push_back(2.0 + 0.3 * std::ldexp(1.0, -k));
  auto r = richardson_halving(seq);
  ASSERT_EQ(r.size(), seq.size() - 1);
  for (const auto& v : r) EXPECT_NEAR(v.real(), 2.0, 1e-14);
}
