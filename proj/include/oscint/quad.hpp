#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/function_spec.hpp"

namespace oscint {

enum class Status { Converged, Diverged, PrincipalValueOnly, Inconclusive };

enum class TailStrategy { Auto, AbsoluteTail, BVTail, ZeroPartitionExtrapolation, PartsTransform };

/// |value - exact| <= kSafetyFactor * abs_error_estimate for converged corpus results.
inline constexpr double kSafetyFactor = 10.0;
inline constexpr double kDefaultTol = 1e-8;
inline constexpr long long kDefaultBudget = 10'000'000;

struct QuadOptions {
  double tol = kDefaultTol;
  long long budget = kDefaultBudget;
  TailStrategy strategy = TailStrategy::Auto;
};

struct QuadResult {
  cplx value{};
  double abs_error_estimate = kInf;
  Status status = Status::Inconclusive;
  long long evaluations = 0;
  std::vector<std::string> strategy_trace;
  bool value_set = false;  // false for Diverged and PrincipalValueOnly
  int lobes = 0;
  int doublings = 0;
  std::optional<double> decay_exponent;  // fitted log-log slope of lobe or panel sizes

  bool converged() const { return status == Status::Converged; }
  void add_trace(const std::string& tag);
};

std::string status_name(Status s);  // converged, diverged, pv_only, inconclusive
Status status_from_name(const std::string& s);
std::string strategy_name(TailStrategy t);
TailStrategy strategy_from_name(const std::string& s);
nlohmann::json to_json(const QuadResult& r);

/// Worse of two statuses (Diverged > PrincipalValueOnly > Inconclusive > Converged).
Status combine_status(Status a, Status b);

/// Sum of results: values and errors add, traces merge, status is the worst.
QuadResult combine(const QuadResult& a, const QuadResult& b);

/// Adaptive Gauss-Kronrod (7-15) with a global priority queue on a finite
/// interval. `pieces` is the initial number of equal panels.
QuadResult gauss_kronrod(const RealFn& f, double a, double b, double tol, long long budget = kDefaultBudget,
                         int pieces = 1);

/// Tanh-sinh on [a, b] for integrands singular at one or both endpoints.
QuadResult tanh_sinh(const RealFn& f, double a, double b, double tol, long long budget = kDefaultBudget);

/// Integral of a tail model over [from, inf) in its outward coordinate.
QuadResult integrate_tail(const TailModel& t, double from, const QuadOptions& opts = {});

/// Improper integral of f over I.
QuadResult integrate(const FunctionSpec& f, const ExtInterval& I, const QuadOptions& opts = {});
QuadResult integrate(const FunctionSpec& f, const ExtInterval& I, double tol);

/// Integral of A(x) e^{i(phi(x) - s x)} over [from, inf) by lobe summation.
/// Throws NonMonotonePhase if phi' - s vanishes beyond `from`.
QuadResult oscillatory_tail(const RealFn& A, const Phase& phi, double s, double from, double tol);

/// Integral of e^{i x^{-gamma}} x^delta over (0, 1] via integration by parts;
/// Diverged when gamma + delta + 1 <= 0.
QuadResult endpoint_singularity(double gamma, double delta, double tol);

using BivariateFn = std::function<cplx(double, double)>;

/// g(x, y) together with optional one-variable slices that carry tail metadata.
struct Bivariate {
  BivariateFn eval;
  std::string label = "g";
  std::function<FunctionSpec(double x)> slice_y;  // y -> g(x, y)
  std::function<FunctionSpec(double y)> slice_x;  // x -> g(x, y)
  std::vector<double> y_breakpoints;  // where y -> int g(., y) dx may jump or fail to converge
};

struct FubiniReport {
  QuadResult I1;  // dy inside, dx outside
  QuadResult I2;  // dx inside, dy outside
  bool agree = false;
};

FubiniReport fubini_check(const FunctionSpec& f, const Bivariate& g, const ExtInterval& A, const ExtInterval& B,
                          double tol);

}  // namespace oscint
