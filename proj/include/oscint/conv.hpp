#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/function_spec.hpp"
#include "oscint/quad.hpp"

namespace oscint {

enum class ConvRoute { HKtimesBV, CompactBV, Direct };
std::string route_name(ConvRoute r);
ConvRoute route_from_name(const std::string& s);

struct ConvRequest {
  FunctionSpec f;
  FunctionSpec g;
  double x = 0.0;
  ConvRoute route = ConvRoute::Direct;
  double tol = kDefaultTol;
};

struct ConvResult {
  QuadResult result;
  std::optional<double> bound;  // a-priori |f*g(x)| bound of the route, when it has one
};

/// f*g(x) = int f(x - t) g(t) dt. HKtimesBV checks that f is integrable on R
/// and g has finite variation and attaches ||f|| (inf|g| + V g); CompactBV
/// requires g of bounded support and attaches the same bound over x - supp g.
/// Throws RouteHypothesisFailed.
ConvResult convolve(const ConvRequest& req);
/// Same route on each grid point (checks done once, points run concurrently).
std::vector<ConvResult> convolve_grid(const ConvRequest& req, const std::vector<double>& xs, int jobs = 0);

/// f*g as a function of x with tails inherited from whichever factor has
/// unbounded effective support; opaque tails when both do.
FunctionSpec convolution_spec(const FunctionSpec& f, const FunctionSpec& g, double tol);

struct ConvNormBound {
  double alexiewicz_bound = 0.0;  // ||f|| ||g||_1
  double norm_f = 0.0;
  double l1_g = 0.0;
  std::optional<double> empirical;  // ||f*g|| over [-R, R]
  double radius = 0.0;
};

ConvNormBound conv_norm_bound(const FunctionSpec& f, const FunctionSpec& g, bool empirical = false,
                              double radius = 0.0, int points = 161, double tol = 1e-8);

struct IdentityPoint {
  double at = 0.0;
  cplx lhs{};
  cplx rhs{};
  double deviation = 0.0;
  Status status = Status::Converged;
};

struct IdentityReport {
  std::vector<IdentityPoint> points;
  double max_deviation = 0.0;
  bool all_converged = true;
  nlohmann::json to_json() const;
};

/// (f*g)^(s) against f^(s) g^(s).
IdentityReport conv_transform_check(const FunctionSpec& f, const FunctionSpec& g, const std::vector<double>& s_grid,
                                    double tol = 1e-7);
/// f*g(x) against the inverse transform of f^ g^.
IdentityReport conv_inverse_check(const FunctionSpec& f, const FunctionSpec& g, const std::vector<double>& x_grid,
                                  double tol = 1e-6);
/// (f*g)*h(x) against f*(g*h)(x); agreement is judged at 100 tol.
IdentityPoint associativity_check(const FunctionSpec& f, const FunctionSpec& g, const FunctionSpec& h, double x,
                                  double tol = 1e-6);

}  // namespace oscint
