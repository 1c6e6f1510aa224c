#include "oscint/conv.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "oscint/bvnorm.hpp"
#include "oscint/corpus.hpp"
#include "oscint/fourier.hpp"

namespace oscint {

std::string route_name(ConvRoute r) {
  switch (r) {
    case ConvRoute::HKtimesBV: return "hk_bv";
    case ConvRoute::CompactBV: return "compact_bv";
    case ConvRoute::Direct: return "direct";
  }
  return "direct";
}

ConvRoute route_from_name(const std::string& s) {
  if (s == "hk_bv" || s == "HKtimesBV") return ConvRoute::HKtimesBV;
  if (s == "compact_bv" || s == "CompactBV") return ConvRoute::CompactBV;
  if (s == "direct" || s == "Direct") return ConvRoute::Direct;
  throw PreconditionError("unknown convolution route '" + s + "'");
}

namespace {

// t -> f(x - t) g(t)
FunctionSpec integrand(const FunctionSpec& f, const FunctionSpec& g, double x) {
  return multiply(translate(reflect(f), -x), g);
}

QuadResult raw_convolve(const FunctionSpec& f, const FunctionSpec& g, double x, double tol) {
  auto h = integrand(f, g, x);
  QuadOptions o;
  o.tol = tol;
  auto r = integrate(h, h.support(), o);
  r.add_trace("Convolution");
  return r;
}

// int_lo^hi h over pieces split at the given points; tanh-sinh next to unbounded ones.
cplx piecewise_integral(const RealFn& h, const FunctionSpec& g, double lo, double hi, double tol) {
  std::vector<double> cuts = {lo};
  for (double p : g.panel_points()) {
    if (p > lo && p < hi) cuts.push_back(p);
  }
  cuts.push_back(hi);
  auto unbounded = [&g](double x) {
    for (const auto& s : g.singular_points()) {
      if (s.x == x && s.type == SingularType::Unbounded) return true;
    }
    return false;
  };
  cplx v = 0.0;
  const double t = tol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (unbounded(cuts[i]) || unbounded(cuts[i + 1])) {
      v += tanh_sinh(h, cuts[i], cuts[i + 1], t, 200000).value;
    } else {
      v += gauss_kronrod(h, cuts[i], cuts[i + 1], t, 200000, 4).value;
    }
  }
  return v;
}

struct Hypotheses {
  std::optional<double> bound_factor;  // inf|g| + V g
  double norm_f = 0.0;
  ExtInterval gsupp;
};

Hypotheses check_route(const ConvRequest& req) {
  Hypotheses h;
  h.gsupp = req.g.support();
  if (req.route == ConvRoute::Direct) return h;
  if (req.route == ConvRoute::CompactBV && !req.g.support().finite()) {
    throw RouteHypothesisFailed("CompactBV: g must have bounded support");
  }
  BVProfile p;
  try {
    p = variation(req.g, req.route == ConvRoute::CompactBV ? req.g.support() : ExtInterval::real_line());
  } catch (const UnboundedVariation&) {
    throw RouteHypothesisFailed("g is not of bounded variation");
  }
  if (!std::isfinite(p.variation)) throw RouteHypothesisFailed("g is not of bounded variation");
  h.bound_factor = p.inf_abs + p.variation;
  if (req.route == ConvRoute::HKtimesBV) {
    auto a = alexiewicz(req.f, ExtInterval::real_line(), req.tol / 10.0);
    if (a.status != Status::Converged) throw RouteHypothesisFailed("HKtimesBV: f is not integrable on R");
    h.norm_f = a.norm;
  }
  return h;
}

ConvResult run(const ConvRequest& req, const Hypotheses& h, double x) {
  ConvResult out;
  out.result = raw_convolve(req.f, req.g, x, req.tol);
  out.result.add_trace("Route:" + route_name(req.route));
  if (req.route == ConvRoute::HKtimesBV) {
    out.bound = h.norm_f * *h.bound_factor;
  } else if (req.route == ConvRoute::CompactBV) {
    // ||f|| over x - supp g
    double n = alexiewicz_norm(req.f, {x - h.gsupp.hi, x - h.gsupp.lo}, req.tol / 10.0);
    if (std::isfinite(n)) out.bound = n * *h.bound_factor;
  }
  return out;
}

}  // namespace

ConvResult convolve(const ConvRequest& req) {
  if (!(req.tol > 0.0)) throw PreconditionError("convolve: tol must be positive");
  return run(req, check_route(req), req.x);
}

std::vector<ConvResult> convolve_grid(const ConvRequest& req, const std::vector<double>& xs, int jobs) {
  if (!(req.tol > 0.0)) throw PreconditionError("convolve: tol must be positive");
  auto h = check_route(req);
  std::vector<ConvResult> out(xs.size());
  const int n = static_cast<int>(xs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) out[i] = run(req, h, xs[i]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Tail of f*g on one side when g is negligible beyond radius R.
TailModel smoothed_tail(const TailModel& ft, const FunctionSpec& g, double R, int side, double tol) {
  if (ft.vanishes()) {
    return TailModel::zero(ft.from + R);
  }
  TailModel t = ft;
  t.from = ft.from + R;
  t.components.clear();
  for (const auto& c : ft.components) {
    RealFn amp = c.amp;
    Phase ph = c.phase;
    // right: f(u - t) g(t); left: f(-(u + t)) g(t)
    RealFn a = [amp, ph, g, R, side, tol](double u) -> cplx {
      double base = ph.value(u);
      RealFn h = [&](double t) -> cplx {
        double v = u - side * t;
        return amp(v) * std::polar(1.0, ph.value(v) - base) * g(t);
      };
      return piecewise_integral(h, g, -R, R, tol);
    };
    t.components.push_back({a, ph});
  }
  return t;
}

TailModel rapid_opaque(const FunctionSpec& fg, int side, double from) {
  TailModel t;
  t.from = from;
  t.components.push_back({[fg, side](double u) { return fg(side * u); }, Phase{}});
  t.rapid = t.abs_integrable = t.bounded = t.bv = t.limit_zero = true;
  return t;
}

}  // namespace

FunctionSpec convolution_spec(const FunctionSpec& f, const FunctionSpec& g, double tol) {
  const double inner = tol / 100.0;
  const bool gf = std::isfinite(g.effective_radius()), ff = std::isfinite(f.effective_radius());
  UserCallableOptions o;
  o.description = "(" + f.label() + ")*(" + g.label() + ")";
  o.real_valued = f.real_valued() && g.real_valued();
  // kinks of f*g sit at sums of breakpoints; keep the common ones
  for (double a : f.panel_points()) {
    for (double b : g.panel_points()) o.breakpoints.push_back(a + b);
  }
  if (f.support().finite() && g.support().finite()) {
    o.support = {f.support().lo + g.support().lo, f.support().hi + g.support().hi};
  }
  if (ff && gf) {
    o.effective_radius = f.effective_radius() + g.effective_radius();
  }
  RealFn eval = [f, g, inner](double x) -> cplx { return raw_convolve(f, g, x, inner).value; };
  if (!o.support.finite()) {
    if (ff && gf) {
      FunctionSpec tmp = user_callable(eval, o);
      o.right = rapid_opaque(tmp, 1, o.effective_radius);
      o.left = rapid_opaque(tmp, -1, o.effective_radius);
    } else if (gf) {
      o.right = smoothed_tail(f.right_tail(), g, g.effective_radius(), 1, inner);
      o.left = smoothed_tail(f.left_tail(), g, g.effective_radius(), -1, inner);
    } else if (ff) {
      o.right = smoothed_tail(g.right_tail(), f, f.effective_radius(), 1, inner);
      o.left = smoothed_tail(g.left_tail(), f, f.effective_radius(), -1, inner);
    }
  }
  return user_callable(eval, o);
}

// ---------------------------------------------------------------------------

ConvNormBound conv_norm_bound(const FunctionSpec& f, const FunctionSpec& g, bool empirical, double radius, int points,
                              double tol) {
  ConvNormBound r;
  r.norm_f = alexiewicz_norm(f, ExtInterval::real_line(), tol);
  auto l1 = integrate(abs_value(g), ExtInterval::real_line(), tol);
  r.l1_g = l1.converged() ? std::real(l1.value) : kInf;
  r.alexiewicz_bound = r.l1_g == 0.0 ? 0.0 : r.norm_f * r.l1_g;
  if (!empirical) return r;
  if (radius <= 0.0) {
    double rf = std::isfinite(f.effective_radius()) ? f.effective_radius() : 20.0;
    double rg = std::isfinite(g.effective_radius()) ? g.effective_radius() : 20.0;
    radius = std::min(rf + rg, 40.0);
  }
  r.radius = radius;
  points = std::max(points, 3);
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = -radius + 2.0 * radius * i / (points - 1);
  // panel integrals of f*g, adaptive so kinks at breakpoint sums do not inflate the estimate
  auto fg = convolution_spec(f, g, tol);
  std::vector<cplx> v(points, 0.0);
  bool ok = true;
#pragma omp parallel for schedule(dynamic) reduction(&& : ok)
  for (int i = 1; i < points; ++i) {
    auto q = integrate(fg, ExtInterval{xs[i - 1], xs[i]}, tol);
    v[i] = q.value;
    ok = ok && q.converged();
  }
  if (!ok) return r;
  // convex hull diameter of the antiderivative samples
  std::vector<cplx> F(points, 0.0);
  for (int i = 1; i < points; ++i) F[i] = F[i - 1] + v[i];
  double d = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = i + 1; j < points; ++j) d = std::max(d, std::abs(F[i] - F[j]));
  }
  r.empirical = d;
  return r;
}

// ---------------------------------------------------------------------------

nlohmann::json IdentityReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) {
    pts.push_back({{"at", p.at},
                   {"lhs", {p.lhs.real(), p.lhs.imag()}},
                   {"rhs", {p.rhs.real(), p.rhs.imag()}},
                   {"deviation", p.deviation},
                   {"status", status_name(p.status)}});
  }
  return {{"points", pts}, {"max_deviation", max_deviation}, {"all_converged", all_converged}};
}

namespace {

IdentityReport finish(std::vector<IdentityPoint> pts) {
  IdentityReport r;
  for (const auto& p : pts) {
    if (p.status == Status::Converged) {
      r.max_deviation = std::max(r.max_deviation, p.deviation);
    } else {
      r.all_converged = false;
    }
  }
  r.points = std::move(pts);
  return r;
}

}  // namespace

IdentityReport conv_transform_check(const FunctionSpec& f, const FunctionSpec& g, const std::vector<double>& s_grid,
                                    double tol) {
  auto fg = convolution_spec(f, g, tol);
  std::vector<IdentityPoint> pts(s_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    auto l = transform(fg, s, tol);
    auto a = transform(f, s, tol / 10.0);
    auto b = transform(g, s, tol / 10.0);
    IdentityPoint p;
    p.at = s;
    p.lhs = l.value;
    p.rhs = a.value * b.value;
    p.status = combine_status(l.status, combine_status(a.status, b.status));
    p.deviation = std::abs(p.lhs - p.rhs);
    pts[i] = p;
  }
  return finish(std::move(pts));
}

IdentityReport conv_inverse_check(const FunctionSpec& f, const FunctionSpec& g, const std::vector<double>& x_grid,
                                  double tol) {
  const double inner = tol / 100.0;
  auto fails = std::make_shared<std::atomic<long>>(0);
  auto fhat = transformed_spec(f, inner, Direction::Forward, {0.0}, fails);
  auto ghat = known_transform(g).value_or(transformed_spec(g, inner));
  auto prod = multiply(fhat, ghat);
  std::vector<IdentityPoint> pts(x_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    auto l = raw_convolve(f, g, x, tol);
    auto r = inverse_transform(prod, x, tol);
    IdentityPoint p;
    p.at = x;
    p.lhs = l.value;
    p.rhs = r.value;
    p.status = combine_status(l.status, r.status);
    p.deviation = std::abs(p.lhs - p.rhs);
    pts[i] = p;
  }
  return finish(std::move(pts));
}

IdentityPoint associativity_check(const FunctionSpec& f, const FunctionSpec& g, const FunctionSpec& h, double x,
                                  double tol) {
  IdentityPoint p;
  p.at = x;
  auto fg = convolution_spec(f, g, tol);
  auto gh = convolution_spec(g, h, tol);
  auto l = raw_convolve(fg, h, x, tol);
  auto r = raw_convolve(f, gh, x, tol);
  p.lhs = l.value;
  p.rhs = r.value;
  p.status = combine_status(l.status, r.status);
  p.deviation = std::abs(p.lhs - p.rhs);
  return p;
}

}  // namespace oscint
