#include "oscint/invert.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "oscint/bvnorm.hpp"
#include "oscint/corpus.hpp"
#include "oscint/function_json.hpp"

namespace oscint {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

bool KernelValidation::all() const {
  return theta_L1_AC && theta0_is_1 && sTheta_L1 && thetahat_L1_BV && thetahat_integral_2pi && sThetahatPrime_L1 &&
         tail_variation_O_1_over_x;
}

std::vector<std::string> KernelValidation::failed() const {
  std::vector<std::string> v;
  if (!theta_L1_AC) v.push_back("theta_L1_AC");
  if (!theta0_is_1) v.push_back("theta0_is_1");
  if (!sTheta_L1) v.push_back("sTheta_L1");
  if (!thetahat_L1_BV) v.push_back("thetahat_L1_BV");
  if (!thetahat_integral_2pi) v.push_back("thetahat_integral_2pi");
  if (!sThetahatPrime_L1) v.push_back("sThetahatPrime_L1");
  if (!tail_variation_O_1_over_x) v.push_back("tail_variation_O_1_over_x");
  return v;
}

nlohmann::json KernelValidation::to_json() const {
  return {{"theta_L1_AC", theta_L1_AC},
          {"theta0_is_1", theta0_is_1},
          {"sTheta_L1", sTheta_L1},
          {"thetahat_L1_BV", thetahat_L1_BV},
          {"thetahat_integral_2pi", thetahat_integral_2pi},
          {"sThetahatPrime_L1", sThetahatPrime_L1},
          {"tail_variation_O_1_over_x", tail_variation_O_1_over_x},
          {"thetahat_integral", thetahat_integral},
          {"dyadic_sums", dyadic_sums},
          {"tail_variations", tail_variations},
          {"tail_slope", tail_slope},
          {"all", all()}};
}

// ---------------------------------------------------------------------------

KernelValidation validate_kernel(const Kernel& k, double tol) {
  KernelValidation v;
  const auto R = ExtInterval::real_line();
  QuadOptions o;
  o.tol = tol;
  o.budget = 2'000'000;
  // finiteness only; the tolerance just has to be reachable
  QuadOptions l1;
  l1.tol = 1e-6;

  // absolutely continuous: no declared jumps or poles
  v.theta_L1_AC = k.theta.singular_points().empty() && integrate(abs_value(k.theta), R, l1).converged();
  v.theta0_is_1 = std::abs(k.theta(0.0) - 1.0) <= 1e-15;
  v.sTheta_L1 = integrate(abs_value(times_x(k.theta)), R, l1).converged();

  bool hat_l1 = integrate(abs_value(k.theta_hat), R, l1).converged();
  bool hat_bv = false;
  try {
    hat_bv = std::isfinite(variation(k.theta_hat, R).variation);
  } catch (const UnboundedVariation&) {
  }
  v.thetahat_L1_BV = hat_l1 && hat_bv;

  auto I = integrate(k.theta_hat, R, o);
  v.thetahat_integral = std::real(I.value);
  v.thetahat_integral_2pi = I.converged() && std::abs(I.value - 2.0 * kPi) <= 10.0 * tol;

  // dyadic pieces of |s Theta^'(s)| on both sides
  const FunctionSpec& th = k.theta_hat;
  RealFn dth = [th](double s) -> cplx {
    if (th.has_derivative()) return th.derivative(s);
    double h = 1e-5 * std::max(1.0, std::abs(s));
    return (th(s + h) - th(s - h)) / (2.0 * h);
  };
  RealFn w = [dth](double s) -> cplx { return std::abs(s * dth(s)); };
  for (int j = 0; j <= 10; ++j) {
    double a = std::ldexp(1.0, j), b = 2.0 * a;
    int pieces = std::max(4, static_cast<int>(8.0 * a));
    double d = std::real(gauss_kronrod(w, a, b, 1e-12, 2'000'000, pieces).value) +
               std::real(gauss_kronrod(w, -b, -a, 1e-12, 2'000'000, pieces).value);
    v.dyadic_sums.push_back(d);
  }
  bool decay = true;
  const auto& D = v.dyadic_sums;
  for (std::size_t j = D.size() - 3; j < D.size(); ++j) {
    bool negligible = D[j] <= 1e-14 * std::max(D[0], 1e-300);
    decay = decay && (negligible || D[j] < 0.9 * D[j - 1]);
  }
  v.sThetahatPrime_L1 = decay;

  // V over [x, inf) of Theta^ against 1/x
  std::vector<double> lx, lv;
  bool finite = true;
  for (int j = 1; j <= 10; ++j) {
    double x = std::ldexp(1.0, j), V = kInf;
    try {
      V = variation(th, {x, kInf}).variation;
    } catch (const UnboundedVariation&) {
    }
    v.tail_variations.push_back(V);
    if (!std::isfinite(V)) finite = false;
    if (V > 1e-300) {
      lx.push_back(std::log(x));
      lv.push_back(std::log(V));
    }
  }
  if (finite && lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += lv[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (lv[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    v.tail_slope = sxy / sxx;
    v.tail_variation_O_1_over_x = v.tail_slope <= -0.9;
  } else {
    v.tail_slope = -kInf;
    v.tail_variation_O_1_over_x = finite;
  }
  return v;
}

Kernel validated(Kernel k, double tol) {
  k.validation = validate_kernel(k, tol);
  k.validated = true;
  return k;
}

namespace {

Kernel raw_builtin(const std::string& name) {
  if (name == "gauss") return {"gauss", gauss_envelope(), gauss_envelope(std::sqrt(kPi), 0.0, 2.0), false, {}};
  if (name == "abel") return {"abel", exp_abs(1.0), lorentzian(1.0), false, {}};
  if (name == "cesaro") return {"cesaro", triangle_hat(1.0), fejer(1.0), false, {}};
  throw UnknownEntry("no builtin kernel named '" + name + "'");
}

}  // namespace

std::vector<std::string> builtin_kernel_names() { return {"abel", "cesaro", "gauss"}; }

Kernel builtin_kernel(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Kernel> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
  }
  Kernel k = validated(raw_builtin(name));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(name, k);
  return k;
}

Kernel kernel_from_json(const nlohmann::json& j) {
  if (j.is_string()) return builtin_kernel(j.get<std::string>());
  if (!j.is_object() || !j.contains("theta") || !j.contains("theta_hat")) {
    throw PreconditionError("kernel document needs 'theta' and 'theta_hat'");
  }
  Kernel k;
  k.name = j.value("name", std::string("custom"));
  k.theta = function_from_json(j.at("theta"));
  k.theta_hat = function_from_json(j.at("theta_hat"));
  return k;
}

// ---------------------------------------------------------------------------

NonTangentialPath NonTangentialPath::make(double x0, double aperture, std::vector<double> y, std::vector<double> x) {
  if (y.size() != x.size() || y.empty()) throw PreconditionError("path: y and x schedules must match and be non-empty");
  if (!(aperture >= 0.0)) throw PreconditionError("path: aperture must be non-negative");
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (!(y[k] > 0.0) || (k > 0 && !(y[k] < y[k - 1]))) {
      throw PreconditionError("path: y_k must be positive and strictly decreasing");
    }
    if (std::abs(x[k] - x0) > aperture * y[k] * (1.0 + 1e-12)) {
      throw PreconditionError("path: aperture violation at step " + std::to_string(k + 1) + " (|x_k - x0|/y_k = " +
                              std::to_string(std::abs(x[k] - x0) / y[k]) + " > C)");
    }
  }
  return {x0, aperture, std::move(y), std::move(x)};
}

NonTangentialPath NonTangentialPath::standard(double x0, double aperture, int steps) {
  std::vector<double> y, x;
  for (int k = 1; k <= steps; ++k) {
    y.push_back(std::ldexp(1.0, -k));
    x.push_back(x0 + aperture * y.back());
  }
  return make(x0, aperture, std::move(y), std::move(x));
}

nlohmann::json InversionResult::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& s : trace) {
    tr.push_back({{"k", s.k},
                  {"y", s.y},
                  {"x", s.x},
                  {"value", {s.value.real(), s.value.imag()}},
                  {"extrapolated", {s.extrapolated.real(), s.extrapolated.imag()}},
                  {"mass", s.mass},
                  {"status", status_name(s.status)}});
  }
  return {{"limit", {limit.real(), limit.imag()}},
          {"status", status_name(status)},
          {"max_mass_error", max_mass_error},
          {"note", note},
          {"trace", tr}};
}

namespace {

void require_valid(const Kernel& k) {
  KernelValidation v = k.validated ? k.validation : validate_kernel(k);
  if (!v.all()) {
    std::string f;
    for (const auto& c : v.failed()) f += (f.empty() ? "" : ", ") + c;
    throw KernelInvalid("kernel '" + k.name + "' fails Definition: " + f);
  }
}

InversionResult extrapolate(std::vector<InversionStep> steps, double tol) {
  InversionResult r;
  r.note = "Richardson 2 I_k - I_{k-1}, assumes first-order convergence in y";
  Status st = Status::Converged;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    steps[k].extrapolated = k == 0 ? steps[k].value : 2.0 * steps[k].value - steps[k - 1].value;
    st = combine_status(st, steps[k].status);
    r.max_mass_error = std::max(r.max_mass_error, std::abs(steps[k].mass - 1.0));
  }
  const std::size_t n = steps.size();
  r.limit = steps.back().extrapolated;
  if (n >= 3) {
    double d1 = std::abs(steps[n - 1].extrapolated - steps[n - 2].extrapolated);
    double d2 = std::abs(steps[n - 2].extrapolated - steps[n - 3].extrapolated);
    double scale = std::max(1.0, std::abs(r.limit));
    if (st == Status::Converged && !(std::max(d1, d2) <= std::max(tol, 1e-3 * scale))) st = Status::Inconclusive;
  }
  r.status = st;
  r.trace = std::move(steps);
  return r;
}

}  // namespace

InversionResult invert_at(const FunctionSpec& f, const Kernel& k, const NonTangentialPath& path, double tol) {
  require_valid(k);
  const int n = static_cast<int>(path.y.size());
  std::vector<InversionStep> steps(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const double y = path.y[i], x = path.x[i];
    auto K = scale(translate(dilate(k.theta_hat, y), -x), 1.0 / (2.0 * kPi * y));
    std::vector<double> bp;
    for (double m : {1.0, 4.0, 16.0, 64.0}) {
      bp.push_back(x - m * y);
      bp.push_back(x + m * y);
    }
    K = with_breakpoints(K, bp);
    QuadOptions o;
    o.tol = tol;
    auto mass = integrate(K, ExtInterval::real_line(), o);
    auto v = integrate(multiply(f, K), ExtInterval::real_line(), o);
    InversionStep s;
    s.k = i + 1;
    s.y = y;
    s.x = x;
    s.value = v.value;
    s.mass = std::real(mass.value);
    s.status = combine_status(v.status, mass.status);
    steps[i] = s;
  }
  return extrapolate(std::move(steps), tol);
}

InversionResult invert_spectral(const FunctionSpec& fhat, const Kernel& k, const NonTangentialPath& path, double tol) {
  require_valid(k);
  const int n = static_cast<int>(path.y.size());
  std::vector<InversionStep> steps(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const double y = path.y[i], x = path.x[i];
    auto g = modulate(multiply(dilate(k.theta, 1.0 / y), fhat), x);
    QuadOptions o;
    o.tol = tol * 2.0 * kPi;
    auto v = integrate(g, ExtInterval::real_line(), o);
    InversionStep s;
    s.k = i + 1;
    s.y = y;
    s.x = x;
    s.value = v.value / (2.0 * kPi);
    s.mass = 1.0;
    s.status = v.status;
    steps[i] = s;
  }
  return extrapolate(std::move(steps), tol);
}

// ---------------------------------------------------------------------------

UniquenessReport uniqueness_probe(const FunctionSpec& f, const std::vector<double>& s_grid,
                                  const std::vector<double>& x0, double tol) {
  UniquenessReport r;
  r.x0 = x0;
  auto t = sweep(f, s_grid, Direction::Forward, tol / 10.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.statuses[i] == Status::Converged) r.max_fhat = std::max(r.max_fhat, std::abs(t.values[i]));
  }
  r.applicable = r.max_fhat < tol;
  if (!r.applicable) return r;
  auto k = builtin_kernel("gauss");
  for (double x : x0) {
    auto inv = invert_at(f, k, NonTangentialPath::standard(x, 1.0, 10), tol / 10.0);
    r.max_recovered = std::max(r.max_recovered, std::abs(inv.limit));
  }
  return r;
}

cplx stationary_phase_asymptotic(double alpha, double nu, double s) {
  if (!(nu > 1.0)) throw DomainError("stationary phase: nu must exceed 1");
  if (!(s > 0.0)) throw DomainError("stationary phase: s must be positive");
  const double x0 = std::pow(nu, -1.0 / (nu - 1.0));
  const double phi = std::pow(x0, nu) - x0;
  const double amp = std::sqrt(2.0 * kPi / (nu * (nu - 1.0))) * std::pow(x0, alpha - (nu - 2.0) / 2.0) *
                     std::pow(s, (2.0 * alpha + 2.0 - nu) / (2.0 * (nu - 1.0)));
  return amp * std::polar(1.0, kPi / 4.0 + phi * std::pow(s, nu / (nu - 1.0)));
}

NonreversibleReport nonreversible_fixture(double alpha, double nu, std::vector<double> s, double tol) {
  if (!(nu > 2.0) || !(alpha >= nu / 2.0) || !(alpha < nu - 1.0)) {
    throw PreconditionError("nonreversible fixture needs nu > 2 and nu/2 <= alpha < nu - 1");
  }
  NonreversibleReport r;
  r.alpha = alpha;
  r.nu = nu;
  r.s = s;
  auto f = chirp(alpha, nu, true);
  r.forward_converged = true;
  for (double si : s) {
    r.forward.push_back(transform(f, si, tol));
    r.forward_converged = r.forward_converged && r.forward.back().converged();
  }
  r.growth = (2.0 * alpha + 2.0 - nu) / (2.0 * (nu - 1.0));
  r.phase_exponent = nu / (nu - 1.0);
  // f^ for large s > 0 behaves like the stationary-phase term; for s -> -inf
  // the endpoint term decays like |s|^{-(alpha+1)}
  const double x0 = std::pow(nu, -1.0 / (nu - 1.0));
  const double phi = std::pow(x0, nu) - x0;
  const double g = r.growth, gam = r.phase_exponent;
  UserCallableOptions o;
  o.description = "stationary-phase transform";
  o.real_valued = false;
  TailModel rt;
  rt.from = 1.0;
  rt.components.push_back({[g](double u) -> cplx { return std::pow(u, g); }, Phase{phi, gam, 0.0, 0.0, kPi / 4.0}});
  rt.bounded = g <= 0.0;
  rt.decay_exponent = g;
  TailModel lt;
  lt.from = 1.0;
  lt.components.push_back({[alpha](double u) -> cplx { return std::pow(u, -(alpha + 1.0)); }, Phase{}});
  lt.abs_integrable = lt.bounded = lt.bv = lt.limit_zero = true;
  lt.decay_exponent = -(alpha + 1.0);
  o.right = rt;
  o.left = lt;
  auto fh = user_callable(
      [alpha, nu](double si) -> cplx {
        return si >= 1.0 ? stationary_phase_asymptotic(alpha, nu, si) : cplx{};
      },
      o);
  r.inverse = classify_existence(fh, 0.5, Direction::Inverse);
  r.inverse_tail = oscillatory_tail([g](double u) -> cplx { return std::pow(u, g); }, Phase{phi, gam, 0.0, 0.0, 0.0},
                                    -0.5, 1.0, tol);
  r.confirmed = r.forward_converged && r.inverse.verdict == Verdict::DivergesProven;
  return r;
}

}  // namespace oscint
