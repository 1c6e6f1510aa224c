#include "oscint/corpus.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "oscint/function_json.hpp"

namespace oscint {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

TailModel const_tail(RealFn amp, double e, double from = 1.0) {
  TailModel t;
  t.from = from;
  t.components.push_back({std::move(amp), Phase{}});
  t.bounded = t.bv = t.limit_zero = true;
  t.abs_integrable = e < -1.0;
  t.decay_exponent = e;
  return t;
}

TailModel rapid(RealFn amp, double from = 1.0) {
  TailModel t = const_tail(std::move(amp), -kInf, from);
  t.rapid = t.abs_integrable = true;
  t.decay_exponent.reset();
  return t;
}

// sqrt(pi) e^{i(pi - s^2)/4}
FunctionSpec ex1b_hat() {
  FunctionSpec::Data d;
  d.label = "sqrt(pi) e^{i(pi-s^2)/4}";
  d.eval = [](double s) -> cplx { return std::sqrt(kPi) * std::polar(1.0, (kPi - s * s) / 4.0); };
  d.derivative = [](double s) -> cplx { return -0.5 * kI * s * std::sqrt(kPi) * std::polar(1.0, (kPi - s * s) / 4.0); };
  d.real_valued = false;
  d.parity = Parity::Even;
  Phase ph{-0.25, 2.0, 0.0, 0.0, kPi / 4.0};
  TailModel t;
  t.components.push_back({[](double) -> cplx { return std::sqrt(kPi); }, ph});
  t.bounded = true;
  t.decay_exponent = 0.0;
  d.right = d.left = t;
  return FunctionSpec(std::move(d));
}

// i log|(s-a)/(s+a)|
FunctionSpec ex1c_hat(double a) {
  FunctionSpec::Data d;
  d.label = "i log|(s-a)/(s+a)|";
  d.eval = [a](double s) -> cplx { return kI * std::log(std::abs((s - a) / (s + a))); };
  d.derivative = [a](double s) -> cplx { return kI * (1.0 / (s - a) - 1.0 / (s + a)); };
  d.real_valued = false;
  d.parity = Parity::Odd;
  d.singular = {{-std::abs(a), SingularType::Unbounded, 0.0}, {std::abs(a), SingularType::Unbounded, 0.0}};
  double from = 2.0 * std::abs(a) + 1.0;
  auto amp = [a](double sign) {
    return [a, sign](double u) -> cplx { return kI * std::log(std::abs((sign * u - a) / (sign * u + a))); };
  };
  d.right = const_tail(amp(1.0), -1.0, from);
  d.left = const_tail(amp(-1.0), -1.0, from);
  return FunctionSpec(std::move(d));
}

// -i pi sgn(s) e^{-|s|}
FunctionSpec ex1d_hat() {
  FunctionSpec::Data d;
  d.label = "-i pi sgn(s) e^{-|s|}";
  d.eval = [](double s) -> cplx { return -kI * kPi * sgn(s) * std::exp(-std::abs(s)); };
  d.derivative = [](double s) -> cplx { return kI * kPi * std::exp(-std::abs(s)); };
  d.real_valued = false;
  d.parity = Parity::Odd;
  d.breakpoints = {0.0};
  d.right = rapid([](double u) -> cplx { return -kI * kPi * std::exp(-u); });
  d.left = rapid([](double u) -> cplx { return kI * kPi * std::exp(-u); });
  d.effective_radius = 40.0;
  return FunctionSpec(std::move(d));
}

// sqrt(2 pi) sgn(s) |s|^{-1/2}, as printed
FunctionSpec ex1a_hat() {
  FunctionSpec::Data d;
  d.label = "sqrt(2pi) sgn(s)|s|^{-1/2}";
  d.eval = [](double s) -> cplx { return s == 0.0 ? 0.0 : std::sqrt(2.0 * kPi) * sgn(s) / std::sqrt(std::abs(s)); };
  d.derivative = [](double s) -> cplx { return s == 0.0 ? 0.0 : -0.5 * std::sqrt(2.0 * kPi) * std::pow(std::abs(s), -1.5); };
  d.parity = Parity::Odd;
  d.singular = {{0.0, SingularType::Unbounded, 0.0}};
  d.right = const_tail([](double u) -> cplx { return std::sqrt(2.0 * kPi / u); }, -0.5);
  d.left = const_tail([](double u) -> cplx { return -std::sqrt(2.0 * kPi / u); }, -0.5);
  return FunctionSpec(std::move(d));
}

FunctionSpec lacunary_hat(const CoeffSeq& c) {
  FunctionSpec::Data d;
  d.label = "i sum a_n log|(s-b_n)/(s+b_n)|";
  d.eval = [c](double s) -> cplx {
    auto r = lacunary_transform(c, s);
    return r.verdict == Verdict::ExistsProven ? r.value : cplx{};
  };
  d.real_valued = false;
  d.parity = Parity::Odd;
  for (std::size_t n = 0; n < c.a.size(); ++n) {
    if (c.a[n] * c.b[n] != 0.0) {
      d.singular.push_back({-std::abs(c.b[n]), SingularType::Unbounded, 0.0});
      d.singular.push_back({std::abs(c.b[n]), SingularType::Unbounded, 0.0});
    }
  }
  std::sort(d.singular.begin(), d.singular.end(), [](auto& x, auto& y) { return x.x < y.x; });
  d.right = TailModel{};
  d.left = TailModel{};
  double B = 0.0;
  for (double b : c.b) B = std::max(B, std::abs(b));
  auto ev = d.eval;
  d.right = const_tail([ev](double u) { return ev(u); }, -1.0, 2.0 * B + 1.0);
  d.left = const_tail([ev](double u) { return ev(-u); }, -1.0, 2.0 * B + 1.0);
  return FunctionSpec(std::move(d));
}

CoeffSeq geometric_lacunary(int N) {
  // a_n = 2^{-n}, b_n = n
  CoeffSeq c;
  for (int n = 1; n <= N; ++n) {
    c.a.push_back(std::ldexp(1.0, -n));
    c.b.push_back(n);
  }
  c.a_tail_sum = std::ldexp(1.0, -N);
  c.ab_tail_sum = std::ldexp(1.0, -(N - 1)) * (0.5 * N + 1.0);
  return c;
}

CoeffSeq limit_lacunary(int N) {
  // a_n = 2^{-n}, b_n = 1 + 2^{-n}; accumulates at 1
  CoeffSeq c;
  for (int n = 1; n <= N; ++n) {
    c.a.push_back(std::ldexp(1.0, -n));
    c.b.push_back(1.0 + std::ldexp(1.0, -n));
  }
  c.a_tail_sum = std::ldexp(1.0, -N);
  c.ab_tail_sum = 2.0 * std::ldexp(1.0, -N);
  c.limit_points = {1.0};
  return c;
}

std::map<std::string, CorpusEntry> build() {
  std::map<std::string, CorpusEntry> m;
  auto put = [&m](CorpusEntry e) { m.emplace(e.name, std::move(e)); };

  put({"ex1a", power_signed(-0.5), ex1a_hat(), {0.0}, "s = 0",
       "sgn(x)|x|^{-1/2}. Closed form stored as printed; the oracle gives "
       "-i sqrt(2pi) sgn(s)|s|^{-1/2} (an odd real function has a purely imaginary transform)."});
  put({"ex1b", chirp(0.0, 2.0), ex1b_hat(), {}, "", "e^{ix^2}; transform exists on R."});
  put({"ex1c", sin_over_abs(1.0), ex1c_hat(1.0), {-1.0, 1.0}, "s = +-a",
       "sin(ax)/|x| with a = 1. The log is singular at both s = a and s = -a; both are marked."});
  put({"ex1d", rational_odd(), ex1d_hat(), {0.0}, "s = 0",
       "x/(x^2+1); at s = 0 only the principal value (0) exists."});
  {
    CoeffSeq c = geometric_lacunary(20);
    std::vector<double> div;
    for (double b : c.b) {
      div.push_back(-b);
      div.push_back(b);
    }
    std::sort(div.begin(), div.end());
    put({"ex1f", lacunary_series(c, c.a.size()), lacunary_hat(c), div, "s = +-b_n",
         "sum 2^{-n} sin(n x)/|x|, n <= 20; diverges at every +-n."});
  }
  {
    CoeffSeq c;
    c.a = {1.0, 0.5};
    c.b = {1.0, 2.0};
    put({"ex1f-two-term", lacunary_series(c, 2), lacunary_hat(c), {-2.0, -1.0, 1.0, 2.0}, "s = +-b_n",
         "sin(x)/|x| + sin(2x)/(2|x|)."});
  }
  {
    CoeffSeq c = limit_lacunary(40);
    std::vector<double> div;
    for (double b : c.b) {
      div.push_back(-b);
      div.push_back(b);
    }
    std::sort(div.begin(), div.end());
    put({"ex1f-limit", lacunary_series(c, c.a.size()), lacunary_hat(c), div, "s = +-b_n; limit points +-1",
         "sum 2^{-n} sin((1+2^{-n})x)/|x|; the log series converges at the limit points +-1."});
  }
  put({"ex2", chirp(1.5, 3.0, true), std::nullopt, {}, "",
       "x^{3/2} e^{ix^3} on x > 0; f^ exists on R, its inverse integral diverges everywhere. "
       "Only the stationary-phase asymptotic is known."});
  put({"gauss", gauss_envelope(), known_transform(gauss_envelope()), {}, "", "e^{-x^2}; sqrt(pi) e^{-s^2/4}."});
  put({"exp_abs", exp_abs(), lorentzian(1.0), {}, "", "e^{-|x|}; 2/(1+s^2)."});
  put({"triangle", triangle_hat(), fejer(1.0), {}, "", "(1-|x|)_+; [sin(s/2)/(s/2)]^2."});
  {
    kind::SinOverAbs g{1.0, 0.5, kPi / 4.0, std::sqrt(2.0), false};
    put({"nowhere-conv-pair", sin_over_abs(kind::SinOverAbs{1.0, 0.5, 0.0, 1.0, false}), std::nullopt, {}, "",
         "f = sin(x)/|x|^{1/2} paired with g = (sin x + cos x)/|x|^{1/2} (entry 'nowhere-conv-pair-g'); "
         "f*g exists nowhere except where the 1/|t| term (sin x - cos x)/2 cancels."});
    put({"nowhere-conv-pair-g", sin_over_abs(g).with_label("(sin x + cos x)/|x|^{1/2}"), std::nullopt, {}, "",
         "second member of the nowhere-convergent pair."});
  }
  return m;
}

const std::map<std::string, CorpusEntry>& registry() {
  static const std::map<std::string, CorpusEntry> r = build();
  return r;
}

}  // namespace

const CorpusEntry& corpus_lookup(const std::string& name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw UnknownEntry("no corpus entry named '" + name + "'");
  return it->second;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> v;
  for (const auto& [k, e] : registry()) v.push_back(k);
  return v;
}

nlohmann::json corpus_dump() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, e] : registry()) {
    nlohmann::json j = {{"name", k}, {"f", function_to_json(e.f)}, {"notes", e.notes}};
    j["fhat_closed_form"] = e.fhat_closed_form ? nlohmann::json(e.fhat_closed_form->label()) : nlohmann::json(nullptr);
    j["divergence_set"] = e.divergence_set;
    j["divergence_note"] = e.divergence_note;
    out.push_back(j);
  }
  return {{"schema", "oscint.corpus/1"}, {"entries", out}};
}

// ---------------------------------------------------------------------------

FunctionSpec lorentzian(double r) {
  if (!(r > 0.0)) throw PreconditionError("lorentzian: rate must be positive");
  FunctionSpec::Data d;
  d.label = "2r/(r^2+s^2)";
  d.eval = [r](double s) -> cplx { return 2.0 * r / (r * r + s * s); };
  d.derivative = [r](double s) -> cplx {
    double q = r * r + s * s;
    return -4.0 * r * s / (q * q);
  };
  d.parity = Parity::Even;
  d.critical_points = [](double, double) { return std::vector<double>{0.0}; };
  auto amp = [r](double u) -> cplx { return 2.0 * r / (r * r + u * u); };
  d.right = const_tail(amp, -2.0);
  d.left = const_tail(amp, -2.0);
  return FunctionSpec(std::move(d));
}

FunctionSpec fejer(double h) {
  if (!(h > 0.0)) throw PreconditionError("fejer: half width must be positive");
  FunctionSpec::Data d;
  d.label = "h[sin(hs/2)/(hs/2)]^2";
  d.eval = [h](double s) -> cplx {
    double q = 0.5 * h * s;
    if (std::abs(q) < 1e-4) return h * (1.0 - q * q / 3.0);
    double v = std::sin(q) / q;
    return h * v * v;
  };
  d.derivative = [h](double s) -> cplx {
    double q = 0.5 * h * s;
    if (std::abs(q) < 1e-3) return 0.5 * h * h * (-2.0 * q / 3.0 + 8.0 * q * q * q / 45.0);
    return h * h * std::sin(q) * (q * std::cos(q) - std::sin(q)) / (q * q * q);
  };
  d.parity = Parity::Even;
  d.critical_points = [h](double lo, double hi) {
    // zeros of sin q and roots of tan q = q, q = h s / 2
    std::vector<double> v;
    double qlo = 0.5 * h * lo, qhi = 0.5 * h * hi;
    long k0 = static_cast<long>(std::floor(qlo / kPi)) - 1, k1 = static_cast<long>(std::ceil(qhi / kPi)) + 1;
    for (long k = k0; k <= k1; ++k) {
      double z = k * kPi;
      if (z > qlo && z < qhi) v.push_back(2.0 * z / h);
      if (k == 0) continue;
      // root of q cos q - sin q in (k pi, k pi + pi/2) for k > 0, mirrored for k < 0
      double a = std::abs(k) * kPi, b = a + 0.5 * kPi - 1e-12;
      auto g = [](double q) { return q * std::cos(q) - std::sin(q); };
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        (g(a) * g(m) <= 0.0 ? b : a) = m;
      }
      double root = (k > 0 ? 1.0 : -1.0) * 0.5 * (a + b);
      if (root > qlo && root < qhi) v.push_back(2.0 * root / h);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  TailModel t;
  t.components.push_back({[h](double u) -> cplx { return 2.0 / (h * u * u); }, Phase{}});
  t.components.push_back({[h](double u) -> cplx { return -1.0 / (h * u * u); }, Phase::linear(h)});
  t.components.push_back({[h](double u) -> cplx { return -1.0 / (h * u * u); }, Phase::linear(-h)});
  t.abs_integrable = t.bounded = t.limit_zero = true;
  t.decay_exponent = -2.0;
  d.right = t;
  d.left = t;
  return FunctionSpec(std::move(d));
}

std::optional<FunctionSpec> known_transform(const FunctionSpec& f) {
  if (auto* g = std::get_if<kind::GaussEnvelope>(&f.kind())) {
    auto base = gauss_envelope(g->amplitude * g->width * std::sqrt(kPi), 0.0, 2.0 / g->width);
    return g->center == 0.0 ? base : modulate(base, -g->center);
  }
  if (auto* e = std::get_if<kind::ExpAbs>(&f.kind())) return lorentzian(e->rate);
  if (auto* t = std::get_if<kind::TriangleHat>(&f.kind())) return fejer(t->half_width);
  return std::nullopt;
}

// ---------------------------------------------------------------------------

LacunaryValue lacunary_transform(const CoeffSeq& c, double s, std::size_t truncation) {
  if (!c.sum_a_finite || !c.sum_ab_finite) {
    throw CertificateMissing("lacunary: sum a_n and sum a_n |b_n| must be certified finite");
  }
  const std::size_t N = truncation == 0 ? c.a.size() : std::min(truncation, c.a.size());
  LacunaryValue r;
  r.terms = static_cast<int>(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (c.a[n] * c.b[n] != 0.0 && std::abs(std::abs(s) - std::abs(c.b[n])) <= 1e-15 * std::abs(c.b[n])) {
      r.verdict = Verdict::DivergesProven;
      r.rule = "lacunary-mass";
      return r;
    }
  }
  if (s == 0.0) {
    r.verdict = Verdict::ExistsProven;
    r.rule = "lacunary-mass";
    r.value = 0.0;
    return r;
  }
  std::vector<double> terms;
  double sum = 0.0, beyond_ab = c.ab_tail_sum;
  for (std::size_t n = 0; n < N; ++n) {
    double t = c.a[n] * std::log(std::abs((s - c.b[n]) / (s + c.b[n])));
    sum += t;
    terms.push_back(std::abs(t));
  }
  for (std::size_t n = N; n < c.a.size(); ++n) beyond_ab += c.a[n] * std::abs(c.b[n]);
  r.value = kI * sum;

  bool at_limit = false;
  for (double L : c.limit_points) at_limit = at_limit || std::abs(std::abs(s) - std::abs(L)) <= 1e-12;
  if (at_limit) {
    // criterion on the trend of a_n |log|(s-b_n)/(s+b_n)||
    r.rule = "limit-point-trend";
    std::size_t k0 = 2 * terms.size() / 3;
    if (terms.size() < 6 || terms[k0] == 0.0) {
      r.verdict = Verdict::Unknown;
      return r;
    }
    double ratio = std::pow(terms.back() / terms[k0], 1.0 / static_cast<double>(terms.size() - 1 - k0));
    if (ratio < 0.95) {
      r.verdict = Verdict::ExistsProven;
      r.tail_bound = terms.back() * ratio / (1.0 - ratio);
    } else if (ratio >= 1.0) {
      r.verdict = Verdict::DivergesProven;
    } else {
      r.verdict = Verdict::Unknown;
    }
    return r;
  }
  double dist = kInf;
  for (std::size_t n = 0; n < c.a.size(); ++n) {
    dist = std::min({dist, std::abs(s - c.b[n]), std::abs(s + c.b[n])});
  }
  for (double L : c.limit_points) dist = std::min({dist, std::abs(s - L), std::abs(s + L)});
  // |log(p/q)| <= |p - q| / min(p, q) with |p - q| <= 2|b|
  r.verdict = Verdict::ExistsProven;
  r.rule = "lacunary-mass";
  r.tail_bound = 2.0 * beyond_ab / dist;
  return r;
}

RationalsReport rationals_fixture(const std::function<double(int)>& A, double s, int depth, double weighted_sum) {
  if (!std::isfinite(weighted_sum)) throw CertificateMissing("rationals fixture: sum m A_m must be finite");
  if (!(std::abs(s) <= 1.0)) throw PreconditionError("rationals fixture: s must lie in [-1, 1]");
  if (depth < 0) throw PreconditionError("rationals fixture: negative depth");
  RationalsReport r;
  r.depth = depth;
  r.sbar = depth == 0 ? 1.0 : kInf;
  double msum = 0.0;
  for (int m = 1; m <= depth; ++m) {
    double Am = A(m);
    if (!(Am > 0.0)) throw PreconditionError("rationals fixture: weights must be positive");
    msum += m * Am;
    for (int l = 0; l <= m; ++l) {
      double q = static_cast<double>(l) / m;
      double dq = std::min(std::abs(s - q), std::abs(s + q));
      if (dq <= 1e-15) throw PreconditionError("rationals fixture: s is rational at this depth");
      r.sbar = std::min(r.sbar, dq);
      if (l >= 1) r.sum += Am * std::abs(std::log(std::abs((s - q) / (s + q))));
    }
  }
  r.bound = std::log(2.0 / r.sbar) * msum;
  r.holds = r.sum <= r.bound;
  return r;
}

}  // namespace oscint
