#include "oscint/verify.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "oscint/bvnorm.hpp"
#include "oscint/conv.hpp"
#include "oscint/corpus.hpp"
#include "oscint/fourier.hpp"
#include "oscint/invert.hpp"

namespace oscint {

namespace {
constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {}

// splitmix64
std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::index(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

// ---------------------------------------------------------------------------

std::vector<PowerPhasePoint> power_phase_grid(double tol) {
  const std::vector<double> gammas{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> deltas{-3.0, -2.0, -1.2, -1.0, -0.5, 0.0, 1.0, 2.0};
  std::vector<PowerPhasePoint> pts;
  for (double g : gammas)
    for (double d : deltas) pts.push_back({g, d, Status::Inconclusive, Status::Inconclusive});
  const int n = static_cast<int>(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    auto& p = pts[i];
    const double g = p.gamma, d = p.delta;
    p.endpoint = endpoint_singularity(g, d, tol).status;
    p.tail = oscillatory_tail([d](double u) -> cplx { return std::pow(u, d); }, Phase::power(1.0, g), 0.0, 1.0, tol)
                 .status;
    // only the two definite answers count; Inconclusive is a miss
    p.endpoint_ok = g + d + 1.0 > 0.0 ? p.endpoint == Status::Converged : p.endpoint == Status::Diverged;
    p.tail_ok = g > d + 1.0 ? p.tail == Status::Converged : p.tail == Status::Diverged;
  }
  return pts;
}

std::vector<FubiniFixture> fubini_fixtures() {
  std::vector<FubiniFixture> v;
  {
    Bivariate g;
    g.label = "e^{-y^2}";
    g.eval = [](double, double y) -> cplx { return std::exp(-y * y); };
    g.slice_y = [](double) { return gauss_envelope(); };
    g.slice_x = [](double y) { return constant(std::exp(-y * y)); };
    v.push_back({"indicator-gauss", indicator(0.0, 1.0), g, {0.0, 1.0}, ExtInterval::real_line()});
  }
  {
    Bivariate g;
    g.label = "e^{-ixy} e^{-(y-1)^2}";
    g.eval = [](double x, double y) -> cplx { return std::polar(std::exp(-(y - 1.0) * (y - 1.0)), -x * y); };
    // y-slices integrate to a gaussian in x, so the outer tail is short
    g.slice_y = [](double x) { return modulate(gauss_envelope(1.0, 1.0, 1.0), -x); };
    g.slice_x = [](double y) { return scale(modulate(constant(1.0), -y), std::exp(-(y - 1.0) * (y - 1.0))); };
    g.y_breakpoints = {0.0};  // the inner transform is only a principal value there
    v.push_back({"rational-odd-chirped-gauss", rational_odd(), g, ExtInterval::real_line(), ExtInterval::real_line()});
  }
  {
    Bivariate g;
    g.label = "sin(xy) e^{-|y|}";
    g.eval = [](double x, double y) -> cplx { return std::sin(x * y) * std::exp(-std::abs(y)); };
    g.slice_y = [](double x) { return imag_part(modulate(exp_abs(1.0), x)); };
    g.slice_x = [](double y) {
      UserCallableOptions o;
      o.description = "sin(xy)";
      o.derivative = [y](double x) -> cplx { return y * std::cos(x * y) * std::exp(-std::abs(y)); };
      return user_callable([y](double x) -> cplx { return std::sin(x * y) * std::exp(-std::abs(y)); }, o);
    };
    v.push_back({"indicator-sin-abel", indicator(0.0, 1.0), g, {0.0, 1.0}, ExtInterval::real_line()});
  }
  return v;
}

ProductBoundInstance random_product_instance(Rng& rng) {
  double a = rng.uniform(-8.0, 6.0);
  double b = a + rng.uniform(0.5, 8.0);
  ProductBoundInstance in;
  in.I = {a, b};
  switch (rng.index(6)) {
    case 0: {
      double c = rng.uniform(-2.0, 2.0), w = rng.uniform(0.5, 6.0), ph = rng.uniform(0.0, 2.0 * kPi);
      in.f = piecewise({Piece{-kInf, kInf, PieceForm::Sin, {c, w, ph}}})
                 .with_label(fmt(c) + " sin(" + fmt(w) + "x+" + fmt(ph) + ")");
      break;
    }
    case 1:
      in.f = sin_over_abs(rng.uniform(0.5, 4.0));
      break;
    case 2:
      in.f = rational_odd();
      break;
    case 3:
      in.f = chirp(0.0, 2.0);
      break;
    case 4:
      in.f = sin_over_abs(kind::SinOverAbs{rng.uniform(0.5, 3.0), 0.5, rng.uniform(0.0, kPi), 1.0, false});
      break;
    default:
      in.f = translate(rational_odd(), rng.uniform(-2.0, 2.0));
      break;
  }
  switch (rng.index(6)) {
    case 0:
      in.g = exp_abs(rng.uniform(0.2, 3.0));
      break;
    case 1:
      in.g = gauss_envelope(rng.uniform(-2.0, 2.0), rng.uniform(a, b), rng.uniform(0.3, 4.0));
      break;
    case 2: {
      double lo = rng.uniform(a, b), hi = rng.uniform(lo, b);
      in.g = indicator(lo, hi, rng.uniform(-2.0, 2.0));
      break;
    }
    case 3:
      in.g = translate(triangle_hat(rng.uniform(0.5, 5.0)), rng.uniform(-4.0, 4.0));
      break;
    case 4: {
      double c = rng.uniform(0.2, 2.0), r = rng.uniform(-0.6, 0.6);
      in.g = piecewise({Piece{-kInf, kInf, PieceForm::Exp, {c, r}}}).with_label(fmt(c) + " e^{" + fmt(r) + "x}");
      break;
    }
    default:
      in.g = constant(rng.uniform(-2.0, 2.0));
      break;
  }
  in.label = in.f.label() + " | " + in.g.label() + " on [" + fmt(a) + ", " + fmt(b) + "]";
  return in;
}

ConvPair random_conv_pair(Rng& rng) {
  ConvPair p;
  switch (rng.index(5)) {
    case 0: {
      double lo = rng.uniform(-3.0, 1.0);
      p.f = indicator(lo, lo + rng.uniform(0.5, 3.0), rng.uniform(-2.0, 2.0));
      break;
    }
    case 1:
      p.f = sin_over_abs(kind::SinOverAbs{rng.uniform(0.5, 3.0), 1.0, 0.0, 1.0, true});
      break;
    case 2:
      p.f = sin_over_abs(rng.uniform(0.5, 3.0));
      break;
    case 3: {
      double w = rng.uniform(1.0, 5.0), L = rng.uniform(2.0, 10.0);
      p.f = piecewise({Piece{0.0, L, PieceForm::Sin, {1.0, w, 0.0}}});
      break;
    }
    default:
      p.f = exp_abs(rng.uniform(0.3, 2.0));
      break;
  }
  switch (rng.index(3)) {
    case 0:
      p.g = gauss_envelope(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 2.0));
      break;
    case 1:
      p.g = exp_abs(rng.uniform(0.5, 3.0));
      break;
    default:
      p.g = triangle_hat(rng.uniform(0.3, 2.0));
      break;
  }
  p.label = p.f.label() + " * " + p.g.label();
  return p;
}

// ---------------------------------------------------------------------------

nlohmann::json SuiteResult::to_json() const {
  return {{"suite", name}, {"passed", passed}, {"total", total}, {"ok", ok()}, {"seconds", seconds},
          {"failures", failures}};
}

bool VerifySummary::ok() const {
  for (const auto& s : suites)
    if (!s.ok()) return false;
  return !suites.empty();
}

nlohmann::json VerifySummary::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : suites) arr.push_back(s.to_json());
  return {{"schema", "oscint.verify/1"}, {"seed", seed}, {"ok", ok()}, {"suites", arr}};
}

namespace {

// Collects per-case outcomes; safe to call from OpenMP workers.
class Tally {
 public:
  explicit Tally(SuiteResult& r) : r_(r) {}
  void check(bool ok, const std::string& what) {
    std::lock_guard<std::mutex> lock(mu_);
    ++r_.total;
    if (ok) {
      ++r_.passed;
    } else if (r_.failures.size() < 10) {
      r_.failures.push_back(what);
    }
  }

 private:
  SuiteResult& r_;
  std::mutex mu_;
};

bool close(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300); }

void suite_power_phase(Tally& t, std::uint64_t, int) {
  for (const auto& p : power_phase_grid()) {
    std::string at = "gamma=" + fmt(p.gamma) + " delta=" + fmt(p.delta);
    t.check(p.endpoint_ok, at + " endpoint " + status_name(p.endpoint));
    t.check(p.tail_ok, at + " tail " + status_name(p.tail));
  }
}

void suite_product_bound(Tally& t, std::uint64_t seed, int n) {
  std::vector<ProductBoundInstance> inst;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) inst.push_back(random_product_instance(rng));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const auto& in = inst[i];
    std::string at = "#" + std::to_string(i) + " " + in.label;
    try {
      auto pb = product_bound(in.f, in.g, in.I, 1e-10);
      double lhs = std::abs(pb.integral_fg.value);
      const double slack = 1e-7;
      // one check per instance covers both forms of the bound
      bool plain = pb.integral_fg.converged() && lhs <= pb.bound * (1.0 + 1e-9) + slack;
      bool norm = lhs <= pb.normalized_bound * (1.0 + 1e-9) + slack;
      t.check(plain && norm, at + ": |int fg| = " + fmt(lhs) + " vs " + fmt(pb.bound) + ", normalized " +
                                 fmt(pb.normalized_bound));
    } catch (const Error& e) {
      t.check(false, at + ": " + e.what());
    }
  }
}

void suite_conv_norm(Tally& t, std::uint64_t seed, int n) {
  std::vector<ConvPair> pairs;
  Rng rng(seed ^ 0x5bd1e995ULL);
  for (int i = 0; i < n; ++i) pairs.push_back(random_conv_pair(rng));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    std::string at = "#" + std::to_string(i) + " " + pairs[i].label;
    try {
      auto b = conv_norm_bound(pairs[i].f, pairs[i].g, true, 0.0, 41, 1e-8);
      t.check(b.empirical && *b.empirical <= b.alexiewicz_bound * (1.0 + 1e-6) + 1e-7,
              at + ": " + fmt(b.empirical.value_or(NAN)) + " > " + fmt(b.alexiewicz_bound));
    } catch (const Error& e) {
      t.check(false, at + ": " + e.what());
    }
  }
}

void suite_fubini(Tally& t, std::uint64_t, int) {
  for (const auto& fx : fubini_fixtures()) {
    auto r = fubini_check(fx.f, fx.g, fx.A, fx.B, 1e-7);
    t.check(r.agree, fx.name + ": " + fmt(std::abs(r.I1.value - r.I2.value)));
  }
}

void suite_kernels(Tally& t, std::uint64_t, int) {
  for (const auto& name : builtin_kernel_names()) {
    auto k = builtin_kernel(name);
    bool expect = name != "cesaro";
    t.check(k.validation.all() == expect, name + (expect ? " should pass" : " should fail"));
  }
}

void suite_corpus(Tally& t, std::uint64_t, int) {
  const std::vector<double> pts{-2.5, -0.7, 0.3, 1.7, 3.2};
  for (const auto& name : corpus_names()) {
    const auto& e = corpus_lookup(name);
    if (!e.fhat_closed_form) continue;
    for (double s : pts) {
      auto r = transform(e.f, s, 1e-10);
      cplx want = (*e.fhat_closed_form)(s);
      bool ok = name == "ex1a" ? std::abs(std::abs(r.value) - std::abs(want)) <= 1e-5 * std::abs(want)
                               : close(r.value, want, 1e-5);
      t.check(r.converged() && ok, name + " s=" + fmt(s) + " got " + fmt(std::abs(r.value - want)));
    }
  }
}

void suite_lacunary(Tally& t, std::uint64_t, int) {
  const auto& c = std::get<kind::LacunarySeries>(corpus_lookup("ex1f").f.kind()).coeffs;
  auto z = lacunary_transform(c, 0.0);
  t.check(z.verdict == Verdict::ExistsProven && z.value == cplx{}, "f^(0) = 0");
  for (std::size_t k = 0; k < c.b.size(); ++k) {
    if (c.a[k] * c.b[k] == 0.0) continue;
    for (double s : {c.b[k], -c.b[k]}) {
      auto v = lacunary_transform(c, s);
      t.check(v.verdict == Verdict::DivergesProven, "diverges at " + fmt(s));
    }
  }
  CoeffSeq two;
  two.a = {1.0, 0.5};
  two.b = {1.0, 2.0};
  auto v = lacunary_transform(two, 3.0);
  cplx want{0.0, std::log(0.5) + 0.5 * std::log(0.2)};
  t.check(std::abs(v.value - want) <= 1e-12, "two-term at 3");
}

void suite_diff(Tally& t, std::uint64_t, int) {
  for (const auto& g : {gauss_envelope(), gauss_envelope(2.0, 0.5, 1.5)}) {
    auto rep = freq_diff_check(g, std::vector<double>{-1.5, -0.4, 0.0, 0.9, 2.2});
    t.check(rep.all_converged && rep.max_deviation < 1e-6, g.label() + " freq " + fmt(rep.max_deviation));
    for (double s : {-1.3, 0.6, 2.0}) {
      auto p = time_diff_check(g, s);
      t.check(p.status == Status::Converged && p.deviation < 1e-6, g.label() + " time " + fmt(p.deviation));
    }
  }
}

void suite_fourier(Tally& t, std::uint64_t, int) {
  const double tol = 1e-8;
  // conjugation and oddness
  for (const char* name : {"ex1b", "ex1c", "ex1d"}) {
    const auto& f = corpus_lookup(name).f;
    for (double s : {0.5, 2.0}) {
      auto p = transform(f, s, tol), m = transform(f, -s, tol);
      if (f.real_valued()) {
        t.check(p.converged() && m.converged() && std::abs(m.value - std::conj(p.value)) <= 10 * tol,
                std::string(name) + " conjugation at " + fmt(s));
      } else {
        // e^{ix^2} is even, so is its transform
        t.check(p.converged() && m.converged() && std::abs(m.value - p.value) <= 10 * tol,
                std::string(name) + " evenness at " + fmt(s));
      }
      if (f.parity() == Parity::Odd) t.check(std::abs(p.value.real()) < 10 * tol, std::string(name) + " odd");
    }
  }
  // modulation
  auto f = rational_odd();
  auto a = transform(modulate(f, 0.7), 2.0, tol), b = transform(f, 1.3, tol);
  t.check(std::abs(a.value - b.value) <= 10 * tol, "modulation");
  // interval average against the integrated sweep
  for (auto [lo, hi] : {std::pair{1.0, 2.0}, std::pair{-1.0, 1.0}}) {
    auto lhs = interval_average(f, lo, hi, 1e-10);
    auto fh = transformed_spec(f, 1e-11);
    auto rhs = integrate(fh, {lo, hi}, 1e-8);
    t.check(lhs.converged() && std::abs(lhs.value - rhs.value) <= 1e-4,
            "interval average [" + fmt(lo) + "," + fmt(hi) + "]");
  }
}

void suite_parseval(Tally& t, std::uint64_t seed, int n) {
  Rng rng(seed ^ 0x27d4eb2fULL);
  std::vector<std::pair<FunctionSpec, FunctionSpec>> pairs;
  for (int i = 0; i < n; ++i) {
    FunctionSpec psi;
    switch (rng.index(4)) {
      case 0:
        psi = dilate(rational_odd(), rng.uniform(0.5, 2.0));
        break;
      case 1:
        psi = chirp(0.0, 2.0);
        break;
      case 2:
        psi = exp_abs(rng.uniform(0.5, 2.0));
        break;
      default:
        psi = translate(triangle_hat(rng.uniform(0.5, 2.0)), rng.uniform(-1.0, 1.0));
        break;
    }
    FunctionSpec phi = rng.index(2) == 0
                           ? gauss_envelope(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0))
                           : triangle_hat(rng.uniform(0.5, 3.0));
    pairs.emplace_back(psi, phi);
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    auto r = parseval(pairs[i].first, pairs[i].second, 1e-6);
    t.check(r.agree, "#" + std::to_string(i) + " " + pairs[i].first.label() + " / " + pairs[i].second.label() +
                         ": " + fmt(std::abs(r.lhs.value - r.rhs.value)));
  }
}

void suite_conv(Tally& t, std::uint64_t, int) {
  auto at = [](const FunctionSpec& f, const FunctionSpec& g, double x) {
    return convolve({f, g, x, ConvRoute::Direct, 1e-9}).result;
  };
  auto r1 = at(indicator(-1.0, 1.0), exp_abs(1.0), 0.0);
  t.check(std::abs(r1.value - 2.0 * (1.0 - std::exp(-1.0))) < 1e-8, "indicator * exp_abs");
  auto r2 = at(gauss_envelope(), gauss_envelope(), 0.0);
  t.check(std::abs(r2.value - std::sqrt(kPi / 2.0)) < 1e-8, "gauss * gauss");
  // commutativity and translation
  auto f = sin_over_abs(kind::SinOverAbs{1.0, 1.0, 0.0, 1.0, true});
  auto g = exp_abs(1.0);
  for (double x : {-1.0, 0.5, 2.0}) {
    auto fg = at(f, g, x), gf = at(g, f, x);
    t.check(std::abs(fg.value - gf.value) < 1e-7, "commutativity at " + fmt(x));
    auto tr = at(translate(f, 0.5), g, x);
    auto sh = at(f, g, x + 0.5);
    t.check(std::abs(tr.value - sh.value) < 1e-7, "translation at " + fmt(x));
  }
  auto ct = conv_transform_check(rational_odd(), gauss_envelope(), {-2.0, -0.5, 0.5, 1.0, 2.5});
  t.check(ct.all_converged && ct.max_deviation < 1e-5, "transform identity " + fmt(ct.max_deviation));
  auto ci = conv_inverse_check(rational_odd(), gauss_envelope(), {1.0});
  t.check(ci.all_converged && ci.max_deviation < 1e-4, "inverse identity " + fmt(ci.max_deviation));
  auto as = associativity_check(indicator(0.0, 1.0), exp_abs(1.0), gauss_envelope(), 0.0);
  t.check(as.status == Status::Converged && as.deviation <= 1e-4, "associativity " + fmt(as.deviation));
  const auto& nf = corpus_lookup("nowhere-conv-pair").f;
  const auto& ng = corpus_lookup("nowhere-conv-pair-g").f;
  for (double x : {0.0, 1.0}) t.check(!at(nf, ng, x).converged(), "nowhere pair at " + fmt(x));
}

void suite_inversion(Tally& t, std::uint64_t, int) {
  struct Case {
    const char* name;
    std::vector<double> x0;
  };
  const std::vector<Case> cases{{"ex1b", {-1.5, -0.5, 0.0, 0.7, 2.0}},
                                {"ex1c", {-2.0, -0.5, 0.5, 1.0, 3.0}},
                                {"ex1d", {-2.0, -1.0, 0.0, 1.0, 2.0}}};
  for (const char* kn : {"gauss", "abel"}) {
    auto k = builtin_kernel(kn);
    for (const auto& c : cases) {
      const auto& f = corpus_lookup(c.name).f;
      for (double x0 : c.x0)
        for (double C : {0.0, 1.0}) {
          auto r = invert_at(f, k, NonTangentialPath::standard(x0, C), 1e-9);
          cplx want = f(x0);
          std::string at = std::string(kn) + " " + c.name + " x0=" + fmt(x0) + " C=" + fmt(C);
          t.check(std::abs(r.limit - want) <= 1e-3, at + " got " + fmt(std::abs(r.limit - want)));
          t.check(r.max_mass_error <= 1e-8, at + " mass " + fmt(r.max_mass_error));
        }
    }
  }
}

void suite_nonreversible(Tally& t, std::uint64_t, int) {
  for (auto [nu, alpha] : {std::pair{3.0, 1.5}, std::pair{4.0, 2.5}}) {
    auto rep = nonreversible_fixture(alpha, nu);
    t.check(rep.confirmed, "nonreversible nu=" + fmt(nu));
  }
  auto f = chirp(1.5, 3.0, true);
  double prev = kInf;
  for (double s : {10.0, 20.0, 40.0}) {
    auto q = transform(f, s, 1e-9);
    double rel = std::abs(std::abs(stationary_phase_asymptotic(1.5, 3.0, s)) - std::abs(q.value)) / std::abs(q.value);
    t.check(q.converged() && rel < 0.1 && rel < prev, "stationary phase at " + fmt(s) + " rel " + fmt(rel));
    prev = rel;
  }
}

struct SuiteDef {
  std::function<void(Tally&, std::uint64_t, int)> run;
  int default_n;
};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> r{
      {"lemma1", {suite_power_phase, 0}},     {"lemma2", {suite_product_bound, 500}},  {"conv-norm", {suite_conv_norm, 200}},
      {"fubini", {suite_fubini, 0}},     {"kernels", {suite_kernels, 0}},  {"corpus", {suite_corpus, 0}},
      {"lacunary", {suite_lacunary, 0}}, {"diff", {suite_diff, 0}},        {"fourier", {suite_fourier, 0}},
      {"parseval", {suite_parseval, 100}}, {"conv", {suite_conv, 0}},     {"inversion", {suite_inversion, 0}},
      {"nonreversible", {suite_nonreversible, 0}},
  };
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> v;
  for (const auto& [k, _] : registry()) v.push_back(k);
  return v;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int n) {
  auto it = registry().find(name);
  if (it == registry().end()) throw UnknownEntry("no verify suite named '" + name + "'");
  SuiteResult r;
  r.name = name;
  Tally t(r);
  auto t0 = std::chrono::steady_clock::now();
  it->second.run(t, seed, n > 0 ? n : it->second.default_n);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

VerifySummary run_verify(const std::vector<std::string>& names, std::uint64_t seed, int n) {
  VerifySummary s;
  s.seed = seed;
  for (const auto& nm : names.empty() ? suite_names() : names) {
    if (!registry().count(nm)) throw UnknownEntry("no verify suite named '" + nm + "'");
  }
  for (const auto& nm : names.empty() ? suite_names() : names) s.suites.push_back(run_suite(nm, seed, n));
  return s;
}

}  // namespace oscint
