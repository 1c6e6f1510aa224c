#include "oscint/fourier.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oscint/corpus.hpp"

namespace oscint {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double sigma_of(double s, Direction dir) { return dir == Direction::Forward ? -s : s; }

// ---------------------------------------------------------------------------
// Existence classifier.

struct SideVerdict {
  Verdict v = Verdict::Unknown;
  std::string rule;
};

// Observed power decay of one amplitude far out; nullopt if not measurable.
std::optional<double> measured_exponent(const RealFn& amp, double from) {
  double U = std::max(from, 1.0) * 1e4;
  double a1 = std::abs(amp(U)), a2 = std::abs(amp(2.0 * U));
  if (!std::isfinite(a1) || !std::isfinite(a2)) return std::nullopt;
  if (a2 == 0.0) return -kInf;
  if (a1 == 0.0) return std::nullopt;
  return std::log2(a2 / a1);
}

// One component e^{i psi(u)} amp(u), amp ~ u^e, after the modulation slope a.
SideVerdict component_verdict(const OscComponent& c, double e, double a) {
  Phase ph = *c.phase.plus(Phase::linear(a));
  const bool orig_const = c.phase.is_constant();
  bool power = ph.c != 0.0 && ph.p != 1.0 && ph.p > 0.0;
  double slope = ph.b + ((ph.c != 0.0 && ph.p == 1.0) ? ph.c : 0.0);
  if (ph.c != 0.0 && ph.p <= 0.0) slope = ph.b;  // c u^p -> 0: no oscillation from it
  if (power && ph.p > 1.0) {
    if (ph.p > e + 1.0) return {Verdict::ExistsProven, "power-phase"};
    return {Verdict::DivergesProven, "power-phase"};
  }
  if (power && slope == 0.0) {
    if (ph.p > e + 1.0) return {Verdict::ExistsProven, "power-phase"};
    return {Verdict::DivergesProven, "power-phase"};
  }
  if (slope == 0.0) {
    if (e < -1.0) return {Verdict::ExistsProven, "absolute-tail"};
    return {Verdict::DivergesProven, orig_const ? "non-oscillatory-tail" : "frullani-log"};
  }
  // linear oscillation (a sub-linear power part only perturbs it)
  if (e < 0.0) return {Verdict::ExistsProven, orig_const ? "bv-tail" : "dirichlet"};
  return {Verdict::DivergesProven, "non-decaying-oscillation"};
}

SideVerdict tail_verdict(const TailModel& t, double a) {
  if (t.vanishes()) return {Verdict::ExistsProven, "absolute-tail"};
  if (t.rapid || t.abs_integrable) return {Verdict::ExistsProven, "absolute-tail"};
  if (a != 0.0 && t.bv_to_zero()) return {Verdict::ExistsProven, "bv-tail"};
  if (!t.decay_exponent) return {Verdict::Unknown, "no-tail-metadata"};
  const double e = *t.decay_exponent;
  SideVerdict out{Verdict::ExistsProven, "absolute-tail"};
  bool unknown = false;
  for (const auto& c : t.components) {
    double ej = e;
    if (auto m = measured_exponent(c.amp, t.from); m && *m < e - 0.05) ej = *m;
    if (std::isinf(ej)) continue;
    auto v = component_verdict(c, ej, a);
    if (v.v == Verdict::DivergesProven) return v;
    if (v.v == Verdict::Unknown) unknown = true;
    if (out.rule == "absolute-tail") out.rule = v.rule;
  }
  if (unknown) return {Verdict::Unknown, "tail-unknown"};
  return out;
}

bool builtin(const Kind& k) { return !std::holds_alternative<kind::UserCallable>(k); }

// Local integrability for the built-in kinds; nullopt when the kind says nothing.
std::optional<SideVerdict> local_rule(const FunctionSpec& f) {
  if (auto* p = std::get_if<kind::PowerSigned>(&f.kind())) {
    if (p->exponent <= -1.0) return SideVerdict{Verdict::DivergesProven, "local-integrability"};
  }
  if (auto* c = std::get_if<kind::Chirp>(&f.kind())) {
    if (c->alpha <= -1.0) return SideVerdict{Verdict::DivergesProven, "local-integrability"};
  }
  if (auto* s = std::get_if<kind::SinOverAbs>(&f.kind())) {
    // near 0: sin(shift)|x|^{-p} + a x |x|^{-p}
    double lead = std::sin(s->shift) != 0.0 ? s->power : s->power - 1.0;
    if (s->a == 0.0 && std::sin(s->shift) == 0.0) lead = -kInf;
    if (lead >= 1.0) return SideVerdict{Verdict::DivergesProven, "local-integrability"};
  }
  return std::nullopt;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExistsProven: return "exists";
    case Verdict::DivergesProven: return "diverges";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

Existence classify_existence(const FunctionSpec& f, double s, Direction dir) {
  if (auto l = local_rule(f)) return {l->v, l->rule};
  if (auto* lac = std::get_if<kind::LacunarySeries>(&f.kind())) {
    try {
      auto r = lacunary_transform(lac->coeffs, s, lac->truncation);
      return {r.verdict, r.rule};
    } catch (const CertificateMissing&) {
      return {Verdict::Unknown, "certificate-missing"};
    }
  }
  if (auto* c = std::get_if<kind::Chirp>(&f.kind()); c && c->nu > 1.0) {
    if (c->alpha < c->nu - 1.0) return {Verdict::ExistsProven, "chirp-range"};
    return {Verdict::DivergesProven, "chirp-range"};
  }
  const double a = sigma_of(s, dir);
  auto r = tail_verdict(f.right_tail(), a);
  auto l = tail_verdict(f.left_tail(), -a);
  if (r.v == Verdict::DivergesProven) return {r.v, r.rule};
  if (l.v == Verdict::DivergesProven) return {l.v, l.rule};
  if (r.v == Verdict::Unknown || l.v == Verdict::Unknown) {
    return {Verdict::Unknown, r.v == Verdict::Unknown ? r.rule : l.rule};
  }
  bool unbounded = std::any_of(f.singular_points().begin(), f.singular_points().end(),
                               [](const SingularPoint& p) { return p.type == SingularType::Unbounded; });
  if (unbounded && !builtin(f.kind())) return {Verdict::Unknown, "local-unknown"};
  // report the weaker of the two routes
  auto rank = [](const std::string& x) { return x == "absolute-tail" ? 0 : (x == "bv-tail" ? 1 : 2); };
  return {Verdict::ExistsProven, rank(r.rule) >= rank(l.rule) ? r.rule : l.rule};
}

// ---------------------------------------------------------------------------
// Integration by parts against G(u) = int_u^inf g, u >= 0.

namespace {

class Antiderivative {
 public:
  Antiderivative(const FunctionSpec& g, double tol) : g_(g), tol_(tol) {
    const TailModel& t = g.right_tail();
    from_ = std::max(t.from, 1.0);
    for (double p : g.panel_points()) {
      if (p > 0.0 && p < 1e6) from_ = std::max(from_, p);
    }
    QuadOptions o;
    o.tol = tol / 4.0;
    total_ = integrate(g, {0.0, kInf}, o);
    // core knots on [0, from]
    double rate = 1.0;
    for (const auto& c : t.components) rate = std::max(rate, std::abs(c.phase.d1(from_)));
    int n = std::max(8, static_cast<int>(std::ceil(from_ * rate * 4.0 / kPi)));
    h0_ = from_ / n;
    cum0_.assign(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      auto r = integrate(g, {k * h0_, (k + 1) * h0_}, tol / (8.0 * n));
      cum0_[k + 1] = cum0_[k] + r.value;
    }
    for (const auto& c : t.components) {
      Comp cp;
      cp.c = c;
      TailModel one = t;
      one.components = {c};
      QuadOptions oc;
      oc.tol = tol / (4.0 * static_cast<double>(t.components.size()));
      auto r = integrate_tail(one, from_, oc);
      cp.total = r.value;
      cp.ok = r.converged();
      double w = std::abs(c.phase.d1(from_));
      cp.h = w > 0.0 ? kPi / (2.0 * w) : 0.5;
      cp.cum = {0.0};
      comps_.push_back(std::move(cp));
    }
    tail_ok_ = std::all_of(comps_.begin(), comps_.end(), [](const Comp& cp) { return cp.ok; });
  }

  bool ok() const { return total_.converged() && tail_ok_; }
  const QuadResult& total() const { return total_; }
  double from() const { return from_; }

  cplx operator()(double u) const {
    if (u < from_) {
      int k = std::min(static_cast<int>(u / h0_), static_cast<int>(cum0_.size()) - 2);
      cplx part = cum0_[k];
      double lo = k * h0_;
      if (u > lo) part += piece(lo, u);
      return total_.value - part;
    }
    cplx v = 0.0;
    for (std::size_t j = 0; j < comps_.size(); ++j) v += comps_[j].total - comp_cum(j, u);
    return v;
  }

  // G_j(u) = int_u^inf of component j, u >= from.
  cplx comp_remainder(std::size_t j, double u) const { return comps_[j].total - comp_cum(j, u); }
  std::size_t n_comps() const { return comps_.size(); }
  const OscComponent& comp(std::size_t j) const { return comps_[j].c; }

 private:
  struct Comp {
    OscComponent c;
    cplx total{};
    bool ok = false;
    double h = 1.0;
    mutable std::vector<cplx> cum;
  };

  cplx piece(double lo, double hi) const {
    bool singular = false;
    for (double p : g_.panel_points()) singular = singular || (p >= lo && p <= hi);
    if (singular) return integrate(g_, {lo, hi}, 1e-13).value;
    return gauss_kronrod([this](double x) { return g_(x); }, lo, hi, 1e-14, 100000).value;
  }

  cplx comp_cum(std::size_t j, double u) const {
    const Comp& cp = comps_[j];
    auto f = [&cp](double x) { return cp.c.amp(x) * std::polar(1.0, cp.c.phase.value(x)); };
    std::size_t k = static_cast<std::size_t>((u - from_) / cp.h);
    cplx base;
    {
      std::lock_guard<std::mutex> lock(mu_);
      while (cp.cum.size() <= k) {
        double lo = from_ + (cp.cum.size() - 1) * cp.h;
        cp.cum.push_back(cp.cum.back() + gauss_kronrod(f, lo, lo + cp.h, 1e-15, 100000).value);
      }
      base = cp.cum[k];
    }
    double lo = from_ + k * cp.h;
    if (u > lo) base += gauss_kronrod(f, lo, u, 1e-15, 100000).value;
    return base;
  }

  FunctionSpec g_;
  double tol_;
  double from_ = 1.0;
  QuadResult total_;
  double h0_ = 0.1;
  std::vector<cplx> cum0_;
  std::vector<Comp> comps_;
  bool tail_ok_ = false;
  mutable std::mutex mu_;
};

// G as a function on [0, inf) with tails inherited from g's phases.
FunctionSpec antiderivative_spec(std::shared_ptr<Antiderivative> G, const TailModel& gt, bool real) {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{"antiderivative"};
  d.label = "int_x^inf f";
  d.eval = [G](double x) -> cplx { return (*G)(x); };
  d.support = {0.0, kInf};
  d.breakpoints = {0.0, G->from()};
  d.real_valued = real;
  d.left = TailModel::zero(0.0);
  TailModel t;
  t.from = G->from();
  bool osc = false;
  for (std::size_t j = 0; j < G->n_comps(); ++j) {
    Phase ph = G->comp(j).phase;
    osc = osc || !ph.is_constant();
    t.components.push_back({[G, j, ph](double u) { return G->comp_remainder(j, u) * std::polar(1.0, -ph.value(u)); },
                            ph});
  }
  t.rapid = gt.rapid;
  t.bounded = t.limit_zero = true;
  t.bv = !osc;
  if (gt.decay_exponent) {
    // int_u^inf of amp e^{i psi} ~ amp / psi'
    double e = -kInf;
    for (std::size_t j = 0; j < G->n_comps(); ++j) {
      const Phase& ph = G->comp(j).phase;
      double ej = *gt.decay_exponent + 1.0;
      if (!ph.is_constant()) ej = *gt.decay_exponent - (ph.c != 0.0 ? std::max(0.0, ph.p - 1.0) : 0.0);
      e = std::max(e, ej);
    }
    t.decay_exponent = e;
    t.abs_integrable = t.rapid || e < -1.0;
  }
  d.right = t;
  return FunctionSpec(std::move(d));
}

QuadResult parts_transform(const FunctionSpec& f, double sigma, const QuadOptions& o) {
  auto Gp = std::make_shared<Antiderivative>(f, o.tol / 8.0);
  auto Gm = std::make_shared<Antiderivative>(reflect(f), o.tol / 8.0);
  QuadResult r;
  r.add_trace("PartsTransform");
  if (!Gp->ok() || !Gm->ok()) {
    r = combine(Gp->total(), Gm->total());
    r.status = combine_status(r.status, Status::Inconclusive);
    r.value_set = false;
    r.add_trace("PartsTransform:antiderivative-unavailable");
    return r;
  }
  r = combine(Gp->total(), Gm->total());
  r.add_trace("PartsTransform");
  if (sigma == 0.0) return r;
  auto F1 = antiderivative_spec(Gp, f.right_tail(), f.real_valued());
  auto F2 = antiderivative_spec(Gm, f.left_tail(), f.real_valued());
  QuadOptions oi = o;
  oi.tol = o.tol / (4.0 * std::max(1.0, std::abs(sigma)));
  oi.strategy = TailStrategy::Auto;
  auto I1 = integrate(modulate(F1, sigma), {0.0, kInf}, oi);
  auto I2 = integrate(modulate(F2, -sigma), {0.0, kInf}, oi);
  I1.value *= kI * sigma;
  I1.abs_error_estimate *= std::abs(sigma);
  I2.value *= -kI * sigma;
  I2.abs_error_estimate *= std::abs(sigma);
  r = combine(r, combine(I1, I2));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

QuadResult transform(const TransformRequest& req) {
  if (!(req.tol > 0.0)) throw PreconditionError("transform: tol must be positive");
  auto ex = classify_existence(req.f, req.s, req.direction);
  QuadResult r;
  if (ex.verdict == Verdict::DivergesProven) {
    r.status = Status::Diverged;
    r.value_set = false;
    r.add_trace("ExistenceRefuted:" + ex.rule);
    return r;
  }
  const double sigma = sigma_of(req.s, req.direction);
  QuadOptions o;
  o.tol = req.direction == Direction::Inverse ? req.tol * 2.0 * kPi : req.tol;
  o.budget = req.budget;
  o.strategy = req.strategy;
  if (req.strategy == TailStrategy::PartsTransform) {
    r = parts_transform(req.f, sigma, o);
  } else {
    r = integrate(modulate(req.f, sigma), ExtInterval::real_line(), o);
  }
  r.add_trace("Classifier:" + verdict_name(ex.verdict) + ":" + ex.rule);
  if (req.direction == Direction::Inverse) {
    r.value /= 2.0 * kPi;
    r.abs_error_estimate /= 2.0 * kPi;
  }
  return r;
}

QuadResult transform(const FunctionSpec& f, double s, double tol) {
  TransformRequest q{f, s};
  q.tol = tol;
  return transform(q);
}

QuadResult inverse_transform(const FunctionSpec& f, double x, double tol) {
  TransformRequest q{f, x, Direction::Inverse};
  q.tol = tol;
  return transform(q);
}

// ---------------------------------------------------------------------------

QuadResult interval_average(const FunctionSpec& f, double a, double b, double tol) {
  QuadResult r;
  if (a == b) {
    r.value = 0.0;
    r.abs_error_estimate = 0.0;
    r.status = Status::Converged;
    r.value_set = true;
    r.add_trace("EmptyInterval");
    return r;
  }
  // K(x) = i [e^{-ibx} - e^{-iax}] / x = 2 sin((b-a)x/2)/x e^{-i(a+b)x/2}
  const double w = b - a, m = 0.5 * (a + b);
  UserCallableOptions o;
  o.description = "interval kernel";
  o.real_valued = false;
  o.breakpoints = {-1.0, 1.0};
  auto tail = [&](double side) {
    TailModel t;
    t.from = 1.0;
    // x = side*u: i e^{-i b side u}/(side u) - i e^{-i a side u}/(side u)
    t.components.push_back({[side](double u) -> cplx { return kI / (side * u); }, Phase::linear(-b * side)});
    t.components.push_back({[side](double u) -> cplx { return -kI / (side * u); }, Phase::linear(-a * side)});
    t.bounded = t.limit_zero = true;
    t.decay_exponent = -1.0;
    return t;
  };
  o.right = tail(1.0);
  o.left = tail(-1.0);
  auto K = user_callable(
      [w, m](double x) -> cplx {
        if (x == 0.0) return w;
        return 2.0 * std::sin(0.5 * w * x) / x * std::polar(1.0, -m * x);
      },
      o);
  r = integrate(multiply(f, K), ExtInterval::real_line(), tol);
  r.add_trace("IntervalAverage");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

DiffPoint freq_point(const FunctionSpec& f, const FunctionSpec& xf, double s, double tol) {
  const double h = 1e-2;
  DiffPoint p;
  p.s = s;
  const double off[4] = {-2.0, -1.0, 1.0, 2.0};
  const double wt[4] = {1.0, -8.0, 8.0, -1.0};
  cplx d = 0.0;
  Status st = Status::Converged;
  for (int k = 0; k < 4; ++k) {
    auto r = transform(f, s + off[k] * h, tol);
    st = combine_status(st, r.status);
    d += wt[k] * r.value;
  }
  p.lhs = d / (12.0 * h);
  auto g = transform(xf, s, tol);
  st = combine_status(st, g.status);
  p.rhs = -kI * g.value;
  p.status = st;
  p.deviation = std::abs(p.lhs - p.rhs);
  return p;
}

DiffReport collect(std::vector<DiffPoint> pts) {
  DiffReport r;
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

DiffReport freq_diff_check(const FunctionSpec& f, const std::vector<double>& s_points, double tol) {
  auto xf = times_x(f);
  std::vector<DiffPoint> pts(s_points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < s_points.size(); ++i) pts[i] = freq_point(f, xf, s_points[i], tol);
  return collect(std::move(pts));
}

DiffReport freq_diff_check(const FunctionSpec& f, const ExtInterval& I, double tol) {
  if (!I.finite() || !(I.hi > I.lo)) throw PreconditionError("freq_diff_check: need a finite interval");
  std::vector<double> s;
  for (int k = 1; k <= 5; ++k) s.push_back(I.lo + k * (I.hi - I.lo) / 6.0);
  return freq_diff_check(f, s, tol);
}

DiffPoint time_diff_check(const FunctionSpec& f, double s, double tol) {
  if (s == 0.0) throw PreconditionError("time_diff_check: s must be nonzero");
  if (!f.has_derivative()) throw PreconditionError("time_diff_check: f carries no derivative");
  DiffPoint p;
  p.s = s;
  auto l = transform(derivative_of(f), s, tol);
  auto r = transform(f, s, tol);
  p.lhs = l.value;
  p.rhs = kI * s * r.value;
  p.status = combine_status(l.status, r.status);
  p.deviation = std::abs(p.lhs - p.rhs);
  return p;
}

// ---------------------------------------------------------------------------

FunctionSpec transformed_spec(const FunctionSpec& f, double tol, Direction dir, std::vector<double> breakpoints,
                              std::shared_ptr<std::atomic<long>> failures) {
  UserCallableOptions o;
  o.description = (dir == Direction::Forward ? "fhat[" : "fcheck[") + f.label() + "]";
  o.real_valued = false;
  o.breakpoints = std::move(breakpoints);
  return user_callable(
      [f, tol, dir, failures](double s) -> cplx {
        TransformRequest q{f, s, dir};
        q.tol = tol;
        auto r = transform(q);
        if (!r.converged()) {
          if (failures) ++*failures;
          return 0.0;
        }
        return r.value;
      },
      o);
}

ParsevalReport parseval(const FunctionSpec& psi, const FunctionSpec& phi, double tol) {
  ParsevalReport rep;
  const double inner = tol / 100.0;
  // psi phi^: closed form of phi^ when known, else pointwise transforms
  FunctionSpec phihat = known_transform(phi).value_or(transformed_spec(phi, inner));
  rep.lhs = integrate(multiply(psi, phihat), ExtInterval::real_line(), tol);
  // psi^ phi over the effective support of phi
  ExtInterval J = phi.support();
  if (std::isfinite(phi.effective_radius())) {
    J.lo = std::max(J.lo, -phi.effective_radius());
    J.hi = std::min(J.hi, phi.effective_radius());
  }
  auto fails = std::make_shared<std::atomic<long>>(0);
  FunctionSpec psihat = transformed_spec(psi, inner, Direction::Forward, {0.0}, fails);
  rep.rhs = integrate(multiply(psihat, phi), J, tol);
  if (*fails > 0) rep.rhs.add_trace("NonConvergedPoints:" + std::to_string(fails->load()));
  rep.agree = rep.lhs.converged() && rep.rhs.converged() && std::abs(rep.lhs.value - rep.rhs.value) <= 10.0 * tol;
  return rep;
}

// ---------------------------------------------------------------------------

QucReport quc_probe(const FunctionSpec& f, double s0, double eps, double M) {
  QucReport rep;
  if (std::isfinite(f.support().lo) && std::isfinite(f.support().hi)) {
    rep.m = std::max(std::abs(f.support().lo), std::abs(f.support().hi));
    rep.delta = 1.0;
    rep.satisfied = true;
    return rep;
  }
  const double tol = eps / 100.0;
  auto tail_mag = [&](double m, double s) -> std::optional<double> {
    auto g = modulate(f, -s);
    QuadOptions o;
    o.tol = tol;
    o.budget = 2'000'000;
    cplx v = 0.0;
    if (f.support().hi > m) {
      auto r = integrate(g, {m, kInf}, o);
      if (!r.converged()) return std::nullopt;
      v += r.value;
    }
    if (f.support().lo < -m) {
      auto l = integrate(g, {-kInf, -m}, o);
      if (!l.converged()) return std::nullopt;
      v += l.value;
    }
    return std::abs(v);
  };
  for (int i = 0; i <= 6; ++i) {
    double m = M * std::ldexp(1.0, i);
    for (int j = 0; j <= 6; ++j) {
      double delta = std::ldexp(1.0, -j);
      bool ok = true;
      for (int k = -4; k <= 4 && ok; ++k) {
        ++rep.probes;
        auto t = tail_mag(m, s0 + 0.95 * delta * k / 4.0);
        ok = t && *t < eps;
      }
      if (ok) {
        rep.m = m;
        rep.delta = delta;
        rep.satisfied = true;
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::string TransformTable::to_csv() const {
  std::ostringstream os;
  os << "s,re,im,status,err_est,evals\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < size(); ++i) {
    bool set = statuses[i] == Status::Converged || statuses[i] == Status::Inconclusive;
    os << num(s_grid[i]) << ',' << (set ? num(values[i].real()) : "") << ',' << (set ? num(values[i].imag()) : "")
       << ',' << status_name(statuses[i]) << ',' << num(errors[i]) << ',' << evaluations[i] << '\n';
  }
  return os.str();
}

nlohmann::json TransformTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    nlohmann::json r = {{"s", s_grid[i]},
                        {"status", status_name(statuses[i])},
                        {"err_est", std::isfinite(errors[i]) ? nlohmann::json(errors[i]) : nlohmann::json(nullptr)},
                        {"evals", evaluations[i]},
                        {"notes", notes[i]}};
    if (statuses[i] == Status::Converged || statuses[i] == Status::Inconclusive) {
      r["re"] = values[i].real();
      r["im"] = values[i].imag();
    }
    rows.push_back(r);
  }
  return {{"schema", "oscint.transform_table/1"}, {"rows", rows}};
}

namespace {

void check_grid(const std::vector<double>& g) {
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw PreconditionError("sweep: grid must be strictly increasing");
  }
}

TransformTable empty_table(const std::vector<double>& g) {
  TransformTable t;
  t.s_grid = g;
  t.values.assign(g.size(), 0.0);
  t.statuses.assign(g.size(), Status::Inconclusive);
  t.errors.assign(g.size(), kInf);
  t.evaluations.assign(g.size(), 0);
  t.notes.assign(g.size(), "");
  return t;
}

void fill_point(TransformTable& t, std::size_t i, const FunctionSpec& f, Direction dir, double tol,
                TailStrategy strategy) {
  try {
    TransformRequest q{f, t.s_grid[i], dir, strategy};
    q.tol = tol;
    auto r = transform(q);
    t.values[i] = r.value_set ? r.value : cplx{};
    t.statuses[i] = r.status;
    t.errors[i] = r.abs_error_estimate;
    t.evaluations[i] = r.evaluations;
    std::string n;
    for (const auto& s : r.strategy_trace) n += (n.empty() ? "" : ";") + s;
    t.notes[i] = n;
  } catch (const Error& e) {
    t.statuses[i] = Status::Inconclusive;
    t.notes[i] = std::string("error:") + e.what();
  }
}

}  // namespace

TransformTable sweep(const FunctionSpec& f, const std::vector<double>& s_grid, Direction dir, double tol, int jobs,
                     TailStrategy strategy) {
  check_grid(s_grid);
  auto t = empty_table(s_grid);
  const int n = static_cast<int>(s_grid.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) fill_point(t, static_cast<std::size_t>(i), f, dir, tol, strategy);
  return t;
}

TransformTable sweep_serial(const FunctionSpec& f, const std::vector<double>& s_grid, Direction dir, double tol,
                            TailStrategy strategy) {
  check_grid(s_grid);
  auto t = empty_table(s_grid);
  for (std::size_t i = 0; i < s_grid.size(); ++i) fill_point(t, i, f, dir, tol, strategy);
  return t;
}

}  // namespace oscint
