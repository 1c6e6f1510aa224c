#include "oscint/quad.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>

#include <nlohmann/json.hpp>

#include "oscint/accel.hpp"

namespace oscint {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Doubling mode: divergence when panel contributions shrink slower than this ratio.
const double kRatioThreshold = std::pow(2.0, -0.05);
// Lobe mode: divergence when |lobe| ~ u^e with e above this.
constexpr double kDecayThreshold = -0.1;
constexpr int kLobeRounds = 8;
constexpr int kMaxDoublings = 64;
constexpr std::size_t kAccelWindow = 48;

struct BudgetExceeded {};

struct Budget {
  long long used = 0;
  long long cap = kDefaultBudget;

  void charge(long long n) {
    used += n;
    if (used > cap) throw BudgetExceeded{};
  }
};

struct Part {
  cplx value{};
  double err = 0.0;
  bool ok = true;
};

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7-15.

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

cplx safe(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()) ? v : cplx{}; }

struct Panel {
  double a, b;
  cplx value;
  double err;
  double abs;  // integral of |f|, for the roundoff floor
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const RealFn& f, double a, double b, Budget& bud) {
  bud.charge(15);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = safe(f(c));
  cplx resk = fc * wgk[7];
  cplx resg = fc * wg[3];
  double resabs = std::abs(resk);
  cplx fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    double dx = h * xgk[j];
    fv1[j] = safe(f(c - dx));
    fv2[j] = safe(f(c + dx));
    resk += wgk[j] * (fv1[j] + fv2[j]);
    resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += wg[j / 2] * (fv1[j] + fv2[j]);
  }
  cplx mean = 0.5 * resk;
  double resasc = wgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  const double ah = std::abs(h);
  resk *= h;
  resg *= h;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err, resabs};
}

Part gk_adaptive(const RealFn& f, double a, double b, double tol, Budget& bud, int pieces) {
  Part out;
  if (!(b > a)) return out;
  pieces = std::clamp(pieces, 1, 200000);
  std::priority_queue<Panel> q;
  double total_err = 0.0, total_abs = 0.0;
  cplx total{};
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    double lo = a + i * w, hi = (i + 1 == pieces) ? b : a + (i + 1) * w;
    Panel p = gk15(f, lo, hi, bud);
    total += p.value;
    total_err += p.err;
    total_abs += p.abs;
    q.push(p);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  // Below this the per-panel 50 eps floors dominate and splitting cannot help.
  auto target = [&] { return std::max(tol, 100.0 * eps * total_abs); };
  std::vector<Panel> frozen;  // panels too narrow to split further
  int iter = 0;
  while (total_err > target() && !q.empty()) {
    if (++iter % 64 == 0) {
      // re-sum to shed drift
      total_err = 0.0;
      auto copy = q;
      while (!copy.empty()) {
        total_err += copy.top().err;
        copy.pop();
      }
      for (const auto& p : frozen) total_err += p.err;
      if (total_err <= target()) break;
    }
    Panel p = q.top();
    q.pop();
    double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 64.0 * eps * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen.push_back(p);
      if (q.empty()) break;
      continue;
    }
    Panel l = gk15(f, p.a, mid, bud);
    Panel r = gk15(f, mid, p.b, bud);
    total += l.value + r.value - p.value;
    total_err += l.err + r.err - p.err;
    total_abs += l.abs + r.abs - p.abs;
    q.push(l);
    q.push(r);
    if (q.size() > 2000000) break;
  }
  total = 0.0;
  total_err = 0.0;
  while (!q.empty()) {
    total += q.top().value;
    total_err += q.top().err;
    q.pop();
  }
  for (const auto& p : frozen) {
    total += p.value;
    total_err += p.err;
  }
  out.value = total;
  out.err = total_err;
  out.ok = total_err <= std::max(tol, 200.0 * eps * total_abs);
  return out;
}

// ---------------------------------------------------------------------------
// Tanh-sinh. `edge` reports the largest weighted term among the
// outermost surviving nodes, used to detect truncation at a singularity.

struct TSResult {
  Part part;
  double edge = 0.0;
};

TSResult tanh_sinh_impl(const RealFn& f, double a, double b, double tol, Budget& bud) {
  TSResult res;
  const double len = b - a;
  const double tmax = 6.5;
  auto node = [&](double t, double& wt, double& x, bool& valid) {
    double y = 0.5 * kPi * std::sinh(t);
    double ch = std::cosh(y);
    wt = 0.5 * len * 0.5 * kPi * std::cosh(t) / (ch * ch);
    if (t < 0) {
      double d = len / (1.0 + std::exp(-2.0 * y));
      x = a + d;
    } else {
      double d = len / (1.0 + std::exp(2.0 * y));
      x = b - d;
    }
    valid = x > a && x < b && wt > 0.0 && std::isfinite(wt);
  };
  double h = 1.0;
  cplx sum{};
  // term at the outermost node that survived rounding, per side
  double edge_lo = 0.0, edge_hi = 0.0, tlo = 0.0, thi = 0.0;
  auto accumulate = [&](double t) {
    double wt, x;
    bool valid;
    node(t, wt, x, valid);
    if (!valid) return;
    bud.charge(1);
    cplx v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return;
    cplx term = wt * v;
    sum += term;
    if (t < 0 && -t >= tlo) {
      tlo = -t;
      edge_lo = std::abs(term);
    } else if (t > 0 && t >= thi) {
      thi = t;
      edge_hi = std::abs(term);
    }
  };
  auto run_level = [&](double step, double offset) {
    for (double t = offset; t <= tmax; t += step) accumulate(-t);
    for (double t = offset; t <= tmax; t += step) accumulate(t);
  };
  accumulate(0.0);
  run_level(1.0, 1.0);
  cplx prev = h * sum;
  double prev_err = kInf;
  for (int level = 1; level <= 9; ++level) {
    h *= 0.5;
    run_level(2.0 * h, h);
    cplx cur = h * sum;
    double err = std::max(std::abs(cur - prev), 4e-16 * std::abs(cur));
    res.part.value = cur;
    res.part.err = err;
    res.edge = h * std::max(edge_lo, edge_hi);
    // two quiet levels in a row: the doubling of correct digits has set in
    if (level >= 3 && err <= tol && prev_err <= 10.0 * tol && res.edge <= 1e-2 * tol) {
      res.part.ok = true;
      return res;
    }
    prev = cur;
    prev_err = err;
  }
  res.part.ok = false;
  return res;
}

// ---------------------------------------------------------------------------
// Tail modes.

struct Group {
  Phase phase;
  RealFn amp;
};

std::vector<Group> group_components(const TailModel& t) {
  std::vector<Phase> shapes;
  std::vector<std::vector<std::pair<cplx, RealFn>>> members;
  for (const auto& c : t.components) {
    std::size_t k = 0;
    for (; k < shapes.size(); ++k) {
      if (shapes[k].same_shape(c.phase)) break;
    }
    if (k == shapes.size()) {
      shapes.push_back(c.phase.with_theta(0.0));
      members.emplace_back();
    }
    members[k].push_back({std::polar(1.0, c.phase.theta), c.amp});
  }
  std::vector<Group> out;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    auto m = members[k];
    RealFn amp;
    if (m.size() == 1 && m[0].first == cplx(1.0)) {
      amp = m[0].second;
    } else {
      amp = [m](double u) {
        cplx v{};
        for (const auto& [w, a] : m) v += w * a(u);
        return v;
      };
    }
    out.push_back({shapes[k], amp});
  }
  return out;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

std::vector<cplx> window(const std::vector<cplx>& s) {
  if (s.size() <= kAccelWindow) return s;
  return {s.end() - kAccelWindow, s.end()};
}

int panel_count(double len, double rate) {
  double n = std::ceil(len * std::max(rate, 1e-300) / kPi);
  if (!std::isfinite(n)) return 200000;
  return static_cast<int>(std::clamp(n, 1.0, 200000.0));
}

// Panels [X, 2X]: geometric contributions, Wynn on partial sums.
QuadResult doubling_mode(const RealFn& g, double from, double tol, Budget& bud, double rate) {
  QuadResult r;
  std::vector<cplx> sums;
  std::vector<double> mags;
  cplx S{};
  double X = from;
  cplx prev_acc{};
  bool have_prev = false;
  for (int k = 0; k < kMaxDoublings; ++k) {
    double X1 = std::max(2.0 * X, X + 1.0);
    Part p = gk_adaptive(g, X, X1, tol * 1e-3, bud, panel_count(X1 - X, rate));
    S += p.value;
    sums.push_back(S);
    mags.push_back(std::abs(p.value));
    r.doublings = k + 1;
    X = X1;
    const std::size_t n = mags.size();
    if (n >= 2 && mags[n - 1] < 1e-2 * tol && mags[n - 2] < 1e-2 * tol) {
      r.value = S;
      r.abs_error_estimate = mags[n - 1] + mags[n - 2] + p.err;
      r.status = Status::Converged;
      r.value_set = true;
      return r;
    }
    if (n < 4) continue;
    // envelope of the last contributions, robust to isolated near-zeros
    const std::size_t m = std::min<std::size_t>(n, 8);
    std::vector<double> xs, ys;
    for (std::size_t i = n - m; i < n; ++i) {
      double e = mags[i];
      if (i + 1 < n) e = std::max(e, mags[i + 1]);
      if (e <= 0.0) continue;
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(e));
    }
    double ratio = xs.size() >= 2 ? std::exp(slope_fit(xs, ys)) : 0.0;
    r.decay_exponent = std::log2(std::max(ratio, 1e-300));
    AccelResult acc = accelerate(window(sums));
    if (ratio < kRatioThreshold && have_prev) {
      double d = std::abs(acc.value - prev_acc);
      if (d <= tol && acc.error <= tol) {
        r.value = acc.value;
        r.abs_error_estimate = std::max(d, acc.error);
        r.status = Status::Converged;
        r.value_set = true;
        return r;
      }
    }
    prev_acc = acc.value;
    have_prev = true;
    if (n >= 8 && ratio >= kRatioThreshold) {
      r.status = Status::Diverged;
      r.value = S;
      r.abs_error_estimate = kInf;
      return r;
    }
  }
  r.value = sums.empty() ? cplx{} : sums.back();
  r.value_set = true;
  r.status = Status::Inconclusive;
  return r;
}

// Smallest u > cur with psi(u) = target (psi monotone on [cur, inf)).
std::optional<double> next_crossing(const Phase& ph, double cur, double target) {
  if (ph.is_linear()) return (target - ph.theta) / ph.b;
  if (ph.b == 0.0) {
    double z = (target - ph.theta) / ph.c;
    if (z <= 0.0) return std::nullopt;
    return std::pow(z, 1.0 / ph.p) - ph.shift;
  }
  auto g = [&](double u) { return ph.value(u) - target; };
  const double s0 = g(cur) < 0 ? -1.0 : 1.0;
  double lo = cur;
  double d1 = std::abs(ph.d1(cur));
  double step = d1 > 0 ? std::abs(target - ph.value(cur)) / d1 : 1.0;
  step = std::max(step, 1e-12 * std::max(1.0, std::abs(cur)));
  double hi = cur + step;
  int guard = 0;
  while (g(hi) * s0 > 0) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
    if (++guard > 200 || !std::isfinite(hi)) return std::nullopt;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double gx = g(x);
    if (gx == 0.0) return x;
    if (gx * s0 > 0) {
      lo = x;
    } else {
      hi = x;
    }
    double dx = ph.d1(x);
    double xn = dx != 0.0 ? x - gx / dx : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 4e-16 * std::abs(x) || hi - lo <= 4e-16 * std::abs(hi)) return xn;
    x = xn;
  }
  return x;
}

QuadResult lobe_mode(const RealFn& amp, const Phase& ph, double from, double tol, Budget& bud) {
  QuadResult r;
  RealFn integrand = [amp, ph](double u) { return amp(u) * std::polar(1.0, ph.value(u)); };
  double U0 = from;
  if (ph.c != 0.0) U0 = std::max(U0, -ph.shift + 1e-12 * (1.0 + std::abs(ph.shift)));
  cplx pre{};
  double pre_err = 0.0;
  if (auto st = ph.stationary_point(); st && *st + 1e-12 >= U0 - 1e-300) {
    double h = std::sqrt(kPi / std::abs(ph.d2(*st)));
    double U1 = std::max(U0, *st + h);
    if (U1 > U0) {
      double rate = std::max(std::abs(ph.d1(U0)), std::abs(ph.d1(U1)));
      Part p = gk_adaptive(integrand, U0, U1, tol * 1e-2, bud, panel_count(U1 - U0, rate));
      pre = p.value;
      pre_err = p.err;
      r.add_trace("StationaryRegion");
    }
    U0 = U1;
  }
  double d = ph.d1(U0);
  if (d == 0.0) {
    U0 += 1e-9 * (1.0 + std::abs(U0));
    d = ph.d1(U0);
  }
  const double sigma = d > 0 ? 1.0 : -1.0;
  double psi0 = ph.value(U0);
  double m = sigma > 0 ? std::floor(psi0 / kPi) + 1.0 : std::ceil(psi0 / kPi) - 1.0;

  std::vector<cplx> sums;
  std::vector<double> ends, mags;
  cplx S = pre;
  double cur = U0;
  cplx prev_acc{};
  bool have_prev = false;
  double lobe_err = pre_err;
  for (int round = 0; round <= kLobeRounds; ++round) {
    const std::size_t target = 16u << round;
    while (mags.size() < target) {
      auto nx = next_crossing(ph, cur, m * kPi);
      if (!nx || !(*nx > cur)) {
        // Phase stopped advancing: fall back to panel doubling from here.
        QuadResult rest = doubling_mode(integrand, cur, tol, bud, std::abs(ph.d1(cur)));
        rest.value += S;
        rest.lobes = static_cast<int>(mags.size());
        rest.add_trace("Doubling");
        return rest;
      }
      Part p = gk_adaptive(integrand, cur, *nx, tol * 1e-4, bud, 1);
      lobe_err += p.err;
      S += p.value;
      sums.push_back(S);
      mags.push_back(std::abs(p.value));
      ends.push_back(*nx);
      cur = *nx;
      m += sigma;
    }
    r.lobes = static_cast<int>(mags.size());
    const std::size_t n = mags.size();
    std::vector<double> xs, ys;
    double biggest = 0.0;
    for (std::size_t i = n / 2; i < n; ++i) {
      biggest = std::max(biggest, mags[i]);
      if (mags[i] > 0.0) {
        xs.push_back(std::log(ends[i]));
        ys.push_back(std::log(mags[i]));
      }
    }
    if (biggest < 1e-3 * tol) {
      r.value = S;
      r.abs_error_estimate = biggest * 2.0 + lobe_err;
      r.status = Status::Converged;
      r.value_set = true;
      r.decay_exponent = xs.size() >= 2 ? slope_fit(xs, ys) : -kInf;
      return r;
    }
    double e = slope_fit(xs, ys);
    r.decay_exponent = e;
    AccelResult acc = accelerate(window(sums));
    if (e < kDecayThreshold && have_prev) {
      double dv = std::abs(acc.value - prev_acc);
      if (dv <= tol && acc.error <= tol) {
        r.value = acc.value;
        r.abs_error_estimate = std::max({dv, acc.error, lobe_err});
        r.status = Status::Converged;
        r.value_set = true;
        return r;
      }
    }
    prev_acc = acc.value;
    have_prev = true;
    if (round == kLobeRounds) {
      if (e >= kDecayThreshold) {
        r.status = Status::Diverged;
        r.value = S;
        r.abs_error_estimate = kInf;
      } else {
        r.status = Status::Inconclusive;
        r.value = acc.value;
        r.abs_error_estimate = acc.error;
        r.value_set = true;
      }
    }
  }
  return r;
}

double osc_rate(const TailModel& t, double u) { return t.rate_at(u); }

QuadResult tail_impl(const TailModel& t, double from, double tol, Budget& bud, TailStrategy strat) {
  QuadResult r;
  if (t.vanishes()) {
    r.status = Status::Converged;
    r.abs_error_estimate = 0.0;
    r.value_set = true;
    r.add_trace("VanishingTail");
    return r;
  }
  auto groups = group_components(t);
  const double gtol = tol / static_cast<double>(groups.size());
  bool first = true;
  for (const auto& g : groups) {
    QuadResult part;
    bool doubling = g.phase.is_constant() || t.rapid || strat == TailStrategy::AbsoluteTail;
    if (doubling) {
      Phase ph = g.phase;
      RealFn amp = g.amp;
      RealFn integrand = ph.is_constant() ? amp : RealFn([amp, ph](double u) {
        return amp(u) * std::polar(1.0, ph.value(u));
      });
      double rate = ph.is_constant() ? 0.0 : std::abs(ph.d1(std::max(from, 1.0)));
      part = doubling_mode(integrand, from, gtol, bud, std::max(rate, t.oscillation));
      part.add_trace((t.abs_integrable || t.rapid) ? "AbsoluteTail" : "Doubling");
    } else {
      part = lobe_mode(g.amp, g.phase, from, gtol, bud);
      part.add_trace(g.phase.is_linear() ? "BVTail" : "ZeroPartitionExtrapolation");
    }
    r = first ? part : combine(r, part);
    first = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Core.

struct SingularEnd {
  QuadResult result;
  double len;
};

// Integral over the piece of length `len` next to the singular point p, on
// the side `dir` (+1: [p, p+len], -1: [p-len, p]).
QuadResult singular_piece(const FunctionSpec& f, double p, int dir, double len, double tol, Budget& bud) {
  QuadResult r;
  RealFn fn = [&f](double x) { return f(x); };
  double a = dir > 0 ? p : p - len, b = dir > 0 ? p + len : p;
  TSResult ts = tanh_sinh_impl(fn, a, b, tol, bud);
  if (ts.part.ok) {
    r.value = ts.part.value;
    r.abs_error_estimate = ts.part.err;
    r.status = Status::Converged;
    r.value_set = true;
    r.add_trace("TanhSinh");
    return r;
  }
  // u = 1 / |x - p|: the singularity becomes a tail at infinity.
  RealFn sub = [&f, p, dir](double u) {
    double x = p + dir / u;
    if (x == p) return cplx{};
    return safe(f(x) / (u * u));
  };
  r = doubling_mode(sub, 1.0 / len, tol, bud, 0.0);
  r.add_trace("SingularSubstitution");
  return r;
}

QuadResult pv_at_point(const FunctionSpec& f, double p, double len, double tol, Budget& bud) {
  RealFn sym = [&f, p](double u) {
    double x1 = p + 1.0 / u, x2 = p - 1.0 / u;
    if (x1 == p || x2 == p) return cplx{};
    return safe((f(x1) + f(x2)) / (u * u));
  };
  return doubling_mode(sym, 1.0 / len, tol, bud, 0.0);
}

QuadResult integrate_core(const FunctionSpec& f, double lo, double hi, double tol, Budget& bud, double rate) {
  QuadResult r;
  r.status = Status::Converged;
  r.value_set = true;
  r.abs_error_estimate = 0.0;
  if (!(hi > lo)) return r;
  std::vector<double> pts{lo, hi};
  for (double x : f.panel_points()) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto unbounded_at = [&f](double x) {
    for (const auto& s : f.singular_points()) {
      if (s.x == x && s.type == SingularType::Unbounded) return true;
    }
    return false;
  };
  const std::size_t nseg = pts.size() - 1;
  const double seg_tol = tol / static_cast<double>(nseg);
  RealFn fn = [&f](double x) { return f(x); };
  // status of the singular end pieces on each side of each point
  std::vector<Status> left_of(pts.size(), Status::Converged), right_of(pts.size(), Status::Converged);
  std::vector<double> carve(pts.size(), kInf);
  bool gk_used = false, ts_used = false;
  for (std::size_t i = 0; i < nseg; ++i) {
    double a = pts[i], b = pts[i + 1];
    bool sa = unbounded_at(a), sb = unbounded_at(b);
    double piece = std::min((b - a) / ((sa && sb) ? 2.0 : 1.0), 1.0 / std::max(1.0, rate));
    double ga = sa ? a + piece : a, gb = sb ? b - piece : b;
    if (sa) {
      QuadResult s = singular_piece(f, a, +1, piece, seg_tol / 3, bud);
      right_of[i] = s.status;
      for (const auto& t : s.strategy_trace) r.add_trace(t);
      carve[i] = std::min(carve[i], piece);
      r.value += s.value_set ? s.value : cplx{};
      r.abs_error_estimate += s.value_set ? s.abs_error_estimate : 0.0;
      if (right_of[i] == Status::Inconclusive) r.status = combine_status(r.status, Status::Inconclusive);
      ts_used = true;
    }
    if (sb) {
      QuadResult s = singular_piece(f, b, -1, piece, seg_tol / 3, bud);
      left_of[i + 1] = s.status;
      for (const auto& t : s.strategy_trace) r.add_trace(t);
      carve[i + 1] = std::min(carve[i + 1], piece);
      r.value += s.value_set ? s.value : cplx{};
      r.abs_error_estimate += s.value_set ? s.abs_error_estimate : 0.0;
      if (left_of[i + 1] == Status::Inconclusive) r.status = combine_status(r.status, Status::Inconclusive);
      ts_used = true;
    }
    if (gb > ga) {
      Part p = gk_adaptive(fn, ga, gb, seg_tol / 3, bud, panel_count(gb - ga, rate));
      r.value += p.value;
      r.abs_error_estimate += p.err;
      if (!p.ok) r.status = combine_status(r.status, Status::Inconclusive);
      gk_used = true;
    }
  }
  // Divergent endpoint singularities: only principal values can survive.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dl = left_of[i] == Status::Diverged, dr = right_of[i] == Status::Diverged;
    if (!dl && !dr) continue;
    r.value_set = false;
    if (dl && dr) {
      QuadResult pv = pv_at_point(f, pts[i], carve[i], seg_tol, bud);
      r.status = combine_status(r.status, pv.converged() ? Status::PrincipalValueOnly : Status::Diverged);
      r.add_trace(pv.converged() ? "PrincipalValueAtSingularity" : "DivergentSingularity");
    } else {
      r.status = combine_status(r.status, Status::Diverged);
      r.add_trace("DivergentSingularity");
    }
  }
  if (gk_used) r.add_trace("GaussKronrod");
  if (ts_used) r.add_trace("TanhSinh");
  return r;
}

QuadResult finish(QuadResult r, const Budget& bud) {
  r.evaluations = bud.used;
  if (r.status == Status::Diverged || r.status == Status::PrincipalValueOnly) {
    r.value_set = false;
    r.value = cplx(std::nan(""), std::nan(""));
    r.abs_error_estimate = kInf;
  }
  return r;
}

QuadResult budget_result(const Budget& bud) {
  QuadResult r;
  r.status = Status::Inconclusive;
  r.add_trace("BudgetExceeded");
  r.evaluations = bud.used;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

void QuadResult::add_trace(const std::string& tag) {
  if (std::find(strategy_trace.begin(), strategy_trace.end(), tag) == strategy_trace.end()) {
    strategy_trace.push_back(tag);
  }
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Converged:
      return "converged";
    case Status::Diverged:
      return "diverged";
    case Status::PrincipalValueOnly:
      return "pv_only";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Status status_from_name(const std::string& s) {
  if (s == "converged") return Status::Converged;
  if (s == "diverged") return Status::Diverged;
  if (s == "pv_only") return Status::PrincipalValueOnly;
  if (s == "inconclusive") return Status::Inconclusive;
  throw DomainError("unknown status '" + s + "'");
}

std::string strategy_name(TailStrategy t) {
  switch (t) {
    case TailStrategy::Auto:
      return "Auto";
    case TailStrategy::AbsoluteTail:
      return "AbsoluteTail";
    case TailStrategy::BVTail:
      return "BVTail";
    case TailStrategy::ZeroPartitionExtrapolation:
      return "ZeroPartitionExtrapolation";
    case TailStrategy::PartsTransform:
      return "PartsTransform";
  }
  return "Auto";
}

TailStrategy strategy_from_name(const std::string& s) {
  for (auto t : {TailStrategy::Auto, TailStrategy::AbsoluteTail, TailStrategy::BVTail,
                 TailStrategy::ZeroPartitionExtrapolation, TailStrategy::PartsTransform}) {
    if (strategy_name(t) == s) return t;
  }
  throw DomainError("unknown strategy '" + s + "'");
}

nlohmann::json to_json(const QuadResult& r) {
  nlohmann::json j;
  j["status"] = status_name(r.status);
  if (r.value_set) {
    j["re"] = r.value.real();
    j["im"] = r.value.imag();
    j["err_est"] = r.abs_error_estimate;
  } else {
    j["re"] = nullptr;
    j["im"] = nullptr;
    j["err_est"] = nullptr;
  }
  j["evals"] = r.evaluations;
  j["strategy_trace"] = r.strategy_trace;
  j["lobes"] = r.lobes;
  j["doublings"] = r.doublings;
  if (r.decay_exponent && std::isfinite(*r.decay_exponent)) j["decay_exponent"] = *r.decay_exponent;
  return j;
}

Status combine_status(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::Converged:
        return 0;
      case Status::Inconclusive:
        return 1;
      case Status::PrincipalValueOnly:
        return 2;
      case Status::Diverged:
        return 3;
    }
    return 1;
  };
  return rank(a) >= rank(b) ? a : b;
}

QuadResult combine(const QuadResult& a, const QuadResult& b) {
  QuadResult r;
  r.value = a.value + b.value;
  r.abs_error_estimate = a.abs_error_estimate + b.abs_error_estimate;
  r.status = combine_status(a.status, b.status);
  r.value_set = a.value_set && b.value_set;
  r.evaluations = a.evaluations + b.evaluations;
  r.strategy_trace = a.strategy_trace;
  for (const auto& t : b.strategy_trace) r.add_trace(t);
  r.lobes = a.lobes + b.lobes;
  r.doublings = a.doublings + b.doublings;
  if (a.decay_exponent && b.decay_exponent) {
    r.decay_exponent = std::max(*a.decay_exponent, *b.decay_exponent);
  } else {
    r.decay_exponent = a.decay_exponent ? a.decay_exponent : b.decay_exponent;
  }
  return r;
}

QuadResult gauss_kronrod(const RealFn& f, double a, double b, double tol, long long budget, int pieces) {
  Budget bud{0, budget};
  QuadResult r;
  try {
    double sign = 1.0;
    if (b < a) {
      std::swap(a, b);
      sign = -1.0;
    }
    Part p = gk_adaptive(f, a, b, tol, bud, pieces);
    r.value = sign * p.value;
    r.abs_error_estimate = p.err;
    r.status = p.ok ? Status::Converged : Status::Inconclusive;
    r.value_set = true;
    r.add_trace("GaussKronrod");
  } catch (const BudgetExceeded&) {
    return budget_result(bud);
  }
  return finish(r, bud);
}

QuadResult tanh_sinh(const RealFn& f, double a, double b, double tol, long long budget) {
  Budget bud{0, budget};
  QuadResult r;
  try {
    TSResult ts = tanh_sinh_impl(f, a, b, tol, bud);
    r.value = ts.part.value;
    r.abs_error_estimate = ts.part.err;
    r.status = ts.part.ok ? Status::Converged : Status::Inconclusive;
    r.value_set = true;
    r.add_trace("TanhSinh");
  } catch (const BudgetExceeded&) {
    return budget_result(bud);
  }
  return finish(r, bud);
}

QuadResult integrate_tail(const TailModel& t, double from, const QuadOptions& opts) {
  Budget bud{0, opts.budget};
  try {
    return finish(tail_impl(t, from, opts.tol, bud, opts.strategy), bud);
  } catch (const BudgetExceeded&) {
    return budget_result(bud);
  }
}

QuadResult integrate(const FunctionSpec& f, const ExtInterval& I, double tol) {
  QuadOptions o;
  o.tol = tol;
  return integrate(f, I, o);
}

QuadResult integrate(const FunctionSpec& f, const ExtInterval& I, const QuadOptions& opts) {
  if (std::isnan(I.lo) || std::isnan(I.hi) || I.lo > I.hi) throw DomainError("integrate: malformed interval");
  if (!(opts.tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  if (I.lo == kInf || I.hi == -kInf) throw DomainError("integrate: interval collapses to an infinite point");
  Budget bud{0, opts.budget};
  QuadResult r;
  r.status = Status::Converged;
  r.value_set = true;
  r.abs_error_estimate = 0.0;
  double lo = std::max(I.lo, f.support().lo), hi = std::min(I.hi, f.support().hi);
  if (!(hi > lo)) {
    r.add_trace("EmptyInterval");
    return finish(r, bud);
  }
  try {
    const bool right_inf = std::isinf(hi), left_inf = std::isinf(lo);
    auto pp = f.panel_points();
    double cr = hi, cl = lo;
    if (right_inf) {
      cr = std::max(f.right_tail().from, left_inf ? -kInf : lo);
      for (double x : pp) cr = std::max(cr, x);
    }
    if (left_inf) {
      cl = std::min(-f.left_tail().from, right_inf ? kInf : cr);
      for (double x : pp) cl = std::min(cl, x);
    }
    if (right_inf && left_inf) {
      if (cr < cl) std::swap(cr, cl);
    }
    if (!right_inf) cr = hi;
    if (!left_inf) cl = lo;
    cr = std::max(cr, cl);
    const double rate = std::max(osc_rate(f.right_tail(), std::max(cr, 0.0)),
                                 osc_rate(f.left_tail(), std::max(-cl, 0.0)));
    const int ntails = (right_inf ? 1 : 0) + (left_inf ? 1 : 0);
    const double core_tol = ntails == 0 ? opts.tol : 0.5 * opts.tol;
    const double tail_tol = ntails == 0 ? 0.0 : 0.5 * opts.tol / ntails;
    r = integrate_core(f, cl, cr, core_tol, bud, rate);
    QuadResult right, left;
    if (right_inf) {
      right = tail_impl(f.right_tail(), cr, tail_tol, bud, opts.strategy);
      r = combine(r, right);
    }
    if (left_inf) {
      left = tail_impl(f.left_tail(), -cl, tail_tol, bud, opts.strategy);
      r = combine(r, left);
    }
    if (right_inf && left_inf && right.status == Status::Diverged && left.status == Status::Diverged) {
      // Both one-sided limits fail; a symmetric limit may still exist.
      TailModel sym = f.right_tail();
      sym.components.insert(sym.components.end(), f.left_tail().components.begin(),
                            f.left_tail().components.end());
      sym.rapid = sym.abs_integrable = false;
      QuadResult pv = tail_impl(sym, std::max(cr, -cl), tail_tol, bud, opts.strategy);
      r.status = pv.converged() ? Status::PrincipalValueOnly : Status::Diverged;
      r.add_trace(pv.converged() ? "PrincipalValueOnly" : "DivergentTails");
    }
  } catch (const BudgetExceeded&) {
    return budget_result(bud);
  }
  if (r.status == Status::Converged && r.abs_error_estimate > opts.tol) r.status = Status::Inconclusive;
  return finish(r, bud);
}

QuadResult oscillatory_tail(const RealFn& A, const Phase& phi, double s, double from, double tol) {
  if (!(tol > 0.0)) throw DomainError("oscillatory_tail: tolerance must be positive");
  auto lin = phi.plus(Phase::linear(-s));
  Phase ph = *lin;
  if (ph.is_constant()) throw NonMonotonePhase("oscillatory_tail: phase is constant");
  if (auto st = ph.stationary_point(); st && *st > from) {
    throw NonMonotonePhase("oscillatory_tail: phi' - s vanishes at u = " + std::to_string(*st));
  }
  Budget bud{0, kDefaultBudget};
  try {
    QuadResult r = lobe_mode(A, ph, from, tol, bud);
    r.add_trace("ZeroPartitionExtrapolation");
    return finish(r, bud);
  } catch (const BudgetExceeded&) {
    return budget_result(bud);
  }
}

QuadResult endpoint_singularity(double gamma, double delta, double tol) {
  if (!(gamma > 0.0)) throw PreconditionError("endpoint_singularity: gamma must be positive");
  QuadResult r;
  if (!(gamma + delta + 1.0 > 0.0)) {
    r.status = Status::Diverged;
    r.add_trace("EndpointCriterion");
    return finish(r, Budget{});
  }
  // int_0^1 e^{i x^-g} x^d = (i/g) e^i - (i (g+d+1)/g) int_0^1 x^{g+d} e^{i x^-g},
  // and with u = 1/x the remainder is int_1^inf u^{-g-d-2} e^{i u^g} du.
  const double k = gamma + delta + 1.0;
  const double e = -gamma - delta - 2.0;
  QuadResult tail = oscillatory_tail([e](double u) -> cplx { return std::pow(u, e); }, Phase::power(1.0, gamma), 0.0,
                                     1.0, tol * gamma / k * 0.5);
  r = tail;
  if (!tail.value_set) return r;
  r.value = kI / gamma * std::polar(1.0, 1.0) - kI * k / gamma * tail.value;
  r.abs_error_estimate = k / gamma * tail.abs_error_estimate;
  r.add_trace("IntegrationByParts");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

FunctionSpec opaque_spec(RealFn eval, std::string label, const std::vector<SingularPoint>& singular,
                         const std::vector<double>& breakpoints, ExtInterval support) {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{label};
  d.label = std::move(label);
  d.eval = std::move(eval);
  d.singular = singular;
  d.breakpoints = breakpoints;
  d.support = support;
  d.real_valued = false;
  RealFn ev = d.eval;
  if (std::isfinite(support.hi)) {
    d.right = TailModel::zero(support.hi);
  } else {
    d.right.components.push_back({[ev](double u) { return ev(u); }, Phase{}});
  }
  if (std::isfinite(support.lo)) {
    d.left = TailModel::zero(-support.lo);
  } else {
    d.left.components.push_back({[ev](double u) { return ev(-u); }, Phase{}});
  }
  return FunctionSpec(std::move(d));
}

}  // namespace

FubiniReport fubini_check(const FunctionSpec& f, const Bivariate& g, const ExtInterval& A, const ExtInterval& B,
                          double tol) {
  FubiniReport rep;
  const double inner_tol = tol / 100.0;
  auto worst = std::make_shared<Status>(Status::Converged);

  auto slice_y = [&g](double x) -> FunctionSpec {
    if (g.slice_y) return g.slice_y(x);
    FunctionSpec::Data d;
    d.kind = kind::UserCallable{"slice"};
    d.label = "g(x,.)";
    auto ev = g.eval;
    d.eval = [ev, x](double y) { return ev(x, y); };
    d.real_valued = false;
    d.right.from = d.left.from = 1.0;
    d.right.components.push_back({[ev, x](double u) { return ev(x, u); }, Phase{}});
    d.left.components.push_back({[ev, x](double u) { return ev(x, -u); }, Phase{}});
    return FunctionSpec(std::move(d));
  };
  auto slice_x = [&g](double y) -> FunctionSpec {
    if (g.slice_x) return g.slice_x(y);
    FunctionSpec::Data d;
    d.kind = kind::UserCallable{"slice"};
    d.label = "g(.,y)";
    auto ev = g.eval;
    d.eval = [ev, y](double x) { return ev(x, y); };
    d.real_valued = false;
    d.right.from = d.left.from = 1.0;
    d.right.components.push_back({[ev, y](double u) { return ev(u, y); }, Phase{}});
    d.left.components.push_back({[ev, y](double u) { return ev(-u, y); }, Phase{}});
    return FunctionSpec(std::move(d));
  };

  // I1: x outside.
  RealFn outer1 = [f, slice_y, B, inner_tol, worst](double x) -> cplx {
    cplx fx = f(x);
    if (fx == 0.0) return 0.0;
    QuadResult in = integrate(slice_y(x), B, inner_tol);
#pragma omp critical(oscint_fubini)
    *worst = combine_status(*worst, in.status);
    return in.value_set ? fx * in.value : cplx{};
  };
  FunctionSpec F1 = opaque_spec(outer1, "fubini-outer-x", f.singular_points(), f.breakpoints(),
                                {std::max(A.lo, f.support().lo), std::min(A.hi, f.support().hi)});
  rep.I1 = integrate(F1, A, tol);
  rep.I1.status = combine_status(rep.I1.status, *worst);

  *worst = Status::Converged;
  RealFn outer2 = [f, slice_x, A, inner_tol, worst](double y) -> cplx {
    QuadResult in = integrate(multiply(f, slice_x(y)), A, inner_tol);
#pragma omp critical(oscint_fubini)
    *worst = combine_status(*worst, in.status);
    return in.value_set ? in.value : cplx{};
  };
  FunctionSpec F2 = opaque_spec(outer2, "fubini-outer-y", {}, g.y_breakpoints, B);
  rep.I2 = integrate(F2, B, tol);
  rep.I2.status = combine_status(rep.I2.status, *worst);

  rep.agree = rep.I1.converged() && rep.I2.converged() && std::abs(rep.I1.value - rep.I2.value) <= kSafetyFactor * tol;
  return rep;
}

}  // namespace oscint
