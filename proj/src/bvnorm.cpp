#include "oscint/bvnorm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace oscint {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rvar(cplx a, cplx b) { return std::abs(a.real() - b.real()) + std::abs(a.imag() - b.imag()); }

const TailModel& tail_of(const FunctionSpec& g, int side) { return side > 0 ? g.right_tail() : g.left_tail(); }

// g(+-inf); caller has checked boundedness.
cplx tail_limit(const FunctionSpec& g, int side) {
  const TailModel& t = tail_of(g, side);
  if (t.vanishes() || t.limit_zero) return 0.0;
  return g(side * 1e12);
}

bool tail_blows_up(const FunctionSpec& g, int side) {
  const TailModel& t = tail_of(g, side);
  return !t.vanishes() && !t.bounded && !t.limit_zero;
}

// |A| ~ u^e against psi' ~ u^{p-1}: V ~ int u^{e+p-1} du diverges when e + p >= 0
bool tail_oscillation_unbounded(const FunctionSpec& g, int side) {
  const TailModel& t = tail_of(g, side);
  if (t.vanishes() || t.bv || t.rapid || !t.decay_exponent) return false;
  for (const auto& c : t.components) {
    const Phase& ph = c.phase;
    if (ph.is_constant()) continue;
    double p = ph.c == 0.0 ? 1.0 : (ph.b != 0.0 ? std::max(ph.p, 1.0) : ph.p);
    if (*t.decay_exponent + p >= 0.0) return true;
  }
  return false;
}

bool has_unbounded_point(const FunctionSpec& g, const ExtInterval& I) {
  for (const auto& s : g.singular_points()) {
    if (s.type == SingularType::Unbounded && s.x >= I.lo && s.x <= I.hi) return true;
  }
  return false;
}

std::vector<double> interior_points(const FunctionSpec& g, double lo, double hi) {
  std::vector<double> v;
  for (double p : g.panel_points()) {
    if (p > lo && p < hi) v.push_back(p);
  }
  return v;
}

double skeleton_reach(const FunctionSpec& g) {
  double T = std::max({1.0, g.right_tail().from, g.left_tail().from});
  for (double p : g.panel_points()) T = std::max(T, std::abs(p) + 1.0);
  return T;
}

// Monotone between consecutive skeleton points; exact.
BVProfile skeleton_route(const FunctionSpec& g, const ExtInterval& I) {
  BVProfile r;
  r.interval = I;
  r.route = VariationRoute::Skeleton;
  r.exact = true;

  double T = skeleton_reach(g);
  double wl = I.finite() || std::isfinite(I.lo) ? I.lo : -T;
  double wr = std::isfinite(I.hi) ? I.hi : T;
  if (!std::isfinite(I.lo)) wl = std::min(wl, -T);
  std::vector<double> pts = interior_points(g, I.lo, I.hi);
  for (double c : g.critical_points(std::isfinite(I.lo) ? I.lo : -1e300, std::isfinite(I.hi) ? I.hi : 1e300)) {
    pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (!pts.empty()) {
    if (!std::isfinite(I.lo)) wl = std::min(wl, pts.front() - 1.0);
    if (!std::isfinite(I.hi)) wr = std::max(wr, pts.back() + 1.0);
  }
  // Skeleton nodes; infinite ends get an extra finite node beyond every point.
  std::vector<double> nodes;
  nodes.push_back(std::isfinite(I.lo) ? I.lo : wl);
  for (double p : pts) {
    if (p > nodes.back()) nodes.push_back(p);
  }
  double last = std::isfinite(I.hi) ? I.hi : wr;
  if (last > nodes.back()) nodes.push_back(last);

  auto right_of = [&](double x) { return g.side_limit(x, +1); };
  auto left_of = [&](double x) { return g.side_limit(x, -1); };

  double inner = 0.0, inner_rc = 0.0;
  double inf_abs = kInf;
  auto note_abs = [&](cplx v) { inf_abs = std::min(inf_abs, std::abs(v)); };

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    cplx a = right_of(nodes[i]);
    cplx b = left_of(nodes[i + 1]);
    double d = rvar(a, b);
    inner += d;
    inner_rc += d;
    int dir = b.real() > a.real() ? 1 : (b.real() < a.real() ? -1 : 0);
    r.monotone_pieces.push_back({nodes[i], nodes[i + 1], dir});
    if (a.real() * b.real() < 0.0) {
      inf_abs = 0.0;
    } else {
      note_abs(a);
      note_abs(b);
    }
  }
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    double x = nodes[i];
    cplx l = left_of(x), v = g(x), rr = right_of(x);
    inner += rvar(l, v) + rvar(v, rr);
    inner_rc += rvar(l, rr);
    note_abs(v);
  }

  // Tails: monotone beyond the last node towards the limit.
  cplx left_end, right_end;
  double edge = 0.0;
  if (std::isfinite(I.lo)) {
    left_end = right_of(I.lo);
    cplx v = g(I.lo);
    edge += rvar(v, left_end);
    note_abs(v);
  } else {
    left_end = tail_limit(g, -1);
    cplx b = right_of(nodes.front());
    double d = rvar(left_end, b);
    inner += d;
    inner_rc += d;
    r.monotone_pieces.insert(r.monotone_pieces.begin(),
                             {-kInf, nodes.front(), b.real() > left_end.real() ? 1 : (b.real() < left_end.real() ? -1 : 0)});
    if (left_end.real() * b.real() < 0.0) inf_abs = 0.0;
    note_abs(left_end);
  }
  if (std::isfinite(I.hi)) {
    right_end = left_of(I.hi);
    cplx v = g(I.hi);
    edge += rvar(right_end, v);
    note_abs(v);
  } else {
    right_end = tail_limit(g, +1);
    cplx a = left_of(nodes.back());
    double d = rvar(a, right_end);
    inner += d;
    inner_rc += d;
    r.monotone_pieces.push_back(
        {nodes.back(), kInf, right_end.real() > a.real() ? 1 : (right_end.real() < a.real() ? -1 : 0)});
    if (a.real() * right_end.real() < 0.0) inf_abs = 0.0;
    note_abs(right_end);
  }
  if (nodes.size() == 1 && std::isfinite(I.lo) && std::isfinite(I.hi)) note_abs(g(I.lo));

  r.variation = inner + edge;
  r.normalized_variation = inner_rc + std::abs(right_end);
  r.inf_abs = inf_abs;
  r.left_value = left_end;
  r.right_value = right_end;
  return r;
}

// Parameter map: identity on finite intervals, x = tan(t) otherwise.
struct ParamMap {
  bool tan_map = false;
  double ta = 0.0, tb = 0.0;
  double x(double t) const { return tan_map ? std::tan(t) : t; }
};

ParamMap param_map(const ExtInterval& I) {
  ParamMap m;
  if (I.finite()) {
    m.ta = I.lo;
    m.tb = I.hi;
  } else {
    m.tan_map = true;
    m.ta = std::isfinite(I.lo) ? std::atan(I.lo) : -M_PI / 2;
    m.tb = std::isfinite(I.hi) ? std::atan(I.hi) : M_PI / 2;
  }
  return m;
}

cplx end_value(const FunctionSpec& g, const ExtInterval& I, int side) {
  if (side < 0) return std::isfinite(I.lo) ? g.side_limit(I.lo, +1) : tail_limit(g, -1);
  return std::isfinite(I.hi) ? g.side_limit(I.hi, -1) : tail_limit(g, +1);
}

double endpoint_anomaly(const FunctionSpec& g, const ExtInterval& I, cplx left_end, cplx right_end) {
  double e = 0.0;
  if (std::isfinite(I.lo)) e += rvar(g(I.lo), left_end);
  if (std::isfinite(I.hi)) e += rvar(right_end, g(I.hi));
  return e;
}

// Samples |g| on an interior grid and reports whether a real g changes sign.
double sampled_inf(const FunctionSpec& g, const ExtInterval& I, int n) {
  ParamMap m = param_map(I);
  double best = std::min(std::abs(end_value(g, I, -1)), std::abs(end_value(g, I, +1)));
  if (std::isfinite(I.lo)) best = std::min(best, std::abs(g(I.lo)));
  if (std::isfinite(I.hi)) best = std::min(best, std::abs(g(I.hi)));
  double prev = kNaN;
  for (int j = 1; j < n; ++j) {
    double t = m.ta + (m.tb - m.ta) * j / n;
    cplx v = g(m.x(t));
    best = std::min(best, std::abs(v));
    if (g.real_valued() && std::isfinite(prev) && prev * v.real() < 0.0) return 0.0;
    prev = v.real();
  }
  return best;
}

BVProfile refinement_route(const FunctionSpec& g, const ExtInterval& I) {
  BVProfile r;
  r.interval = I;
  r.route = VariationRoute::Refinement;
  ParamMap m = param_map(I);
  cplx left_end = end_value(g, I, -1), right_end = end_value(g, I, +1);

  int n = 256;
  std::vector<cplx> vals(n + 1);
  auto fill = [&](std::vector<cplx>& v, int count, int stride, int offset) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (int j = offset; j < count; j += stride) {
      try {
        double t = m.ta + (m.tb - m.ta) * j / count;
        v[j] = g(m.x(t));
      } catch (...) {
#pragma omp critical
        err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  };
  fill(vals, n, 1, 1);
  vals[0] = left_end;
  vals[n] = right_end;
  auto total = [](const std::vector<cplx>& v) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) s += rvar(v[j], v[j + 1]);
    return s;
  };
  double V = total(vals);
  double prev_inc = kNaN;
  int growing = 0;
  bool converged = false;
  for (int depth = 9; depth <= 20; ++depth) {
    std::vector<cplx> next(2 * n + 1);
    for (int j = 0; j <= n; ++j) next[2 * j] = vals[j];
    fill(next, 2 * n, 2, 1);
    vals.swap(next);
    n *= 2;
    double Vn = total(vals);
    double inc = Vn - V;
    V = Vn;
    if (std::abs(inc) <= 1e-10 * (1.0 + V)) {
      converged = true;
      break;
    }
    if (std::isfinite(prev_inc) && inc > 1e-6 * (1.0 + V) && inc > 0.8 * prev_inc) {
      ++growing;
    } else {
      growing = 0;
    }
    if (growing >= 4) {
      throw UnboundedVariation("variation of '" + g.label() + "' keeps growing under refinement (" +
                               std::to_string(V) + " at " + std::to_string(n) + " panels)");
    }
    prev_inc = inc;
  }
  r.exact = false;  // converged or not, a polygonal lower bound
  (void)converged;
  double best = std::min(std::abs(left_end), std::abs(right_end));
  for (int j = 1; j < n; ++j) {
    best = std::min(best, std::abs(vals[j]));
    if (g.real_valued() && vals[j - 1].real() * vals[j].real() < 0.0) best = 0.0;
  }
  r.inf_abs = best;
  r.variation = V + endpoint_anomaly(g, I, left_end, right_end);
  r.normalized_variation = V + std::abs(right_end);
  r.left_value = left_end;
  r.right_value = right_end;
  return r;
}

BVProfile derivative_route(const FunctionSpec& g, const ExtInterval& I) {
  BVProfile r;
  r.interval = I;
  r.route = VariationRoute::Derivative;
  FunctionSpec dg = abs_value(derivative_of(g));
  // |g'| has a kink at every zero; 1e-7 keeps oscillatory tails affordable.
  QuadOptions o;
  o.tol = 1e-7;
  o.budget = 4'000'000;
  QuadResult q = integrate(dg, I, o);
  if (q.status == Status::Diverged) {
    r.variation = r.normalized_variation = kInf;
    r.exact = true;
  } else {
    double jumps = 0.0;
    for (const auto& s : g.singular_points()) {
      if (s.type == SingularType::Jump && s.x > I.lo && s.x < I.hi) {
        jumps += rvar(g.side_limit(s.x, -1), g.side_limit(s.x, +1));
      }
    }
    cplx left_end = end_value(g, I, -1), right_end = end_value(g, I, +1);
    double inner = std::real(q.value) + jumps;
    r.variation = inner + endpoint_anomaly(g, I, left_end, right_end);
    r.normalized_variation = inner + std::abs(right_end);
    r.left_value = left_end;
    r.right_value = right_end;
    r.exact = false;
    if (!q.converged()) r.variation = r.normalized_variation = kNaN;
  }
  r.inf_abs = sampled_inf(g, I, 4096);
  return r;
}

// Skeleton on a finite window plus dyadic blocks out to infinity on each
// oscillating side; the block variations are extrapolated geometrically.
BVProfile skeleton_dyadic(const FunctionSpec& g, const ExtInterval& I) {
  double T = skeleton_reach(g);
  double cl = std::isfinite(I.lo) ? I.lo : std::min(-T, std::isfinite(I.hi) ? I.hi - 1.0 : -T);
  double cr = std::isfinite(I.hi) ? I.hi : std::max(T, std::isfinite(I.lo) ? I.lo + 1.0 : T);
  BVProfile r = skeleton_route(g, {cl, cr});
  r.interval = I;
  r.exact = false;
  double total = r.variation, norm = r.normalized_variation;
  if (!std::isfinite(I.hi)) norm -= std::abs(r.right_value);

  auto side_tail = [&](int side) -> double {
    double X = side > 0 ? cr : -cl;
    double sum = 0.0, prev = kNaN, prev_ratio = kNaN, rest = kNaN;
    int stable = 0;
    long points = 0;
    for (int k = 0; k < 40; ++k) {
      double X1 = 2.0 * X;
      ExtInterval blk = side > 0 ? ExtInterval{X, X1} : ExtInterval{-X1, -X};
      points += static_cast<long>(g.critical_points(blk.lo, blk.hi).size());
      if (points > 2'000'000) break;
      BVProfile b = skeleton_route(g, blk);
      double inc = b.variation;
      r.inf_abs = std::min(r.inf_abs, b.inf_abs);
      sum += inc;
      X = X1;
      if (inc <= 1e-15 * (1.0 + sum)) return sum;
      if (std::isfinite(prev) && prev > 0.0) {
        double ratio = inc / prev;
        stable = std::isfinite(prev_ratio) && std::abs(ratio - prev_ratio) < 0.05 ? stable + 1 : 0;
        if (stable >= 3) {
          if (ratio >= 0.95) return kInf;
          rest = inc * ratio / (1.0 - ratio);
          if (rest <= 1e-10 * (1.0 + sum) || stable >= 5) return sum + rest;
        }
        prev_ratio = ratio;
      }
      prev = inc;
    }
    if (std::isfinite(rest)) return sum + rest;
    throw UnboundedVariation("variation of '" + g.label() + "' did not settle over dyadic blocks");
  };
  if (!std::isfinite(I.lo)) {
    double t = side_tail(-1);
    total += t;
    norm += t;
    r.left_value = tail_limit(g, -1);
    r.inf_abs = std::min(r.inf_abs, std::abs(r.left_value));
  }
  if (!std::isfinite(I.hi)) {
    double t = side_tail(+1);
    total += t;
    r.right_value = tail_limit(g, +1);
    norm += t + std::abs(r.right_value);
    r.inf_abs = std::min(r.inf_abs, std::abs(r.right_value));
  }
  r.variation = total;
  r.normalized_variation = std::isfinite(total) ? norm : kInf;
  return r;
}

BVProfile real_variation(const FunctionSpec& g, const ExtInterval& I) {
  bool tails_ok = true;
  if (!std::isfinite(I.lo)) tails_ok = tails_ok && (g.left_tail().vanishes() || g.left_tail().bv);
  if (!std::isfinite(I.hi)) tails_ok = tails_ok && (g.right_tail().vanishes() || g.right_tail().bv);
  if (g.has_critical_points() && tails_ok) return skeleton_route(g, I);
  if (g.has_critical_points()) return skeleton_dyadic(g, I);
  if (g.has_derivative()) return derivative_route(g, I);
  return refinement_route(g, I);
}

BVProfile infinite_profile(const FunctionSpec& g, const ExtInterval& I) {
  BVProfile r;
  r.interval = I;
  r.variation = r.normalized_variation = kInf;
  r.exact = true;
  r.inf_abs = sampled_inf(g, I, 4096);
  return r;
}

}  // namespace

BVProfile variation(const FunctionSpec& g, const ExtInterval& I) {
  if (!(I.lo < I.hi)) throw PreconditionError("variation: empty interval");
  if (has_unbounded_point(g, I)) return infinite_profile(g, I);
  if ((!std::isfinite(I.lo) && tail_blows_up(g, -1)) || (!std::isfinite(I.hi) && tail_blows_up(g, +1))) {
    return infinite_profile(g, I);
  }
  if ((!std::isfinite(I.lo) && tail_oscillation_unbounded(g, -1)) ||
      (!std::isfinite(I.hi) && tail_oscillation_unbounded(g, +1))) {
    return infinite_profile(g, I);
  }
  if (g.real_valued()) return real_variation(g, I);

  BVProfile re = real_variation(real_part(g), I);
  BVProfile im = real_variation(imag_part(g), I);
  BVProfile r;
  r.interval = I;
  r.route = VariationRoute::Split;
  r.variation = re.variation + im.variation;
  r.exact = re.exact && im.exact;
  r.left_value = cplx(re.left_value.real(), im.left_value.real());
  r.right_value = cplx(re.right_value.real(), im.right_value.real());
  // Right-continuous parts plus |g(b-)| once (not per component).
  r.normalized_variation = (re.normalized_variation - std::abs(re.right_value)) +
                           (im.normalized_variation - std::abs(im.right_value)) + std::abs(r.right_value);
  r.inf_abs = sampled_inf(g, I, 4096);
  return r;
}

BVProfile normalized_profile(const FunctionSpec& g, const ExtInterval& I) {
  BVProfile r = variation(g, I);
  r.normalized = true;
  r.variation = r.normalized_variation;
  r.inf_abs = 0.0;  // g~(b) = 0
  for (auto& p : r.monotone_pieces) p.direction = 0;
  r.monotone_pieces.clear();
  return r;
}

// ---------------------------------------------------------------------------
// Alexiewicz norm.

namespace {

struct FPoint {
  double x;
  cplx F;
};

double osc_rate(const TailModel& t, double u) {
  double rate = 0.0;
  for (const auto& c : t.components) {
    if (!c.phase.is_constant()) rate = std::max(rate, std::abs(c.phase.d1(std::max(u, t.from))));
  }
  return rate;
}

struct Scan {
  std::vector<FPoint> pts;  // F relative to the left end, on (a, b]
  Status status = Status::Converged;
  double error = 0.0;
};

// F(x) - F(a) on a grid over (a, b]; for real f, zeros of f (extrema of F) are added.
Scan scan(const FunctionSpec& f, double a, double b, double rate, double tol) {
  Scan out;
  if (!(b > a)) return out;
  int n = static_cast<int>(std::clamp(std::ceil((b - a) * std::max(rate, 0.25) * 4.0 / M_PI), 16.0, 100000.0));
  std::vector<double> nodes;
  nodes.reserve(n + 8);
  for (int j = 0; j <= n; ++j) nodes.push_back(a + (b - a) * j / n);
  nodes.back() = b;
  for (double p : interior_points(f, a, b)) nodes.push_back(p);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const std::size_t m = nodes.size() - 1;
  const double piece_tol = std::max(tol / static_cast<double>(m), 1e-15);
  const bool real = f.real_valued();

  struct Piece {
    bool has_root = false;
    double root = 0.0;
    cplx to_root{}, rest{};
    Status status = Status::Converged;
    double err = 0.0;
  };
  std::vector<Piece> pieces(m);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < m; ++i) {
    try {
      double lo = nodes[i], hi = nodes[i + 1];
      Piece& pc = pieces[i];
      if (real) {
        double eps = 1e-9 * (hi - lo);
        double fl = f(lo + eps).real(), fh = f(hi - eps).real();
        if (fl * fh < 0.0) {
          double x0 = lo + eps, x1 = hi - eps;
          for (int it = 0; it < 60; ++it) {
            double xm = 0.5 * (x0 + x1);
            double fm = f(xm).real();
            if ((fm < 0.0) == (fl < 0.0)) {
              x0 = xm;
            } else {
              x1 = xm;
            }
          }
          pc.has_root = true;
          pc.root = 0.5 * (x0 + x1);
        }
      }
      QuadOptions o;
      o.tol = piece_tol;
      if (pc.has_root) {
        QuadResult q1 = integrate(f, {lo, pc.root}, o);
        QuadResult q2 = integrate(f, {pc.root, hi}, o);
        pc.to_root = q1.value;
        pc.rest = q2.value;
        pc.status = combine_status(q1.status, q2.status);
        pc.err = q1.abs_error_estimate + q2.abs_error_estimate;
      } else {
        QuadResult q = integrate(f, {lo, hi}, o);
        pc.rest = q.value;
        pc.status = q.status;
        pc.err = q.abs_error_estimate;
      }
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  cplx F = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Piece& pc = pieces[i];
    if (pc.has_root) {
      out.pts.push_back({pc.root, F + pc.to_root});
      F += pc.to_root + pc.rest;
    } else {
      F += pc.rest;
    }
    out.pts.push_back({nodes[i + 1], F});
    out.status = combine_status(out.status, pc.status);
    out.error += pc.err;
  }
  return out;
}

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Diameter of a planar point set: convex hull, then all hull pairs.
double diameter(std::vector<cplx> p) {
  if (p.size() < 2) return 0.0;
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0.0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k > 1 ? k - 1 : k);
  double d = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, std::abs(h[i] - h[j]));
  }
  return d;
}

double spread(const std::vector<FPoint>& pts, bool real) {
  if (real) {
    double lo = kInf, hi = -kInf;
    for (const auto& p : pts) {
      lo = std::min(lo, p.F.real());
      hi = std::max(hi, p.F.real());
    }
    return pts.empty() ? 0.0 : hi - lo;
  }
  std::vector<cplx> v;
  v.reserve(pts.size());
  for (const auto& p : pts) v.push_back(p.F);
  return diameter(std::move(v));
}

// Extends the point set through dyadic bands of one tail until the remaining
// oscillation of F about its limit cannot change the diameter.
Status extend_tail(const FunctionSpec& f, int side, double start, cplx F_start, cplx F_limit, bool real, double tol,
                   std::vector<FPoint>& pts) {
  const TailModel& t = tail_of(f, side);
  double X = std::max(start, 1.0);
  cplx F_edge = F_start;
  Status st = Status::Converged;
  double prev_r = kInf;
  for (int band = 0; band < 60; ++band) {
    double rate = osc_rate(t, 2.0 * X);
    Scan s;
    if (side > 0) {
      s = scan(f, X, 2.0 * X, rate, tol);
      for (auto& p : s.pts) p.F += F_edge;
      F_edge = s.pts.empty() ? F_edge : s.pts.back().F;
    } else {
      s = scan(f, -2.0 * X, -X, rate, tol);
      // Relative to -2X; shift so that F(-X) = F_edge.
      cplx total = s.pts.empty() ? cplx(0.0) : s.pts.back().F;
      for (auto& p : s.pts) p.F = F_edge - (total - p.F);
      F_edge = F_edge - total;
      s.pts.push_back({-2.0 * X, F_edge});
    }
    st = combine_status(st, s.status);
    double r = std::abs(F_edge - F_limit);
    double far = 0.0;
    for (const auto& p : s.pts) r = std::max(r, std::abs(p.F - F_limit));
    pts.insert(pts.end(), s.pts.begin(), s.pts.end());
    for (const auto& p : pts) far = std::max(far, std::abs(p.F - F_limit));
    double D = spread(pts, real);
    if (band >= 1 && r <= prev_r && far + r <= D + tol) return st;
    prev_r = r;
    X *= 2.0;
  }
  return combine_status(st, Status::Inconclusive);
}

}  // namespace

AlexiewiczResult alexiewicz(const FunctionSpec& f, const ExtInterval& I, double tol) {
  if (!(I.lo < I.hi)) throw PreconditionError("alexiewicz: empty interval");
  AlexiewiczResult res;
  const bool real = f.real_valued();
  double T = skeleton_reach(f);
  double cl = std::isfinite(I.lo) ? I.lo : -T;
  double cr = std::isfinite(I.hi) ? I.hi : T;
  if (std::isfinite(I.lo) && !std::isfinite(I.hi)) cr = std::max(cr, cl + 1.0);
  if (!std::isfinite(I.lo) && std::isfinite(I.hi)) cl = std::min(cl, cr - 1.0);

  std::vector<FPoint> pts;
  cplx L = 0.0;
  Status st = Status::Converged;
  if (!std::isfinite(I.lo)) {
    QuadResult q = integrate(f, {-kInf, cl}, tol / 4);
    if (!q.converged()) {
      res.status = q.status;
      res.norm = q.status == Status::Inconclusive ? kNaN : kInf;
      return res;
    }
    L = q.value;
    pts.push_back({-kInf, 0.0});
  }
  pts.push_back({cl, L});
  double rate = std::max(osc_rate(f.right_tail(), 1.0), osc_rate(f.left_tail(), 1.0));
  Scan core = scan(f, cl, cr, rate, tol / 4);
  st = combine_status(st, core.status);
  for (auto& p : core.pts) pts.push_back({p.x, p.F + L});
  cplx F_cr = pts.back().F;

  if (!std::isfinite(I.hi)) {
    QuadResult q = integrate(f, {cr, kInf}, tol / 4);
    if (!q.converged()) {
      res.status = q.status;
      res.norm = q.status == Status::Inconclusive ? kNaN : kInf;
      return res;
    }
    cplx F_inf = F_cr + q.value;
    st = combine_status(st, extend_tail(f, +1, cr, F_cr, F_inf, real, tol, pts));
    pts.push_back({kInf, F_inf});
  }
  if (!std::isfinite(I.lo)) {
    st = combine_status(st, extend_tail(f, -1, -cl, L, 0.0, real, tol, pts));
  }

  res.grid_points = pts.size();
  res.norm = spread(pts, real);
  res.status = st;
  if (real) {
    auto mm = std::minmax_element(pts.begin(), pts.end(),
                                  [](const FPoint& a, const FPoint& b) { return a.F.real() < b.F.real(); });
    res.argmin = mm.first->x;
    res.argmax = mm.second->x;
  }
  return res;
}

double alexiewicz_norm(const FunctionSpec& f, const ExtInterval& I, double tol) {
  AlexiewiczResult r = alexiewicz(f, I, tol);
  if (r.status == Status::Diverged || r.status == Status::PrincipalValueOnly) return kNaN;
  return r.norm;
}

ProductBound product_bound(const FunctionSpec& f, const FunctionSpec& g, const ExtInterval& I, double tol) {
  ProductBound b;
  QuadResult If = integrate(f, I, tol);
  if (!If.converged()) throw PreconditionError("product_bound: integral of '" + f.label() + "' is " + status_name(If.status));
  AlexiewiczResult nf = alexiewicz(f, I, tol);
  BVProfile pg = variation(g, I);
  b.integral_f = std::abs(If.value);
  b.norm_f = nf.norm;
  b.variation_g = pg.variation;
  b.inf_g = pg.inf_abs;
  b.normalized_variation_g = pg.normalized_variation;
  b.bound = b.integral_f * b.inf_g + b.norm_f * b.variation_g;
  b.normalized_bound = b.norm_f * b.normalized_variation_g;
  b.integral_fg = integrate(multiply(f, g), I, tol);
  return b;
}

}  // namespace oscint
