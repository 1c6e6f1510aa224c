#include "oscint/function_spec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace oscint {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<SingularPoint> merge_singular(const std::vector<SingularPoint>& a,
                                          const std::vector<SingularPoint>& b) {
  std::vector<SingularPoint> out = a;
  for (const auto& p : b) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SingularPoint& q) { return q.x == p.x; });
    if (it == out.end()) {
      out.push_back(p);
    } else if (p.type == SingularType::Unbounded || it->type == SingularType::Unbounded) {
      it->type = SingularType::Unbounded;
    } else {
      it->jump += p.jump;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
  return out;
}

// Roots of a real derivative on [lo, hi] by sign scan and bisection.
std::vector<double> scan_roots(const std::function<double(double)>& g, double lo, double hi, int samples) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  double h = (hi - lo) / samples;
  double x0 = lo;
  double g0 = g(x0);
  for (int i = 1; i <= samples; ++i) {
    double x1 = (i == samples) ? hi : lo + i * h;
    double g1 = g(x1);
    if (g0 == 0.0 && i > 1) {
      roots.push_back(x0);
    } else if (g0 * g1 < 0.0) {
      double a = x0, b = x1, ga = g0;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        double m = 0.5 * (a + b);
        double gm = g(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if (ga * gm < 0.0) {
          b = m;
        } else {
          a = m;
          ga = gm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    g0 = g1;
  }
  return roots;
}

TailModel map_tail(const TailModel& t, const std::function<OscComponent(const OscComponent&)>& fn) {
  TailModel r = t;
  r.components.clear();
  for (const auto& c : t.components) r.components.push_back(fn(c));
  return r;
}

// Opaque tail: single zero-phase component evaluating f directly.
TailModel opaque_tail(const RealFn& f, int side, double from, double rate = 0.0) {
  TailModel t;
  t.from = from;
  if (side > 0) {
    t.components.push_back({[f](double u) { return f(u); }, Phase{}});
  } else {
    t.components.push_back({[f](double u) { return f(-u); }, Phase{}});
  }
  t.oscillation = rate;
  return t;
}

FunctionSpec::Data base_data(Kind k, std::string label) {
  FunctionSpec::Data d;
  d.kind = std::move(k);
  d.label = std::move(label);
  return d;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

void CoeffSeq::validate() const {
  if (a.size() != b.size()) throw PreconditionError("CoeffSeq: a and b differ in length");
  for (double v : a) {
    if (!(v > 0.0)) throw PreconditionError("CoeffSeq: coefficients a_n must be positive");
  }
}

double Piece::value(double x) const {
  const auto& q = params;
  switch (form) {
    case PieceForm::Const:
      return q.at(0);
    case PieceForm::Poly: {
      double v = 0.0;
      for (auto it = q.rbegin(); it != q.rend(); ++it) v = v * x + *it;
      return v;
    }
    case PieceForm::Exp:
      return q.at(0) * std::exp(q.at(1) * x);
    case PieceForm::Sin:
      return q.at(0) * std::sin(q.at(1) * x + q.at(2));
    case PieceForm::Cos:
      return q.at(0) * std::cos(q.at(1) * x + q.at(2));
  }
  return 0.0;
}

double Piece::derivative(double x) const {
  const auto& q = params;
  switch (form) {
    case PieceForm::Const:
      return 0.0;
    case PieceForm::Poly: {
      double v = 0.0;
      for (std::size_t k = q.size(); k-- > 1;) v = v * x + static_cast<double>(k) * q[k];
      return v;
    }
    case PieceForm::Exp:
      return q.at(0) * q.at(1) * std::exp(q.at(1) * x);
    case PieceForm::Sin:
      return q.at(0) * q.at(1) * std::cos(q.at(1) * x + q.at(2));
    case PieceForm::Cos:
      return -q.at(0) * q.at(1) * std::sin(q.at(1) * x + q.at(2));
  }
  return 0.0;
}

std::vector<double> Piece::critical_points() const {
  std::vector<double> out;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // Unbounded trigonometric pieces have infinitely many turning points;
    // callers only request finite windows through FunctionSpec::critical_points.
    if (form == PieceForm::Sin || form == PieceForm::Cos) return out;
  }
  switch (form) {
    case PieceForm::Const:
    case PieceForm::Exp:
      break;
    case PieceForm::Poly: {
      if (params.size() < 3) break;
      double a = std::isfinite(lo) ? lo : -1e3;
      double b = std::isfinite(hi) ? hi : 1e3;
      out = scan_roots([this](double x) { return derivative(x); }, a, b, 4096);
      break;
    }
    case PieceForm::Sin:
    case PieceForm::Cos: {
      double w = params.at(1);
      if (w == 0.0) break;
      double ph = params.at(2) + (form == PieceForm::Cos ? kPi / 2 : 0.0);
      // turning points: w x + ph = pi/2 + k pi
      double k0 = std::ceil(((w > 0 ? lo : hi) * w + ph - kPi / 2) / kPi);
      for (double k = k0;; k += 1.0) {
        double x = (kPi / 2 + k * kPi - ph) / w;
        if (x < lo || x > hi) {
          if ((w > 0 && x > hi) || (w < 0 && x < lo)) break;
          continue;
        }
        out.push_back(x);
        if (out.size() > 1000000) break;
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string kind_name(const Kind& k) {
  struct V {
    std::string operator()(const kind::PowerSigned&) const { return "power_signed"; }
    std::string operator()(const kind::Chirp&) const { return "chirp"; }
    std::string operator()(const kind::SinOverAbs&) const { return "sin_over_abs"; }
    std::string operator()(const kind::RationalOdd&) const { return "rational_odd"; }
    std::string operator()(const kind::GaussEnvelope&) const { return "gauss"; }
    std::string operator()(const kind::ExpAbs&) const { return "exp_abs"; }
    std::string operator()(const kind::TriangleHat&) const { return "triangle_hat"; }
    std::string operator()(const kind::LacunarySeries&) const { return "lacunary"; }
    std::string operator()(const kind::PiecewiseElementary&) const { return "piecewise"; }
    std::string operator()(const kind::UserCallable&) const { return "user"; }
  };
  return std::visit(V{}, k);
}

// ---------------------------------------------------------------------------

double TailModel::rate_at(double u) const {
  double rate = oscillation;
  for (const auto& c : components) {
    if (c.phase.is_constant()) continue;
    double uu = std::max(u, from);
    if (c.phase.c != 0.0) uu = std::max(uu, -c.phase.shift + 1e-9);
    double v = std::abs(c.phase.d1(uu));
    if (std::isfinite(v)) rate = std::max(rate, v);
  }
  return rate;
}

FunctionSpec::FunctionSpec() : FunctionSpec(zero_function()) {}

FunctionSpec::FunctionSpec(Data d) {
  std::sort(d.singular.begin(), d.singular.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
  d.breakpoints = sorted_unique(std::move(d.breakpoints));
  d_ = std::make_shared<const Data>(std::move(d));
}

cplx FunctionSpec::derivative(double x) const {
  if (!d_->derivative) throw PreconditionError("function '" + d_->label + "' has no stored derivative");
  if (x < d_->support.lo || x > d_->support.hi) return 0.0;
  return (*d_->derivative)(x);
}

std::vector<double> FunctionSpec::critical_points(double lo, double hi) const {
  if (!d_->critical_points) return {};
  auto v = d_->critical_points(lo, hi);
  std::vector<double> out;
  for (double x : v) {
    if (x > lo && x < hi) out.push_back(x);
  }
  return sorted_unique(out);
}

cplx FunctionSpec::side_limit(double x, int side) const {
  if (d_->side_limit) return d_->side_limit(x, side);
  double h = 1e-11 * std::max(1.0, std::abs(x));
  return (*this)(x + side * h);
}

std::vector<double> FunctionSpec::panel_points() const {
  std::vector<double> v = d_->breakpoints;
  for (const auto& s : d_->singular) v.push_back(s.x);
  if (std::isfinite(d_->support.lo)) v.push_back(d_->support.lo);
  if (std::isfinite(d_->support.hi)) v.push_back(d_->support.hi);
  return sorted_unique(v);
}

FunctionSpec FunctionSpec::with_label(std::string label) const {
  Data d = *d_;
  d.label = std::move(label);
  return FunctionSpec(std::move(d));
}

// ---------------------------------------------------------------------------
// Built-ins.

FunctionSpec power_signed(double e) {
  auto d = base_data(kind::PowerSigned{e}, "sgn(x)|x|^" + fmt(e));
  d.eval = [e](double x) -> cplx { return x == 0.0 ? 0.0 : sgn(x) * std::pow(std::abs(x), e); };
  d.derivative = [e](double x) -> cplx { return x == 0.0 ? 0.0 : e * std::pow(std::abs(x), e - 1.0); };
  if (e < 0.0) {
    d.singular.push_back({0.0, SingularType::Unbounded, 0.0});
  } else if (e == 0.0) {
    d.singular.push_back({0.0, SingularType::Jump, 2.0});
  } else {
    d.breakpoints.push_back(0.0);
  }
  d.parity = Parity::Odd;
  d.critical_points = [](double, double) { return std::vector<double>{}; };
  auto make_tail = [e](double sign) {
    TailModel t;
    t.from = 1.0;
    t.components.push_back({[e, sign](double u) -> cplx { return sign * std::pow(u, e); }, Phase{}});
    t.abs_integrable = e < -1.0;
    t.bounded = e <= 0.0;
    t.bv = true;
    t.limit_zero = e < 0.0;
    t.decay_exponent = e;
    return t;
  };
  d.right = make_tail(1.0);
  d.left = make_tail(-1.0);
  return FunctionSpec(std::move(d));
}

FunctionSpec chirp(double alpha, double nu, bool one_sided) {
  if (!(nu > 0.0)) throw PreconditionError("chirp: nu must be positive");
  auto d = base_data(kind::Chirp{alpha, nu, one_sided},
                     std::string(one_sided ? "x^" : "|x|^") + fmt(alpha) + " e^{i|x|^" + fmt(nu) + "}" +
                         (one_sided ? " (x>=0)" : ""));
  d.eval = [alpha, nu](double x) -> cplx {
    double ax = std::abs(x);
    return std::pow(ax, alpha) * std::polar(1.0, std::pow(ax, nu));
  };
  d.derivative = [alpha, nu](double x) -> cplx {
    double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    cplx e = std::polar(1.0, std::pow(ax, nu));
    cplx v = (alpha * std::pow(ax, alpha - 1.0) + kI * nu * std::pow(ax, alpha + nu - 1.0)) * e;
    return x > 0 ? v : -v;
  };
  d.real_valued = false;
  d.phase = PhaseDescriptor{[alpha](double x) -> cplx { return std::pow(std::abs(x), alpha); },
                            Phase::power(1.0, nu)};
  if (alpha < 0.0) {
    d.singular.push_back({0.0, SingularType::Unbounded, 0.0});
  } else if (one_sided && alpha == 0.0) {
    d.singular.push_back({0.0, SingularType::Jump, 1.0});
  } else {
    d.breakpoints.push_back(0.0);
  }
  TailModel t;
  t.from = 1.0;
  t.components.push_back({[alpha](double u) -> cplx { return std::pow(u, alpha); }, Phase::power(1.0, nu)});
  t.abs_integrable = alpha < -1.0;
  t.bounded = alpha <= 0.0;
  t.limit_zero = alpha < 0.0;
  t.decay_exponent = alpha;
  d.right = t;
  if (one_sided) {
    d.support = {0.0, kInf};
    d.left = TailModel::zero(0.0);
    d.parity = Parity::None;
  } else {
    d.left = t;
    d.parity = Parity::Even;
  }
  return FunctionSpec(std::move(d));
}

FunctionSpec sin_over_abs(double a) { return sin_over_abs(kind::SinOverAbs{a, 1.0, 0.0, 1.0, false}); }

FunctionSpec sin_over_abs(const kind::SinOverAbs& k) {
  const double a = k.a, p = k.power, sh = k.shift, sc = k.scale;
  const bool sg = k.signed_denominator;
  std::string label = fmt(sc) + " sin(" + fmt(a) + "x+" + fmt(sh) + ")/" + (sg ? "(sgn(x)|x|^" : "(|x|^") +
                      fmt(p) + ")";
  auto d = base_data(k, label);
  d.eval = [=](double x) -> cplx {
    if (x == 0.0) {
      if (sh == 0.0 && p < 1.0) return 0.0;
      if (sh == 0.0 && p == 1.0 && sg) return sc * a;
      return 0.0;
    }
    double v = sc * std::sin(a * x + sh) / std::pow(std::abs(x), p);
    return sg ? sgn(x) * v : v;
  };
  d.derivative = [=](double x) -> cplx {
    if (x == 0.0) return 0.0;
    double ax = std::abs(x);
    double v = sc * (a * std::cos(a * x + sh) * std::pow(ax, -p) - p * std::sin(a * x + sh) * std::pow(ax, -p - 1.0) * sgn(x));
    return sg ? sgn(x) * v : v;
  };
  if (sh == 0.0 && std::sin(sh) == 0.0) {
    if (p > 1.0) {
      d.singular.push_back({0.0, SingularType::Unbounded, 0.0});
    } else if (p == 1.0 && !sg) {
      d.singular.push_back({0.0, SingularType::Jump, 2.0 * a * sc});
    } else {
      d.breakpoints.push_back(0.0);
    }
    d.parity = sg ? Parity::Even : Parity::Odd;
  } else {
    if (p > 0.0) {
      d.singular.push_back({0.0, SingularType::Unbounded, 0.0});
    } else {
      d.breakpoints.push_back(0.0);
    }
    d.parity = Parity::None;
  }
  auto make_tail = [=](double side) {
    // f(side*u) = side_sign * sc * sin(side*a*u + sh) / u^p
    double s = (sg && side < 0) ? -1.0 : 1.0;
    double w = side * a;
    TailModel t;
    t.from = 1.0;
    cplx c1 = s * sc / (2.0 * kI);
    t.components.push_back({[c1, p](double u) { return c1 * std::pow(u, -p); }, Phase::linear(w, sh)});
    t.components.push_back({[c1, p](double u) { return -c1 * std::pow(u, -p); }, Phase::linear(-w, -sh)});
    t.abs_integrable = p > 1.0;
    t.bounded = p >= 0.0;
    t.limit_zero = p > 0.0;
    t.bv = (a == 0.0);
    t.decay_exponent = -p;
    return t;
  };
  d.right = make_tail(1.0);
  d.left = make_tail(-1.0);
  return FunctionSpec(std::move(d));
}

FunctionSpec rational_odd() {
  auto d = base_data(kind::RationalOdd{}, "x/(x^2+1)");
  d.eval = [](double x) -> cplx { return x / (x * x + 1.0); };
  d.derivative = [](double x) -> cplx {
    double q = x * x + 1.0;
    return (1.0 - x * x) / (q * q);
  };
  d.parity = Parity::Odd;
  d.critical_points = [](double, double) { return std::vector<double>{-1.0, 1.0}; };
  auto make_tail = [](double sign) {
    TailModel t;
    t.from = 1.0;
    t.components.push_back({[sign](double u) -> cplx { return sign * u / (u * u + 1.0); }, Phase{}});
    t.bounded = t.bv = t.limit_zero = true;
    t.decay_exponent = -1.0;
    return t;
  };
  d.right = make_tail(1.0);
  d.left = make_tail(-1.0);
  return FunctionSpec(std::move(d));
}

namespace {
TailModel rapid_tail(const RealFn& f, int side, double from) {
  TailModel t = opaque_tail(f, side, from);
  t.rapid = t.abs_integrable = t.bounded = t.bv = t.limit_zero = true;
  return t;
}
}  // namespace

FunctionSpec gauss_envelope(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw PreconditionError("gauss: width must be positive");
  auto d = base_data(kind::GaussEnvelope{amplitude, center, width},
                     fmt(amplitude) + " e^{-((x-" + fmt(center) + ")/" + fmt(width) + ")^2}");
  d.eval = [=](double x) -> cplx {
    double z = (x - center) / width;
    return amplitude * std::exp(-z * z);
  };
  d.derivative = [=](double x) -> cplx {
    double z = (x - center) / width;
    return -2.0 * z / width * amplitude * std::exp(-z * z);
  };
  d.parity = center == 0.0 ? Parity::Even : Parity::None;
  d.critical_points = [center](double, double) { return std::vector<double>{center}; };
  double from = std::abs(center) + 1.0;
  d.right = rapid_tail(d.eval, 1, from);
  d.left = rapid_tail(d.eval, -1, from);
  d.effective_radius = std::abs(center) + 9.0 * width;
  return FunctionSpec(std::move(d));
}

FunctionSpec exp_abs(double rate) {
  if (!(rate > 0.0)) throw PreconditionError("exp_abs: rate must be positive");
  auto d = base_data(kind::ExpAbs{rate}, "e^{-" + fmt(rate) + "|x|}");
  d.eval = [rate](double x) -> cplx { return std::exp(-rate * std::abs(x)); };
  d.derivative = [rate](double x) -> cplx { return -rate * sgn(x) * std::exp(-rate * std::abs(x)); };
  d.breakpoints.push_back(0.0);
  d.parity = Parity::Even;
  d.critical_points = [](double, double) { return std::vector<double>{0.0}; };
  d.right = rapid_tail(d.eval, 1, 1.0);
  d.left = rapid_tail(d.eval, -1, 1.0);
  d.effective_radius = 80.0 / rate;
  return FunctionSpec(std::move(d));
}

FunctionSpec triangle_hat(double h) {
  if (!(h > 0.0)) throw PreconditionError("triangle_hat: half width must be positive");
  auto d = base_data(kind::TriangleHat{h}, "(1-|x|/" + fmt(h) + ")_+");
  d.eval = [h](double x) -> cplx { return std::max(0.0, 1.0 - std::abs(x) / h); };
  d.derivative = [h](double x) -> cplx { return std::abs(x) < h ? -sgn(x) / h : 0.0; };
  d.support = {-h, h};
  d.breakpoints = {-h, 0.0, h};
  d.parity = Parity::Even;
  d.critical_points = [](double, double) { return std::vector<double>{0.0}; };
  d.right = TailModel::zero(h);
  d.left = TailModel::zero(h);
  d.effective_radius = h;
  return FunctionSpec(std::move(d));
}

FunctionSpec lacunary_series(CoeffSeq coeffs, std::size_t truncation) {
  coeffs.validate();
  if (truncation == 0 || truncation > coeffs.a.size()) {
    throw PreconditionError("lacunary: truncation must be in [1, number of stored terms]");
  }
  double weight = coeffs.a_tail_sum;
  for (std::size_t n = truncation; n < coeffs.a.size(); ++n) weight += coeffs.a[n];
  std::vector<double> a(coeffs.a.begin(), coeffs.a.begin() + static_cast<std::ptrdiff_t>(truncation));
  std::vector<double> b(coeffs.b.begin(), coeffs.b.begin() + static_cast<std::ptrdiff_t>(truncation));
  auto d = base_data(kind::LacunarySeries{coeffs, truncation, weight},
                     "lacunary(N=" + std::to_string(truncation) + ")");
  d.eval = [a, b](double x) -> cplx {
    if (x == 0.0) return 0.0;
    double v = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) v += a[n] * std::sin(b[n] * x);
    return v / std::abs(x);
  };
  d.derivative = [a, b](double x) -> cplx {
    if (x == 0.0) return 0.0;
    double ax = std::abs(x), v = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      v += a[n] * (b[n] * std::cos(b[n] * x) / ax - std::sin(b[n] * x) * sgn(x) / (ax * ax));
    }
    return v;
  };
  double jump = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) jump += 2.0 * a[n] * b[n];
  if (jump != 0.0) {
    d.singular.push_back({0.0, SingularType::Jump, jump});
  } else {
    d.breakpoints.push_back(0.0);
  }
  d.parity = Parity::Odd;
  auto make_tail = [a, b](double side) {
    TailModel t;
    t.from = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      if (b[n] == 0.0) continue;
      double w = side * b[n];
      // f(side u) = a sin(side b u) / u
      cplx c1 = a[n] / (2.0 * kI);
      t.components.push_back({[c1](double u) { return c1 / u; }, Phase::linear(w)});
      t.components.push_back({[c1](double u) { return -c1 / u; }, Phase::linear(-w)});
    }
    t.bounded = t.limit_zero = true;
    t.decay_exponent = -1.0;
    return t;
  };
  d.right = make_tail(1.0);
  d.left = make_tail(-1.0);
  return FunctionSpec(std::move(d));
}

FunctionSpec piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) return zero_function();
  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].hi > pieces[i].lo)) throw PreconditionError("piecewise: empty piece");
    if (i > 0 && pieces[i].lo < pieces[i - 1].hi) throw PreconditionError("piecewise: overlapping pieces");
  }
  auto d = base_data(kind::PiecewiseElementary{pieces}, "piecewise(" + std::to_string(pieces.size()) + ")");
  auto locate = [pieces](double x) -> const Piece* {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto& p = pieces[i];
      if (x >= p.lo && (x < p.hi || (x == p.hi && (i + 1 == pieces.size() || pieces[i + 1].lo > x)))) return &p;
    }
    return nullptr;
  };
  d.eval = [pieces, locate](double x) -> cplx {
    const Piece* p = locate(x);
    return p ? p->value(x) : 0.0;
  };
  d.derivative = [pieces, locate](double x) -> cplx {
    const Piece* p = locate(x);
    return p ? p->derivative(x) : 0.0;
  };
  d.side_limit = [pieces](double x, int side) -> cplx {
    for (const auto& p : pieces) {
      if (side > 0 && x >= p.lo && x < p.hi) return p.value(x);
      if (side < 0 && x > p.lo && x <= p.hi) return p.value(x);
    }
    return 0.0;
  };
  d.critical_points = [pieces](double lo, double hi) {
    std::vector<double> out;
    for (const auto& p : pieces) {
      Piece q = p;
      q.lo = std::max(p.lo, lo);
      q.hi = std::min(p.hi, hi);
      if (!(q.hi > q.lo)) continue;
      auto c = q.critical_points();
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  };
  d.support = {pieces.front().lo, pieces.back().hi};
  // Boundaries: a jump wherever the one-sided limits disagree.
  std::vector<double> bounds;
  for (const auto& p : pieces) {
    if (std::isfinite(p.lo)) bounds.push_back(p.lo);
    if (std::isfinite(p.hi)) bounds.push_back(p.hi);
  }
  bounds = sorted_unique(bounds);
  for (double x : bounds) {
    cplx l = d.side_limit(x, -1), r = d.side_limit(x, 1);
    if (std::abs(r - l) > 1e-14 * (1.0 + std::abs(l))) {
      d.singular.push_back({x, SingularType::Jump, std::real(r - l)});
    } else {
      d.breakpoints.push_back(x);
    }
  }
  bool real = true;
  auto piece_tail = [](const Piece& p, int side, double from) {
    TailModel t;
    t.from = from;
    const auto& q = p.params;
    auto x_of = [side](double u) { return side * u; };
    switch (p.form) {
      case PieceForm::Const:
        t.components.push_back({[c = q.at(0)](double) -> cplx { return c; }, Phase{}});
        t.bounded = t.bv = true;
        t.limit_zero = q.at(0) == 0.0;
        t.abs_integrable = t.rapid = q.at(0) == 0.0;
        t.decay_exponent = 0.0;
        break;
      case PieceForm::Poly: {
        t.components.push_back({[p, x_of](double u) -> cplx { return p.value(x_of(u)); }, Phase{}});
        t.bv = true;
        int deg = static_cast<int>(q.size()) - 1;
        while (deg > 0 && q[static_cast<std::size_t>(deg)] == 0.0) --deg;
        t.bounded = deg == 0;
        t.decay_exponent = deg;
        break;
      }
      case PieceForm::Exp: {
        double k = q.at(1) * side;
        t.components.push_back({[p, x_of](double u) -> cplx { return p.value(x_of(u)); }, Phase{}});
        t.bv = true;
        if (k < 0.0) t.rapid = t.abs_integrable = t.bounded = t.limit_zero = true;
        break;
      }
      case PieceForm::Sin:
      case PieceForm::Cos: {
        double c = q.at(0), w = q.at(1) * side, ph = q.at(2);
        if (p.form == PieceForm::Cos) ph += kPi / 2;
        cplx c1 = c / (2.0 * kI);
        t.components.push_back({[c1](double) { return c1; }, Phase::linear(w, ph)});
        t.components.push_back({[c1](double) { return -c1; }, Phase::linear(-w, -ph)});
        t.bounded = true;
        t.decay_exponent = 0.0;
        break;
      }
    }
    return t;
  };
  const Piece& last = pieces.back();
  const Piece& first = pieces.front();
  if (std::isinf(last.hi)) {
    d.right = piece_tail(last, 1, std::max(1.0, last.lo + 1.0));
  } else {
    d.right = TailModel::zero(last.hi);
  }
  if (std::isinf(first.lo)) {
    d.left = piece_tail(first, -1, std::max(1.0, -first.hi + 1.0));
  } else {
    d.left = TailModel::zero(-first.lo);
  }
  if (std::isfinite(d.support.lo) && std::isfinite(d.support.hi)) {
    d.effective_radius = std::max(std::abs(d.support.lo), std::abs(d.support.hi));
  }
  d.real_valued = real;
  return FunctionSpec(std::move(d));
}

FunctionSpec indicator(double lo, double hi, double value) {
  return piecewise({Piece{lo, hi, PieceForm::Const, {value}}})
      .with_label("chi[" + fmt(lo) + "," + fmt(hi) + "]" + (value == 1.0 ? "" : "*" + fmt(value)));
}

FunctionSpec constant(double c) {
  return piecewise({Piece{-kInf, kInf, PieceForm::Const, {c}}}).with_label(fmt(c));
}

FunctionSpec zero_function() {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{"zero"};
  d.label = "0";
  d.eval = [](double) -> cplx { return 0.0; };
  d.derivative = [](double) -> cplx { return 0.0; };
  d.parity = Parity::Odd;
  d.right = TailModel::zero(0.0);
  d.left = TailModel::zero(0.0);
  d.critical_points = [](double, double) { return std::vector<double>{}; };
  d.effective_radius = 0.0;
  return FunctionSpec(std::move(d));
}

FunctionSpec user_callable(RealFn eval, UserCallableOptions o) {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{o.description};
  d.label = o.description;
  d.eval = eval;
  d.derivative = o.derivative;
  d.singular = o.singular;
  d.breakpoints = o.breakpoints;
  d.support = o.support;
  d.parity = o.parity;
  d.real_valued = o.real_valued;
  d.effective_radius = o.effective_radius;
  d.right = o.right ? *o.right
                    : (std::isfinite(o.support.hi) ? TailModel::zero(o.support.hi) : opaque_tail(eval, 1, 1.0));
  d.left = o.left ? *o.left
                  : (std::isfinite(o.support.lo) ? TailModel::zero(-o.support.lo) : opaque_tail(eval, -1, 1.0));
  for (const auto& p : d.singular) {
    const double h = 1e-8;
    double l = std::abs(eval(p.x - h)), r = std::abs(eval(p.x + h));
    if (p.type == SingularType::Unbounded) {
      if (!(l > 1e3 || r > 1e3)) {
        throw PreconditionError("user callable '" + o.description + "': declared singular point " + fmt(p.x) +
                                " shows no blow-up");
      }
    } else {
      cplx jump = eval(p.x + h) - eval(p.x - h);
      if (std::abs(jump - p.jump) > 1e-4 * (1.0 + std::abs(p.jump))) {
        throw PreconditionError("user callable '" + o.description + "': jump at " + fmt(p.x) +
                                " does not match the declared size");
      }
    }
  }
  return FunctionSpec(std::move(d));
}

// ---------------------------------------------------------------------------
// Operations.

cplx evaluate(const FunctionSpec& f, double x) {
  if (!f.support().contains(x)) {
    throw DomainError("evaluate: x = " + fmt(x) + " outside the support of " + f.label());
  }
  for (const auto& s : f.singular_points()) {
    if (s.x == x) throw DomainError("evaluate: x = " + fmt(x) + " is a singular point of " + f.label());
  }
  return f(x);
}

FunctionSpec translate(const FunctionSpec& f, double y) {
  if (y == 0.0) return f;
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"translate"};
  d.label = "translate(" + f.label() + "," + fmt(y) + ")";
  d.eval = [f, y](double t) { return f(t + y); };
  if (f.has_derivative()) d.derivative = [f, y](double t) { return f.derivative(t + y); };
  for (auto& s : d.singular) s.x -= y;
  for (auto& b : d.breakpoints) b -= y;
  d.support = {f.support().lo - y, f.support().hi - y};
  d.parity = Parity::None;
  if (d.phase) d.phase.reset();
  if (f.has_critical_points()) {
    d.critical_points = [f, y](double lo, double hi) {
      auto v = f.critical_points(lo + y, hi + y);
      for (auto& x : v) x -= y;
      return v;
    };
  }
  d.side_limit = [f, y](double x, int side) { return f.side_limit(x + y, side); };
  d.right = map_tail(f.right_tail(), [y](const OscComponent& c) {
    return OscComponent{[a = c.amp, y](double u) { return a(u + y); }, c.phase.translated(y)};
  });
  d.right.from = f.right_tail().from - y;
  d.left = map_tail(f.left_tail(), [y](const OscComponent& c) {
    return OscComponent{[a = c.amp, y](double u) { return a(u - y); }, c.phase.translated(-y)};
  });
  d.left.from = f.left_tail().from + y;
  d.effective_radius = f.effective_radius() + std::abs(y);
  return FunctionSpec(std::move(d));
}

FunctionSpec reflect(const FunctionSpec& f) {
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"reflect"};
  d.label = "reflect(" + f.label() + ")";
  d.eval = [f](double t) { return f(-t); };
  if (f.has_derivative()) d.derivative = [f](double t) { return -f.derivative(-t); };
  for (auto& s : d.singular) {
    s.x = -s.x;
    s.jump = -s.jump;
  }
  for (auto& b : d.breakpoints) b = -b;
  d.support = {-f.support().hi, -f.support().lo};
  d.phase.reset();
  if (f.has_critical_points()) {
    d.critical_points = [f](double lo, double hi) {
      auto v = f.critical_points(-hi, -lo);
      for (auto& x : v) x = -x;
      return v;
    };
  }
  d.side_limit = [f](double x, int side) { return f.side_limit(-x, -side); };
  std::swap(d.right, d.left);
  return FunctionSpec(std::move(d));
}

FunctionSpec dilate(const FunctionSpec& f, double y) {
  if (!(y > 0.0)) throw PreconditionError("dilate: factor must be positive");
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"dilate"};
  d.label = "dilate(" + f.label() + "," + fmt(y) + ")";
  d.eval = [f, y](double t) { return f(t / y); };
  if (f.has_derivative()) d.derivative = [f, y](double t) { return f.derivative(t / y) / y; };
  for (auto& s : d.singular) s.x *= y;
  for (auto& b : d.breakpoints) b *= y;
  d.support = {f.support().lo * y, f.support().hi * y};
  d.phase.reset();
  if (f.has_critical_points()) {
    d.critical_points = [f, y](double lo, double hi) {
      auto v = f.critical_points(lo / y, hi / y);
      for (auto& x : v) x *= y;
      return v;
    };
  }
  d.side_limit = [f, y](double x, int side) { return f.side_limit(x / y, side); };
  auto dil = [y](const OscComponent& c) {
    return OscComponent{[a = c.amp, y](double u) { return a(u / y); }, c.phase.dilated(y)};
  };
  d.right = map_tail(f.right_tail(), dil);
  d.right.from = f.right_tail().from * y;
  d.left = map_tail(f.left_tail(), dil);
  d.left.from = f.left_tail().from * y;
  d.right.oscillation /= y;
  d.left.oscillation /= y;
  d.effective_radius = f.effective_radius() * y;
  return FunctionSpec(std::move(d));
}

FunctionSpec scale(const FunctionSpec& f, cplx alpha) {
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"scale"};
  d.label = "scale(" + f.label() + ")";
  d.eval = [f, alpha](double t) { return alpha * f(t); };
  if (f.has_derivative()) d.derivative = [f, alpha](double t) { return alpha * f.derivative(t); };
  for (auto& s : d.singular) s.jump *= std::real(alpha);
  if (alpha.imag() != 0.0) d.real_valued = false;
  if (alpha == 0.0) return zero_function();
  if (d.phase) d.phase->amplitude = [a = d.phase->amplitude, alpha](double x) { return alpha * a(x); };
  d.side_limit = [f, alpha](double x, int side) { return alpha * f.side_limit(x, side); };
  auto sc = [alpha](const OscComponent& c) {
    return OscComponent{[a = c.amp, alpha](double u) { return alpha * a(u); }, c.phase};
  };
  d.right = map_tail(f.right_tail(), sc);
  d.left = map_tail(f.left_tail(), sc);
  return FunctionSpec(std::move(d));
}

namespace {
TailModel add_tails(const TailModel& a, const TailModel& b) {
  TailModel t;
  t.from = std::max(a.from, b.from);
  if (a.vanishes() && b.vanishes()) return TailModel::zero(t.from);
  t.components = a.components;
  t.components.insert(t.components.end(), b.components.begin(), b.components.end());
  t.rapid = a.rapid && b.rapid;
  t.abs_integrable = a.abs_integrable && b.abs_integrable;
  t.bounded = a.bounded && b.bounded;
  t.bv = a.bv && b.bv;
  t.limit_zero = a.limit_zero && b.limit_zero;
  t.oscillation = std::max(a.oscillation, b.oscillation);
  if (a.vanishes()) {
    t.decay_exponent = b.decay_exponent;
  } else if (b.vanishes()) {
    t.decay_exponent = a.decay_exponent;
  } else if (a.decay_exponent && b.decay_exponent) {
    t.decay_exponent = std::max(*a.decay_exponent, *b.decay_exponent);
  }
  return t;
}

TailModel multiply_tails(const TailModel& a, const TailModel& b, const RealFn& product, int side) {
  if (a.vanishes()) return TailModel::zero(a.from);
  if (b.vanishes()) return TailModel::zero(b.from);
  TailModel t;
  t.from = std::max(a.from, b.from);
  bool ok = true;
  for (const auto& ca : a.components) {
    for (const auto& cb : b.components) {
      auto ph = ca.phase.plus(cb.phase);
      if (!ph) {
        ok = false;
        break;
      }
      t.components.push_back({[x = ca.amp, y = cb.amp](double u) { return x(u) * y(u); }, *ph});
    }
    if (!ok) break;
  }
  if (!ok) t = opaque_tail(product, side, t.from, a.rate_at(t.from) + b.rate_at(t.from));
  t.rapid = a.rapid || b.rapid;
  t.bounded = a.bounded && b.bounded;
  t.abs_integrable = t.rapid || (a.abs_integrable && b.bounded) || (b.abs_integrable && a.bounded);
  t.bv = a.bv && b.bv;
  t.limit_zero = (a.limit_zero && b.bounded) || (b.limit_zero && a.bounded) || t.rapid;
  if (a.decay_exponent && b.decay_exponent) {
    t.decay_exponent = *a.decay_exponent + *b.decay_exponent;
    if (*t.decay_exponent < -1.0) t.abs_integrable = true;
    if (*t.decay_exponent < 0.0) t.limit_zero = true;
    if (*t.decay_exponent <= 0.0) t.bounded = true;
  }
  return t;
}

Parity parity_product(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return a == b ? Parity::Even : Parity::Odd;
}
}  // namespace

FunctionSpec add(const FunctionSpec& f, const FunctionSpec& g) {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{"add"};
  d.label = "(" + f.label() + ")+(" + g.label() + ")";
  d.eval = [f, g](double t) { return f(t) + g(t); };
  if (f.has_derivative() && g.has_derivative()) {
    d.derivative = [f, g](double t) { return f.derivative(t) + g.derivative(t); };
  }
  d.singular = merge_singular(f.singular_points(), g.singular_points());
  d.breakpoints = f.breakpoints();
  d.breakpoints.insert(d.breakpoints.end(), g.breakpoints().begin(), g.breakpoints().end());
  for (double x : {f.support().lo, f.support().hi, g.support().lo, g.support().hi}) {
    if (std::isfinite(x)) d.breakpoints.push_back(x);
  }
  d.support = {std::min(f.support().lo, g.support().lo), std::max(f.support().hi, g.support().hi)};
  d.parity = f.parity() == g.parity() ? f.parity() : Parity::None;
  d.real_valued = f.real_valued() && g.real_valued();
  d.side_limit = [f, g](double x, int side) { return f.side_limit(x, side) + g.side_limit(x, side); };
  d.right = add_tails(f.right_tail(), g.right_tail());
  d.left = add_tails(f.left_tail(), g.left_tail());
  d.effective_radius = std::max(f.effective_radius(), g.effective_radius());
  return FunctionSpec(std::move(d));
}

FunctionSpec linear_combination(cplx alpha, const FunctionSpec& f, cplx beta, const FunctionSpec& g) {
  if (alpha == 0.0) return scale(g, beta);
  if (beta == 0.0) return scale(f, alpha);
  return add(scale(f, alpha), scale(g, beta));
}

FunctionSpec multiply(const FunctionSpec& f, const FunctionSpec& g) {
  FunctionSpec::Data d;
  d.kind = kind::UserCallable{"multiply"};
  d.label = "(" + f.label() + ")*(" + g.label() + ")";
  d.eval = [f, g](double t) { return f(t) * g(t); };
  if (f.has_derivative() && g.has_derivative()) {
    d.derivative = [f, g](double t) { return f.derivative(t) * g(t) + f(t) * g.derivative(t); };
  }
  d.singular = merge_singular(f.singular_points(), g.singular_points());
  for (auto& s : d.singular) {
    if (s.type == SingularType::Jump) s.jump = std::real(d.eval(s.x + 1e-12) - d.eval(s.x - 1e-12));
  }
  d.breakpoints = f.breakpoints();
  d.breakpoints.insert(d.breakpoints.end(), g.breakpoints().begin(), g.breakpoints().end());
  d.support = {std::max(f.support().lo, g.support().lo), std::min(f.support().hi, g.support().hi)};
  if (d.support.lo > d.support.hi) return zero_function();
  d.parity = parity_product(f.parity(), g.parity());
  d.real_valued = f.real_valued() && g.real_valued();
  d.side_limit = [f, g](double x, int side) { return f.side_limit(x, side) * g.side_limit(x, side); };
  RealFn prod = d.eval;
  d.right = multiply_tails(f.right_tail(), g.right_tail(), prod, 1);
  d.left = multiply_tails(f.left_tail(), g.left_tail(), prod, -1);
  if (std::isfinite(d.support.hi) && !d.right.vanishes()) d.right = TailModel::zero(d.support.hi);
  if (std::isfinite(d.support.lo) && !d.left.vanishes()) d.left = TailModel::zero(-d.support.lo);
  d.effective_radius = std::min(f.effective_radius(), g.effective_radius());
  return FunctionSpec(std::move(d));
}

FunctionSpec modulate(const FunctionSpec& f, double a) {
  if (a == 0.0) return f;
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"modulate"};
  d.label = "e^{i" + fmt(a) + "x}" + f.label();
  d.eval = [f, a](double t) { return std::polar(1.0, a * t) * f(t); };
  if (f.has_derivative()) {
    d.derivative = [f, a](double t) { return std::polar(1.0, a * t) * (kI * a * f(t) + f.derivative(t)); };
  }
  d.real_valued = false;
  d.parity = Parity::None;
  d.critical_points = nullptr;
  d.side_limit = [f, a](double x, int side) { return std::polar(1.0, a * x) * f.side_limit(x, side); };
  for (auto& s : d.singular) s.jump = 0.0;
  if (d.phase) d.phase->phi = *d.phase->phi.plus(Phase::linear(a));
  auto shift_phase = [](double slope) {
    return [slope](const OscComponent& c) { return OscComponent{c.amp, *c.phase.plus(Phase::linear(slope))}; };
  };
  d.right = map_tail(f.right_tail(), shift_phase(a));
  d.left = map_tail(f.left_tail(), shift_phase(-a));
  d.right.bv = d.right.vanishes();
  d.left.bv = d.left.vanishes();
  return FunctionSpec(std::move(d));
}

FunctionSpec times_x(const FunctionSpec& f) {
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"times_x"};
  d.label = "x*" + f.label();
  d.eval = [f](double t) { return t * f(t); };
  if (f.has_derivative()) d.derivative = [f](double t) { return f(t) + t * f.derivative(t); };
  d.parity = f.parity() == Parity::Even ? Parity::Odd : (f.parity() == Parity::Odd ? Parity::Even : Parity::None);
  d.critical_points = nullptr;
  d.phase.reset();
  d.side_limit = [f](double x, int side) { return x * f.side_limit(x, side); };
  for (auto& s : d.singular) s.jump *= s.x;
  auto adj = [](TailModel t, double sign) {
    bool was_bv = t.bv;
    if (t.vanishes()) return t;
    for (auto& c : t.components) c.amp = [a = c.amp, sign](double u) { return sign * u * a(u); };
    if (t.rapid) return t;
    t.abs_integrable = t.bounded = t.limit_zero = t.bv = false;
    if (t.decay_exponent) {
      double e = *t.decay_exponent + 1.0;
      t.decay_exponent = e;
      t.abs_integrable = e < -1.0;
      t.bounded = e <= 0.0;
      t.limit_zero = e < 0.0;
      t.bv = was_bv && e <= 0.0;
    }
    return t;
  };
  d.right = adj(f.right_tail(), 1.0);
  d.left = adj(f.left_tail(), -1.0);
  return FunctionSpec(std::move(d));
}

FunctionSpec abs_value(const FunctionSpec& f) {
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"abs"};
  d.label = "|" + f.label() + "|";
  d.eval = [f](double t) -> cplx { return std::abs(f(t)); };
  d.derivative.reset();
  d.critical_points = nullptr;
  d.phase.reset();
  d.real_valued = true;
  if (d.parity == Parity::Odd) d.parity = Parity::Even;
  d.side_limit = [f](double x, int side) -> cplx { return std::abs(f.side_limit(x, side)); };
  for (auto& s : d.singular) s.jump = 0.0;
  auto keep = [&d](const TailModel& t, int side) {
    if (t.vanishes()) return t;
    TailModel r = opaque_tail(d.eval, side, t.from, 2.0 * t.rate_at(t.from));
    r.rapid = t.rapid;
    r.abs_integrable = t.abs_integrable;
    r.bounded = t.bounded;
    r.limit_zero = t.limit_zero;
    r.bv = t.bv;
    r.decay_exponent = t.decay_exponent;
    return r;
  };
  d.right = keep(f.right_tail(), 1);
  d.left = keep(f.left_tail(), -1);
  return FunctionSpec(std::move(d));
}

FunctionSpec derivative_of(const FunctionSpec& f) {
  if (!f.has_derivative()) throw PreconditionError("derivative_of: '" + f.label() + "' has no stored derivative");
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"derivative"};
  d.label = "(" + f.label() + ")'";
  d.eval = [f](double t) { return f.derivative(t); };
  d.derivative.reset();
  d.critical_points = nullptr;
  d.side_limit = nullptr;
  d.phase.reset();
  d.parity = f.parity() == Parity::Even ? Parity::Odd : (f.parity() == Parity::Odd ? Parity::Even : Parity::None);
  for (auto& s : d.singular) {
    s.type = SingularType::Unbounded;
    s.jump = 0.0;
  }
  auto deriv_tail = [&d](const TailModel& t, int side) {
    if (t.vanishes()) return t;
    TailModel r = opaque_tail(d.eval, side, t.from, t.rate_at(t.from));
    r.rapid = r.abs_integrable = r.bounded = r.bv = r.limit_zero = t.rapid;
    return r;
  };
  d.right = deriv_tail(f.right_tail(), 1);
  d.left = deriv_tail(f.left_tail(), -1);
  return FunctionSpec(std::move(d));
}

namespace {
Phase negated(const Phase& p) {
  Phase r = p;
  r.c = -p.c;
  r.b = -p.b;
  r.theta = -p.theta;
  return r;
}

// (w f + conj(w f)) / 2 with w = 1 (real part) or w = -i (imaginary part).
FunctionSpec real_combination(const FunctionSpec& f, cplx w, const std::string& name) {
  if (f.real_valued()) {
    if (w == cplx(1.0)) return f;
    return zero_function();
  }
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{name};
  d.label = name + "(" + f.label() + ")";
  d.eval = [f, w](double t) -> cplx { return std::real(w * f(t)); };
  if (f.has_derivative()) d.derivative = [f, w](double t) -> cplx { return std::real(w * f.derivative(t)); };
  d.real_valued = true;
  d.phase.reset();
  d.critical_points = nullptr;
  d.side_limit = [f, w](double x, int side) -> cplx { return std::real(w * f.side_limit(x, side)); };
  auto split = [w](const TailModel& t) {
    TailModel r = t;
    r.components.clear();
    for (const auto& c : t.components) {
      r.components.push_back({[a = c.amp, w](double u) { return 0.5 * w * a(u); }, c.phase});
      r.components.push_back({[a = c.amp, w](double u) { return 0.5 * std::conj(w * a(u)); }, negated(c.phase)});
    }
    return r;
  };
  d.right = split(f.right_tail());
  d.left = split(f.left_tail());
  return FunctionSpec(std::move(d));
}
}  // namespace

FunctionSpec real_part(const FunctionSpec& f) { return real_combination(f, 1.0, "re"); }
FunctionSpec imag_part(const FunctionSpec& f) { return real_combination(f, cplx(0.0, -1.0), "im"); }

FunctionSpec with_breakpoints(const FunctionSpec& f, const std::vector<double>& pts) {
  FunctionSpec::Data d = f.data();
  d.breakpoints.insert(d.breakpoints.end(), pts.begin(), pts.end());
  return FunctionSpec(std::move(d));
}

FunctionSpec restrict_to(const FunctionSpec& f, double lo, double hi) {
  if (!(hi > lo)) throw PreconditionError("restrict_to: empty interval");
  FunctionSpec::Data d = f.data();
  d.kind = kind::UserCallable{"restrict"};
  d.label = f.label() + "|[" + fmt(lo) + "," + fmt(hi) + "]";
  d.support = {std::max(lo, f.support().lo), std::min(hi, f.support().hi)};
  if (d.support.lo > d.support.hi) return zero_function();
  d.phase.reset();
  d.parity = (lo == -hi) ? f.parity() : Parity::None;
  for (double x : {d.support.lo, d.support.hi}) {
    if (!std::isfinite(x)) continue;
    bool listed = std::any_of(d.singular.begin(), d.singular.end(), [x](const SingularPoint& s) { return s.x == x; });
    if (listed) continue;
    cplx v = f(x);
    if (std::abs(v) > 0.0) {
      d.singular.push_back({x, SingularType::Jump, x == d.support.lo ? std::real(v) : -std::real(v)});
    } else {
      d.breakpoints.push_back(x);
    }
  }
  std::erase_if(d.singular, [&d](const SingularPoint& s) { return s.x < d.support.lo || s.x > d.support.hi; });
  std::erase_if(d.breakpoints, [&d](double b) { return b < d.support.lo || b > d.support.hi; });
  const ExtInterval sup = d.support;
  d.side_limit = [f, sup](double x, int side) -> cplx {
    if ((side > 0 && x >= sup.hi) || (side < 0 && x <= sup.lo)) return 0.0;
    return f.side_limit(x, side);
  };
  if (std::isfinite(sup.hi)) d.right = TailModel::zero(sup.hi);
  if (std::isfinite(sup.lo)) d.left = TailModel::zero(-sup.lo);
  if (std::isfinite(sup.lo) && std::isfinite(sup.hi)) {
    d.effective_radius = std::max(std::abs(sup.lo), std::abs(sup.hi));
  }
  return FunctionSpec(std::move(d));
}

}  // namespace oscint
