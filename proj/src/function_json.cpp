#include "oscint/function_json.hpp"

#include <cmath>

#include "oscint/corpus.hpp"

namespace oscint {

using nlohmann::json;

double ext_real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw PreconditionError("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

json ext_real_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

ExtInterval interval_from_json(const json& j) {
  ExtInterval I;
  if (j.is_array() && j.size() == 2) {
    I = {ext_real_from_json(j[0]), ext_real_from_json(j[1])};
  } else if (j.is_object() && j.contains("lo") && j.contains("hi")) {
    I = {ext_real_from_json(j["lo"]), ext_real_from_json(j["hi"])};
  } else {
    throw PreconditionError("interval must be [lo, hi] or {\"lo\":..,\"hi\":..}");
  }
  if (!(I.lo <= I.hi)) throw PreconditionError("interval with lo > hi");
  return I;
}

json interval_to_json(const ExtInterval& I) { return json::array({ext_real_to_json(I.lo), ext_real_to_json(I.hi)}); }

namespace {

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return ext_real_from_json(j.at(key));
}

double need(const json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
  return ext_real_from_json(j.at(key));
}

std::vector<double> reals(const json& j, const char* key) {
  std::vector<double> v;
  if (!j.contains(key)) return v;
  if (!j.at(key).is_array()) throw PreconditionError(std::string("field '") + key + "' must be an array");
  for (const auto& x : j.at(key)) v.push_back(ext_real_from_json(x));
  return v;
}

PieceForm form_from(const std::string& s) {
  if (s == "const") return PieceForm::Const;
  if (s == "poly") return PieceForm::Poly;
  if (s == "exp") return PieceForm::Exp;
  if (s == "sin") return PieceForm::Sin;
  if (s == "cos") return PieceForm::Cos;
  throw PreconditionError("unknown piece form '" + s + "'");
}

std::string form_name(PieceForm f) {
  switch (f) {
    case PieceForm::Const: return "const";
    case PieceForm::Poly: return "poly";
    case PieceForm::Exp: return "exp";
    case PieceForm::Sin: return "sin";
    case PieceForm::Cos: return "cos";
  }
  return "const";
}

cplx complex_from(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  return ext_real_from_json(j);
}

FunctionSpec sub(const json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("missing operand '") + key + "'");
  return function_from_json(j.at(key));
}

FunctionSpec from_op(const json& j, const std::string& op) {
  if (op == "translate") return translate(sub(j, "f"), need(j, "y"));
  if (op == "reflect") return reflect(sub(j, "f"));
  if (op == "dilate") return dilate(sub(j, "f"), need(j, "y"));
  if (op == "scale") return scale(sub(j, "f"), complex_from(j.at("alpha")));
  if (op == "add") return add(sub(j, "f"), sub(j, "g"));
  if (op == "multiply") return multiply(sub(j, "f"), sub(j, "g"));
  if (op == "modulate") return modulate(sub(j, "f"), need(j, "a"));
  if (op == "times_x") return times_x(sub(j, "f"));
  if (op == "abs") return abs_value(sub(j, "f"));
  if (op == "derivative") return derivative_of(sub(j, "f"));
  if (op == "real") return real_part(sub(j, "f"));
  if (op == "imag") return imag_part(sub(j, "f"));
  if (op == "restrict") return restrict_to(sub(j, "f"), need(j, "lo"), need(j, "hi"));
  throw PreconditionError("unknown op '" + op + "'");
}

FunctionSpec from_kind(const json& j, const std::string& k) {
  if (k == "power_signed") return power_signed(need(j, "exponent"));
  if (k == "chirp") return chirp(num(j, "alpha", 0.0), need(j, "nu"), j.value("one_sided", false));
  if (k == "sin_over_abs") {
    kind::SinOverAbs p;
    p.a = num(j, "a", 1.0);
    p.power = num(j, "power", 1.0);
    p.shift = num(j, "shift", 0.0);
    p.scale = num(j, "scale", 1.0);
    p.signed_denominator = j.value("signed_denominator", false);
    return sin_over_abs(p);
  }
  if (k == "rational_odd") return rational_odd();
  if (k == "gauss") return gauss_envelope(num(j, "amplitude", 1.0), num(j, "center", 0.0), num(j, "width", 1.0));
  if (k == "exp_abs") return exp_abs(num(j, "rate", 1.0));
  if (k == "triangle_hat") return triangle_hat(num(j, "half_width", 1.0));
  if (k == "lacunary") {
    CoeffSeq c;
    c.a = reals(j, "a");
    c.b = reals(j, "b");
    c.a_tail_sum = num(j, "a_tail_sum", 0.0);
    c.ab_tail_sum = num(j, "ab_tail_sum", 0.0);
    c.sum_a_finite = j.value("sum_a_finite", true);
    c.sum_ab_finite = j.value("sum_ab_finite", true);
    c.limit_points = reals(j, "limit_points");
    auto n = j.value("truncation", c.a.size());
    return lacunary_series(std::move(c), n);
  }
  if (k == "piecewise") {
    std::vector<Piece> pieces;
    if (!j.contains("pieces") || !j["pieces"].is_array()) throw PreconditionError("piecewise: 'pieces' array required");
    for (const auto& p : j["pieces"]) {
      Piece q;
      q.lo = need(p, "lo");
      q.hi = need(p, "hi");
      q.form = form_from(p.value("form", std::string("const")));
      q.params = reals(p, "params");
      pieces.push_back(std::move(q));
    }
    return piecewise(std::move(pieces));
  }
  if (k == "indicator") return indicator(need(j, "lo"), need(j, "hi"), num(j, "value", 1.0));
  if (k == "constant") return constant(need(j, "value"));
  if (k == "zero") return zero_function();
  if (k == "sin") {
    // sin(w x + phase) on the whole line
    return piecewise({Piece{-kInf, kInf, PieceForm::Sin, {num(j, "scale", 1.0), num(j, "w", 1.0), num(j, "phase", 0.0)}}})
        .with_label("sin");
  }
  throw PreconditionError("unknown kind '" + k + "'");
}

}  // namespace

FunctionSpec function_from_json(const json& j) {
  if (j.is_string()) return corpus_lookup(j.get<std::string>()).f;
  if (!j.is_object()) throw PreconditionError("function document must be an object or a corpus name");
  FunctionSpec f;
  if (j.contains("corpus")) {
    f = corpus_lookup(j["corpus"].get<std::string>()).f;
  } else if (j.contains("op")) {
    f = from_op(j, j["op"].get<std::string>());
  } else if (j.contains("kind")) {
    f = from_kind(j, j["kind"].get<std::string>());
  } else {
    throw PreconditionError("function document needs 'kind', 'op' or 'corpus'");
  }
  if (j.contains("label")) f = f.with_label(j["label"].get<std::string>());
  return f;
}

json function_to_json(const FunctionSpec& f) {
  struct V {
    json operator()(const kind::PowerSigned& k) const { return {{"kind", "power_signed"}, {"exponent", k.exponent}}; }
    json operator()(const kind::Chirp& k) const {
      return {{"kind", "chirp"}, {"alpha", k.alpha}, {"nu", k.nu}, {"one_sided", k.one_sided}};
    }
    json operator()(const kind::SinOverAbs& k) const {
      return {{"kind", "sin_over_abs"}, {"a", k.a},         {"power", k.power},
              {"shift", k.shift},       {"scale", k.scale}, {"signed_denominator", k.signed_denominator}};
    }
    json operator()(const kind::RationalOdd&) const { return {{"kind", "rational_odd"}}; }
    json operator()(const kind::GaussEnvelope& k) const {
      return {{"kind", "gauss"}, {"amplitude", k.amplitude}, {"center", k.center}, {"width", k.width}};
    }
    json operator()(const kind::ExpAbs& k) const { return {{"kind", "exp_abs"}, {"rate", k.rate}}; }
    json operator()(const kind::TriangleHat& k) const { return {{"kind", "triangle_hat"}, {"half_width", k.half_width}}; }
    json operator()(const kind::LacunarySeries& k) const {
      json lp = json::array();
      for (double x : k.coeffs.limit_points) lp.push_back(ext_real_to_json(x));
      return {{"kind", "lacunary"},
              {"a", k.coeffs.a},
              {"b", k.coeffs.b},
              {"truncation", k.truncation},
              {"a_tail_sum", k.coeffs.a_tail_sum},
              {"ab_tail_sum", k.coeffs.ab_tail_sum},
              {"sum_a_finite", k.coeffs.sum_a_finite},
              {"sum_ab_finite", k.coeffs.sum_ab_finite},
              {"limit_points", lp}};
    }
    json operator()(const kind::PiecewiseElementary& k) const {
      json ps = json::array();
      for (const auto& p : k.pieces) {
        ps.push_back({{"lo", ext_real_to_json(p.lo)},
                      {"hi", ext_real_to_json(p.hi)},
                      {"form", form_name(p.form)},
                      {"params", p.params}});
      }
      return {{"kind", "piecewise"}, {"pieces", ps}};
    }
    json operator()(const kind::UserCallable& k) const { return {{"kind", "user"}, {"description", k.description}}; }
  };
  json j = std::visit(V{}, f.kind());
  j["label"] = f.label();
  return j;
}

}  // namespace oscint
