#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/fourier.hpp"
#include "oscint/function_spec.hpp"

namespace oscint {

struct CorpusEntry {
  std::string name;
  FunctionSpec f;
  std::optional<FunctionSpec> fhat_closed_form;  // as printed; see notes for errata
  std::vector<double> divergence_set;            // isolated s where f^ fails
  std::string divergence_note;                   // e.g. "s = +-a"
  std::string notes;
};

/// Throws UnknownEntry.
const CorpusEntry& corpus_lookup(const std::string& name);
std::vector<std::string> corpus_names();
nlohmann::json corpus_dump();

/// Closed-form transforms with tail metadata for gauss, exp_abs and
/// triangle_hat kinds (any parameters); nullopt otherwise.
std::optional<FunctionSpec> known_transform(const FunctionSpec& f);

/// 2r / (r^2 + s^2), the transform of e^{-r|x|}.
FunctionSpec lorentzian(double r = 1.0);
/// h [sin(h s / 2) / (h s / 2)]^2, the transform of the triangle of half width h.
FunctionSpec fejer(double h = 1.0);

struct LacunaryValue {
  Verdict verdict = Verdict::Unknown;
  std::string rule;
  cplx value{};            // set when verdict is ExistsProven
  double tail_bound = 0.0; // bound on the terms beyond the stored ones
  int terms = 0;
};

/// f^(s) for f = sum a_n sin(b_n x)/|x| through the log series, using the first
/// `truncation` terms (0: all stored). Throws CertificateMissing when the
/// summability certificates are absent.
LacunaryValue lacunary_transform(const CoeffSeq& c, double s, std::size_t truncation = 0);

struct RationalsReport {
  int depth = 0;
  double sum = 0.0;    // truncated sum of a_n |log|(s-b_n)/(s+b_n)||
  double bound = 0.0;  // log(2 / sbar) sum m A_m
  double sbar = 0.0;   // distance to the nearest l/m, m <= depth
  bool holds = false;
};

/// Rationals of [0,1] enumerated by denominator, weight A(m) per denominator.
/// Throws PreconditionError for rational s or s outside [-1, 1]; `weighted_sum`
/// is a bound on sum m A_m (CertificateMissing when not finite).
RationalsReport rationals_fixture(const std::function<double(int)>& A, double s, int depth, double weighted_sum);

}  // namespace oscint
