#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/fourier.hpp"
#include "oscint/function_spec.hpp"
#include "oscint/quad.hpp"

namespace oscint {

struct KernelValidation {
  bool theta_L1_AC = false;
  bool theta0_is_1 = false;
  bool sTheta_L1 = false;
  bool thetahat_L1_BV = false;
  bool thetahat_integral_2pi = false;
  bool sThetahatPrime_L1 = false;
  bool tail_variation_O_1_over_x = false;

  double thetahat_integral = 0.0;
  std::vector<double> dyadic_sums;  // int over [2^k, 2^{k+1}] of |s Theta^'(s)|, both sides
  std::vector<double> tail_variations;  // V over [2^j, inf) of Theta^, j = 1..10
  double tail_slope = 0.0;

  bool all() const;
  std::vector<std::string> failed() const;
  nlohmann::json to_json() const;
};

struct Kernel {
  std::string name;
  FunctionSpec theta;
  FunctionSpec theta_hat;
  bool validated = false;
  KernelValidation validation;
};

/// "gauss", "abel" or "cesaro", validated once and cached. Throws UnknownEntry.
Kernel builtin_kernel(const std::string& name);
std::vector<std::string> builtin_kernel_names();
/// {"name": .., "theta": <function doc>, "theta_hat": <function doc>}, or a builtin name.
Kernel kernel_from_json(const nlohmann::json& j);

KernelValidation validate_kernel(const Kernel& k, double tol = 1e-8);
Kernel validated(Kernel k, double tol = 1e-8);

struct NonTangentialPath {
  double x0 = 0.0;
  double aperture = 0.0;
  std::vector<double> y;
  std::vector<double> x;

  /// Checks y_k > 0 strictly decreasing and |x_k - x0| <= C y_k; PreconditionError otherwise.
  static NonTangentialPath make(double x0, double aperture, std::vector<double> y, std::vector<double> x);
  /// y_k = 2^{-k}, k = 1..steps, x_k = x0 + C y_k.
  static NonTangentialPath standard(double x0, double aperture, int steps = 14);
};

struct InversionStep {
  int k = 0;
  double y = 0.0;
  double x = 0.0;
  cplx value{};
  cplx extrapolated{};  // Richardson 2 I_k - I_{k-1}
  double mass = 0.0;    // (2 pi y)^{-1} int Theta^((t - x)/y) dt
  Status status = Status::Converged;
};

struct InversionResult {
  cplx limit{};
  Status status = Status::Inconclusive;
  std::vector<InversionStep> trace;
  double max_mass_error = 0.0;
  std::string note;  // the extrapolation assumption
  nlohmann::json to_json() const;
};

/// Pointwise recovery of f(x0) from I_k = (2 pi y_k)^{-1} int Theta^((t - x_k)/y_k) f(t) dt.
/// Throws KernelInvalid when the kernel fails a clause.
InversionResult invert_at(const FunctionSpec& f, const Kernel& k, const NonTangentialPath& path,
                          double tol = 1e-8);
/// The same limit from a transform: (2 pi)^{-1} int Theta(y_k s) e^{i s x_k} fhat(s) ds.
InversionResult invert_spectral(const FunctionSpec& fhat, const Kernel& k, const NonTangentialPath& path,
                                double tol = 1e-8);

struct UniquenessReport {
  bool applicable = false;  // max |f^| on the grid below tol
  double max_fhat = 0.0;
  double max_recovered = 0.0;
  std::vector<double> x0;
};

UniquenessReport uniqueness_probe(const FunctionSpec& f, const std::vector<double>& s_grid,
                                  const std::vector<double>& x0, double tol = 1e-6);

/// sqrt(2pi/(nu(nu-1))) e^{i pi/4} x0^{alpha-(nu-2)/2} e^{i phi(x0) s^{nu/(nu-1)}} s^{(2alpha+2-nu)/(2(nu-1))},
/// x0 = nu^{-1/(nu-1)}, phi(x) = x^nu - x. DomainError for nu <= 1 or s <= 0.
cplx stationary_phase_asymptotic(double alpha, double nu, double s);

struct NonreversibleReport {
  double alpha = 0.0;
  double nu = 0.0;
  std::vector<double> s;
  std::vector<QuadResult> forward;  // transform of the one-sided chirp
  double growth = 0.0;              // (2 alpha + 2 - nu) / (2 (nu - 1))
  double phase_exponent = 0.0;      // nu / (nu - 1)
  Existence inverse;                // classifier on the asymptotic transform
  QuadResult inverse_tail;          // engine run on the same tail, for the record
  bool forward_converged = false;
  bool confirmed = false;           // forward converges and the inverse diverges
};

/// Precondition: nu > 2 and nu/2 <= alpha < nu - 1 (PreconditionError otherwise).
NonreversibleReport nonreversible_fixture(double alpha, double nu, std::vector<double> s = {1.0, 5.0},
                                          double tol = 1e-8);

}  // namespace oscint
