#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/function_spec.hpp"
#include "oscint/quad.hpp"

namespace oscint {

enum class Direction { Forward, Inverse };

/// Forward: int e^{-isx} f(x) dx. Inverse: (2 pi)^{-1} int e^{isx} f(x) dx.
struct TransformRequest {
  FunctionSpec f;
  double s = 0.0;
  Direction direction = Direction::Forward;
  TailStrategy strategy = TailStrategy::Auto;
  double tol = kDefaultTol;
  long long budget = kDefaultBudget;
};

/// A classifier-proven divergence yields status Diverged with trace
/// "ExistenceRefuted:<rule>" and no quadrature.
QuadResult transform(const TransformRequest& req);
QuadResult transform(const FunctionSpec& f, double s, double tol = kDefaultTol);
QuadResult inverse_transform(const FunctionSpec& f, double x, double tol = kDefaultTol);

enum class Verdict { ExistsProven, DivergesProven, Unknown };
std::string verdict_name(Verdict v);

struct Existence {
  Verdict verdict = Verdict::Unknown;
  std::string rule;  // absolute-tail, bv-tail, power-phase, chirp-range, lacunary-mass, ...
};

/// First applicable rule for existence of f^(s) (or of the inverse integral).
Existence classify_existence(const FunctionSpec& f, double s, Direction dir = Direction::Forward);

/// int_a^b f^ via the single integral i int f(x) [e^{-ibx} - e^{-iax}] dx / x,
/// split at +-1.
QuadResult interval_average(const FunctionSpec& f, double a, double b, double tol = kDefaultTol);

struct DiffPoint {
  double s = 0.0;
  cplx lhs{};
  cplx rhs{};
  double deviation = 0.0;
  Status status = Status::Converged;
};

struct DiffReport {
  std::vector<DiffPoint> points;
  double max_deviation = 0.0;
  bool all_converged = true;
};

/// Central difference of f^ against -i (x f)^ at the given points.
DiffReport freq_diff_check(const FunctionSpec& f, const std::vector<double>& s_points, double tol = 1e-10);
/// Five interior points of a finite interval.
DiffReport freq_diff_check(const FunctionSpec& f, const ExtInterval& s_interval, double tol = 1e-10);

/// (f')^(s) against i s f^(s); s = 0 is a PreconditionError.
DiffPoint time_diff_check(const FunctionSpec& f, double s, double tol = 1e-10);

struct ParsevalReport {
  QuadResult lhs;  // int psi phi^
  QuadResult rhs;  // int psi^ phi
  bool agree = false;
};

ParsevalReport parseval(const FunctionSpec& psi, const FunctionSpec& phi, double tol = 1e-6);

/// f^ as a function of s, evaluated by transform at each point (inner
/// tolerance `tol`). Points where f^ fails to converge evaluate to 0 and are
/// counted in `failures` when given. `breakpoints` become panel points.
FunctionSpec transformed_spec(const FunctionSpec& f, double tol, Direction dir = Direction::Forward,
                              std::vector<double> breakpoints = {0.0},
                              std::shared_ptr<std::atomic<long>> failures = nullptr);

struct QucReport {
  double m = 0.0;
  double delta = 0.0;
  bool satisfied = false;
  int probes = 0;
};

/// Empirical witness for quasi-uniform continuity of f^ at s0: the tail
/// integrals beyond m stay below eps for sampled |s - s0| < delta.
QucReport quc_probe(const FunctionSpec& f, double s0, double eps, double M);

struct TransformTable {
  std::vector<double> s_grid;
  std::vector<cplx> values;
  std::vector<Status> statuses;
  std::vector<double> errors;
  std::vector<long long> evaluations;
  std::vector<std::string> notes;  // classifier rule or strategy tags

  std::size_t size() const { return s_grid.size(); }
  std::string to_csv() const;  // s,re,im,status,err_est,evals
  nlohmann::json to_json() const;
};

/// Grid points run concurrently on up to `jobs` threads (0: OpenMP default).
TransformTable sweep(const FunctionSpec& f, const std::vector<double>& s_grid, Direction dir = Direction::Forward,
                     double tol = kDefaultTol, int jobs = 0, TailStrategy strategy = TailStrategy::Auto);
/// Reference implementation: same points, one after another.
TransformTable sweep_serial(const FunctionSpec& f, const std::vector<double>& s_grid,
                            Direction dir = Direction::Forward, double tol = kDefaultTol,
                            TailStrategy strategy = TailStrategy::Auto);

}  // namespace oscint
