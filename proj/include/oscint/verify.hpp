#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oscint/function_spec.hpp"
#include "oscint/quad.hpp"

namespace oscint {

/// Deterministic generator for the property suites. Doubles come from the top
/// 53 bits so instances are identical on every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform(double lo, double hi);
  int index(int n);  // 0..n-1

 private:
  std::uint64_t state_;
  std::uint64_t next();
};

struct PowerPhasePoint {
  double gamma = 0.0;
  double delta = 0.0;
  Status endpoint;  // e^{i x^-gamma} x^delta on (0, 1]
  Status tail;      // e^{i x^gamma} x^delta on [1, inf)
  bool endpoint_ok = false;
  bool tail_ok = false;
};

/// gamma in {0.25, 0.5, 1, 2, 4} x delta in {-3, -2, -1.2, -1, -0.5, 0, 1, 2}.
std::vector<PowerPhasePoint> power_phase_grid(double tol = 1e-8);

struct FubiniFixture {
  std::string name;
  FunctionSpec f;
  Bivariate g;
  ExtInterval A;
  ExtInterval B;
};
std::vector<FubiniFixture> fubini_fixtures();

/// An integrable f and a BV g on a finite interval, drawn from the corpus families.
struct ProductBoundInstance {
  std::string label;
  FunctionSpec f;
  FunctionSpec g;
  ExtInterval I;
};
ProductBoundInstance random_product_instance(Rng& rng);

/// f integrable on R and g in L1 with bounded variation.
struct ConvPair {
  std::string label;
  FunctionSpec f;
  FunctionSpec g;
};
ConvPair random_conv_pair(Rng& rng);

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::vector<std::string> failures;  // first few, for the report
  double seconds = 0.0;
  bool ok() const { return total > 0 && passed == total; }
  nlohmann::json to_json() const;
};

struct VerifySummary {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;
  bool ok() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> suite_names();
/// n = 0 uses the suite's default instance count. Throws UnknownEntry.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 1, int n = 0);
/// Empty `names` runs every suite.
VerifySummary run_verify(const std::vector<std::string>& names, std::uint64_t seed = 1, int n = 0);

}  // namespace oscint
