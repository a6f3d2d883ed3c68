#pragma once

#include <string>
#include <vector>

namespace cmzv {

// One named assertion with a short diagnostic (measured agreement, the
// failing value, or the swept range).
struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> lines;
  bool ok() const;  // nonempty and every line passed
};

// Knobs for the verification suites.  guard is the certified agreement
// floor every numeric identity must reach; prec is the working precision
// the identities are computed at.  Family suites sweep every index of
// weight <= max_weight and depth <= max_depth over the fields in qs; the
// interpolation sweep is bounded by max_s and max_d instead.
struct VerifyConfig {
  std::vector<int> qs{2, 3};
  int max_s = 4;
  int max_d = 3;
  int max_weight = 5;
  int max_depth = 3;
  long long prec = 120;
  long long guard = 100;
};

// Suites in acceptance order: interp, example13, logpaths, mainthm,
// deformation, chen, anderson, props.
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& suite, const VerifyConfig& cfg);

// All indexes with 1 <= weight <= max_weight and depth <= max_depth, in
// deterministic order: by weight, then depth, then lexicographic.
std::vector<std::vector<int>> index_family(int max_weight, int max_depth);

}  // namespace cmzv
