#pragma once

#include <string>
#include <vector>

namespace ahe {

enum class Status { kPass, kFail, kPassDiscrepancy, kInfo };

const char* to_string(Status s);

/// One verified quantity. `anchor` names the identity or statement checked.
struct Check {
  std::string id;
  std::string anchor;
  Status status = Status::kInfo;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  double residual = 0.0;
  std::string note;
};

/// pass iff residual <= tolerance (and residual is finite).
Check make_check(std::string id, std::string anchor, double value, double expected,
                 double residual, double tolerance, std::string note = {});

/// |value - expected| against tolerance.
Check compare(std::string id, std::string anchor, double value, double expected,
              double tolerance, std::string note = {});

inline bool passed(const Check& c) {
  return c.status == Status::kPass || c.status == Status::kPassDiscrepancy ||
         c.status == Status::kInfo;
}

inline bool all_passed(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!passed(c)) return false;
  return true;
}

}  // namespace ahe
