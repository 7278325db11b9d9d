#include "ahe/check.hpp"

#include <cmath>
#include <utility>

namespace ahe {

const char* to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kPassDiscrepancy: return "pass (paper-discrepancy-noted)";
    case Status::kInfo: return "info";
  }
  return "fail";
}

Check make_check(std::string id, std::string anchor, double value, double expected,
                 double residual, double tolerance, std::string note) {
  Check c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.value = value;
  c.expected = expected;
  c.residual = residual;
  c.tolerance = tolerance;
  c.note = std::move(note);
  c.status = (std::isfinite(residual) && residual <= tolerance) ? Status::kPass : Status::kFail;
  return c;
}

Check compare(std::string id, std::string anchor, double value, double expected,
              double tolerance, std::string note) {
  return make_check(std::move(id), std::move(anchor), value, expected,
                    std::abs(value - expected), tolerance, std::move(note));
}

}  // namespace ahe
