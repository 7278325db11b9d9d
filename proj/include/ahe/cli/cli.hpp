#pragma once

#include "ahe/catalog/catalog.hpp"
#include "ahe/check.hpp"
#include "ahe/moduli/moduli.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ahe::cli {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kSchemaVersion = "1.0";

/// `tag` or `tag:key=val,key=val`.
struct FamilySpec {
  std::string tag;
  std::map<std::string, double> params;
};

/// Throws Error{kUsage} naming the violated grammar rule.
FamilySpec parse_family_spec(const std::string& text);

/// Catalog metric for poincare, cusp, hyp-quotient:L, ads-schw:m,
/// taub-bolt:s,k and toral:m[,a,b,c]. Unknown tags or keys and missing
/// physical parameters are Error{kUsage}.
CatalogMetric make_family(const FamilySpec& spec);

/// bolt-period, translation or berger:k.
FamilyCurve make_curve(const FamilySpec& spec);

/// Default instance matrix of the batch runs.
std::vector<std::string> default_families();

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> families;
  std::vector<std::string> curves;
  std::optional<double> value;
  std::optional<double> tol;
  std::optional<int> grid;
  std::optional<std::pair<double, double>> range;
  std::pair<int, int> k_range{1, 100};
  std::string out;
  std::string format = "json";
};

struct Report {
  RunConfig config;
  std::vector<Check> checks;
  /// Subcommand-specific structured payload.
  nlohmann::json data = nlohmann::json::object();
  /// Set for `moduli --format csv`.
  std::optional<std::string> csv;
};

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const Report& r);
std::string to_csv(const Report& r);

/// Runs the subcommand pipeline. Library errors on a family become failing
/// records; Error{kUsage} propagates.
Report execute(const RunConfig& cfg);

struct CurveTable {
  std::string header;
  std::vector<std::pair<double, double>> rows;
};

/// (parameter, invariant) on `points` uniform values of [lo, hi] plus the
/// interior critical points; open ends take the end limit. Throws
/// Error{kInvalidParameter} for an empty grid.
CurveTable emit_curve(const FamilyCurve& curve, double lo, double hi, int points);
std::string to_csv(const CurveTable& t);

/// Exit 0 when every record passes, 1 on a failing record, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ahe::cli
