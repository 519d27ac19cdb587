#ifndef DLAP_REPRODUCE_HPP
#define DLAP_REPRODUCE_HPP

// Reference tables and the checks that compare fresh runs with them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dlap/error.hpp"
#include "dlap/limits.hpp"
#include "dlap/scalar.hpp"
#include "dlap/shearer.hpp"
#include "dlap/tree.hpp"

namespace dlap {

enum class TableId { tau0_table, lam1_5_half, lam1_5_star, lam5_4_half, lam5_4_near1, lam2025 };

inline constexpr TableId kAllTables[] = {TableId::tau0_table,  TableId::lam1_5_half,  TableId::lam1_5_star,
                                         TableId::lam5_4_half, TableId::lam5_4_near1, TableId::lam2025};

inline const char* to_string(TableId id) {
  switch (id) {
    case TableId::tau0_table: return "tau0_table";
    case TableId::lam1_5_half: return "lam1_5_half";
    case TableId::lam1_5_star: return "lam1_5_star";
    case TableId::lam5_4_half: return "lam5_4_half";
    case TableId::lam5_4_near1: return "lam5_4_near1";
    case TableId::lam2025: return "lam2025";
  }
  return "?";
}

inline TableId parse_table(std::string_view name) {
  for (auto id : kAllTables) {
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorKind::parse, "unknown table '" + std::string(name) + "'");
}

/// Minimum precision of the lam2025 run; the error sits near 10^-193.
inline constexpr unsigned kFlagshipDigits = 250;

struct Tau0Reference {
  const char* s;
  const char* value;
  const char* tolerance;  // half a unit in the last printed place
};

inline constexpr Tau0Reference kTau0Table[] = {
    {"0.001", "1.002059342", "5e-9"}, {"0.01", "1.020698941", "5e-9"}, {"0.1", "1.217675873", "5e-9"},
    {"0.2", "1.459682287", "5e-9"},   {"0.3", "1.726955383", "5e-9"},  {"0.4", "2.020441181", "5e-9"},
    {"0.5", "2.341081806", "5e-9"},   {"0.6", "2.689803637", "5e-9"},  {"0.7", "3.067507378", "5e-9"},
    {"0.8", "3.475060020", "5e-9"},   {"0.9", "3.913288615", "5e-9"},  {"1.0", "4.382975768", "5e-9"},
    {"5", "53.36963067", "5e-9"},     {"10", "203.4647577", "5e-8"},
};

struct ShearerReference {
  int k;
  const char* s;  // literal s for rows that vary it, otherwise null
  std::vector<std::int64_t> counts;  // full list when printed in full
  std::vector<std::int64_t> head;
  std::vector<std::int64_t> tail;
  const char* rho;  // printed digits
  double error;
  double relative_tolerance;
};

struct ReferenceTable {
  TableId id;
  const char* lambda;
  ParameterChoice choice;
  std::vector<ShearerReference> rows;
};

inline ReferenceTable reference_table(TableId id) {
  const auto half = ParameterChoice::parse("half-star");
  const auto star = ParameterChoice::parse("star");
  switch (id) {
    case TableId::lam1_5_half:
      return {id, "1.5", half,
              {{5, nullptr, {20, 4, 0, 2, 9}, {}, {}, "1.499999827168959", 1.72831041e-7, 0.02},
               {10, nullptr, {20, 4, 0, 2, 9, 4, 1, 7, 11, 8}, {}, {}, "1.499999999999235", 7.65e-13, 0.02},
               {20, nullptr, {}, {20, 4, 0}, {6, 9, 6}, "1.499999999999999", 2.68e-23, 0.02},
               {30, nullptr, {}, {20, 4, 0}, {9, 10, 6}, "1.499999999999999", 2.33e-34, 0.02},
               {50, nullptr, {}, {20, 4, 0}, {3, 9, 3}, "1.499999999999999", 7.26e-55, 0.02}}};
    case TableId::lam1_5_star:
      return {id, "1.5", star,
              {{5, nullptr, {4, 1, 0, 1, 2}, {}, {}, "1.49854070", 1.459e-3, 0.02},
               {10, nullptr, {4, 1, 0, 1, 1, 1, 2, 0, 1, 1}, {}, {}, "1.49986673", 1.332e-4, 0.02},
               {20, nullptr, {}, {4, 1, 0, 1, 1, 1, 2, 0}, {0, 1, 2}, "1.49999959", 4.035e-7, 0.02},
               {50, nullptr, {}, {4, 1, 0, 1, 1, 1, 2, 0}, {0, 1, 2}, "1.49999999", 7.013e-17, 0.02},
               {80, nullptr, {}, {4, 1, 0, 1, 1, 1, 2, 0}, {0, 1, 1}, "1.49999999", 1.704e-26, 0.02}}};
    case TableId::lam5_4_half:
      return {id, "5.4", half,
              {{5, nullptr, {31, 23, 9, 17, 23}, {}, {}, "5.39999978119", 2.18e-7, 0.02},
               {10, nullptr, {}, {31, 23, 9}, {12, 20, 22}, "5.39999999999", 5.05e-14, 0.02},
               {20, nullptr, {}, {31, 23, 9}, {25, 19, 16}, "5.39999999999", 4.10e-24, 0.02},
               {50, nullptr, {}, {31, 23, 9}, {24, 24, 24}, "5.39999999999", 2.18e-57, 0.02},
               {80, nullptr, {}, {31, 23, 9}, {4, 22, 21}, "5.39999999999", 2.43e-75, 0.02}}};
    case TableId::lam5_4_near1:
      return {id, "5.4", ParameterChoice{},
              {{150, "0.9", {}, {4, 1, 2}, {2, 2, 2}, "5.3999999999", 4.99e-42, 0.05},
               {150, "0.99", {}, {3, 1, 1}, {1, 2, 1}, "5.3999999999", 1.04e-29, 0.05},
               {150, "0.999", {}, {3, 1, 1}, {1, 1, 2}, "5.3656282604", 3.43e-2, 0.05},
               {150, "0.9999", {}, {3, 1, 1}, {1, 1, 2}, "5.3716157858", 2.83e-2, 0.05}}};
    case TableId::lam2025:
      return {id, "2025", half,
              {{150, nullptr, {}, {8108, 7431, 8095, 8086, 8102, 8093}, {8095, 8090, 8102, 8102, 8092},
                "2024.9999999999999999999999", 4.332248e-193, 0.02}}};
    case TableId::tau0_table: break;
  }
  throw Error(ErrorKind::domain, std::string(to_string(id)) + " is not a caterpillar table");
}

inline constexpr std::int64_t kFlagshipVertices = 1211693;
inline constexpr double kFlagshipErrorLow = 1e-195;
inline constexpr double kFlagshipErrorHigh = 1e-190;

struct RowCheck {
  std::string row;
  std::string what;
  bool ok = false;
  std::string detail;
};

struct TableResult {
  TableId id;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<RowCheck> checks;
  std::vector<ReportRow> runs;  // caterpillar tables only

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.ok) return false;
    }
    return true;
  }

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

namespace detail {

inline std::string join_counts(const std::vector<std::int64_t>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ']';
  return out.str();
}

inline bool matches_head(const std::vector<std::int64_t>& got, const std::vector<std::int64_t>& want) {
  return want.size() <= got.size() && std::equal(want.begin(), want.end(), got.begin());
}

inline bool matches_tail(const std::vector<std::int64_t>& got, const std::vector<std::int64_t>& want) {
  return want.size() <= got.size() && std::equal(want.rbegin(), want.rend(), got.rbegin());
}

/// |value - printed| within one unit of the last printed place or `band`,
/// whichever is wider. Printed digits may be rounded or truncated.
inline bool near_printed(const std::string& value, const std::string& printed, double band) {
  PrecisionScope scope(static_cast<unsigned>(std::max<std::size_t>(value.size() + 10, 60)));
  const Scalar v(value);
  const Scalar p(printed);
  const auto dot = printed.find('.');
  const int places = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
  const Scalar allowed = std::max(pow10<Scalar>(-places), Scalar(band));
  return !(allowed < abs(v - p));
}

inline std::vector<RowCheck> check_row(const std::string& key, const ReportRow& row, const ShearerReference& ref) {
  std::vector<RowCheck> out;
  const auto& got = row.counts.counts;
  if (!ref.counts.empty()) {
    out.push_back({key, "counts", got == ref.counts, join_counts(got) + " vs " + join_counts(ref.counts)});
  }
  if (!ref.head.empty()) {
    out.push_back({key, "leading counts", matches_head(got, ref.head),
                   format_counts_abbrev(row.counts) + " vs head " + join_counts(ref.head)});
  }
  if (!ref.tail.empty()) {
    out.push_back({key, "trailing counts", matches_tail(got, ref.tail),
                   format_counts_abbrev(row.counts) + " vs tail " + join_counts(ref.tail)});
  }
  out.push_back({key, "rho", near_printed(row.rho_full, ref.rho, ref.relative_tolerance * ref.error),
                 row.rho_full.substr(0, 40) + " vs " + ref.rho});
  const double rel = std::abs(row.error_value - ref.error) / ref.error;
  std::ostringstream detail;
  detail << row.error << " vs " << ref.error << " (relative difference " << rel << ", allowed "
         << ref.relative_tolerance << ")";
  out.push_back({key, "error", rel <= ref.relative_tolerance, detail.str()});
  return out;
}

}  // namespace detail

/// Recomputes one reference table. `full_counts`, when given, receives every
/// row's complete count list as "key [r1,...,rk]" lines.
inline TableResult reproduce(TableId id, unsigned digits, int print_digits = 15, std::ostream* full_counts = nullptr) {
  TableResult result{id, {}, {}, {}, {}};
  if (id == TableId::tau0_table) {
    PrecisionScope scope(digits);
    result.header = {"s", "tau0"};
    for (const auto& ref : kTau0Table) {
      const Scalar s = parse_real<Scalar>(ref.s);
      const Scalar value = tau0(s).value;
      const Scalar diff = abs(value - parse_real<Scalar>(ref.value));
      result.rows.push_back({ref.s, format_real(value, print_digits)});
      result.checks.push_back({ref.s, "tau0", !(parse_real<Scalar>(ref.tolerance) < diff),
                               format_real(value, 15) + " vs " + ref.value + " (difference " + format_real(diff, 3) +
                                   ", allowed " + ref.tolerance + ")"});
    }
    return result;
  }

  const ReferenceTable table = reference_table(id);
  if (id == TableId::lam2025 && digits < kFlagshipDigits) {
    throw Error(ErrorKind::precision,
                "lam2025 needs at least " + std::to_string(kFlagshipDigits) + " digits, got " + std::to_string(digits),
                kFlagshipDigits);
  }
  const bool by_s = id == TableId::lam5_4_near1;
  result.header = {by_s ? "s" : "k", "counts", "rho", "error"};
  for (const auto& ref : table.rows) {
    const ParameterChoice choice = ref.s ? ParameterChoice::parse(ref.s) : table.choice;
    const ReportRow row = convergence_report(table.lambda, choice, {ref.k}, digits, print_digits).front();
    const std::string key = by_s ? std::string(ref.s) : std::to_string(ref.k);
    result.rows.push_back({key, format_counts_abbrev(row.counts), row.rho, row.error});
    if (full_counts) *full_counts << key << ' ' << format_caterpillar(row.counts) << '\n';
    for (auto& c : detail::check_row(key, row, ref)) result.checks.push_back(std::move(c));
    if (id == TableId::lam2025) {
      const auto vertices = row.counts.vertex_count();
      result.checks.push_back({key, "vertex count", vertices == kFlagshipVertices,
                               std::to_string(vertices) + " vs " + std::to_string(kFlagshipVertices)});
      const bool in_range = kFlagshipErrorLow < row.error_value && row.error_value < kFlagshipErrorHigh;
      std::ostringstream detail;
      detail << row.error << " vs (" << kFlagshipErrorLow << ", " << kFlagshipErrorHigh << ")";
      result.checks.push_back({key, "error range", in_range, detail.str()});
    }
    result.runs.push_back(row);
  }
  return result;
}

}  // namespace dlap

#endif  // DLAP_REPRODUCE_HPP
