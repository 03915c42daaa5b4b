#pragma once

#include "uninorm/budget.hpp"
#include "uninorm/io.hpp"
#include "uninorm/pseudorandom.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uninorm {

/// Parameter sweep shared by all experiments. `sizes` is N (group order)
/// or |V| (tensor side). Seeds run base_seed, ..., base_seed + seeds - 1.
struct ExperimentGrid {
  std::vector<int> s{2};
  std::vector<std::int64_t> sizes{8, 16};
  std::vector<double> eta{0.5, 0.2, 0.05};
  int seeds = 16;
  std::uint64_t base_seed = 0;
  /// Majorant family swept next to the constant one.
  MajorantKind family = MajorantKind::sparse_set;
  double delta = 0.5;
  double epsilon = 0.5;
  /// prop23 only; infinity is the bounded case.
  std::vector<double> p{std::numeric_limits<double>::infinity(), 2.0, 4.0};
  /// moments only.
  std::vector<int> k{1, 2};
  Budget budget;
};

/// Missing keys keep their defaults; "p" accepts "inf".
ExperimentGrid parse_grid(const Json& j);
Json serialize(const ExperimentGrid& grid);

using CellValue = std::variant<std::monostate, double, std::int64_t, std::string>;

struct CellCheck {
  std::string name;
  /// The statement the inequality instantiates.
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
};

struct Cell {
  std::string family;
  /// Sub-experiment (prop31: "tensor" / "group"; appendix: the property).
  std::string kind;
  int s = 0;
  std::int64_t size = 0;
  std::optional<double> eta;
  std::optional<double> p;
  std::optional<int> ell;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string reason;
  /// Aligned with ExperimentReport::measurements.
  std::vector<CellValue> values;
  std::vector<CellCheck> checks;
  double seconds = 0.0;
};

struct Assertion {
  std::string name;
  std::string anchor;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  ExperimentGrid grid;
  std::vector<std::string> measurements;
  std::vector<Cell> cells;
  std::vector<Assertion> assertions;

  bool passed() const;
  std::size_t failures() const;
};

/// Harness trend rule over per-seed series ordered by decreasing eta:
/// every series nonincreasing within `slack`, and the median across
/// seeds strictly decreasing.
struct TrendVerdict {
  bool per_seed = false;
  bool median_strict = false;
  std::size_t seeds = 0;
  std::vector<double> medians;
  std::string detail;

  bool passed() const { return per_seed && median_strict; }
};

TrendVerdict evaluate_trend(const std::vector<std::vector<double>>& series, std::size_t min_seeds = 16,
                            double slack = 1e-9);

double median(std::vector<double> v);

ExperimentReport verify_prop21(const ExperimentGrid& grid);
ExperimentReport verify_prop23(const ExperimentGrid& grid);
ExperimentReport verify_prop31_and_cor34(const ExperimentGrid& grid);
ExperimentReport verify_appendix(const ExperimentGrid& grid);
/// |E[1_A N^k] - P(A)| for ν = 1 + eps (nu_family - 1), eps over grid.eta.
ExperimentReport verify_moments(const ExperimentGrid& grid);

/// Dispatches on "prop21", "prop23", "prop31", "appendix", "moments".
ExperimentReport run_experiment(std::string_view id, const ExperimentGrid& grid);

/// Default grid for an experiment id.
ExperimentGrid default_grid(std::string_view id);

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

struct EmitOptions {
  /// Include wall-clock seconds; off by default so reruns are byte-identical.
  bool timing = false;
};

std::string render_report(const ExperimentReport& report, ReportFormat format, const EmitOptions& options = {});

/// Writes render_report to `path`; raises io-failure on error.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path,
                 const EmitOptions& options = {});

}  // namespace uninorm
