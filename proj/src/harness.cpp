#include "uninorm/harness.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/error.hpp"
#include "uninorm/random.hpp"
#include "uninorm/uniformity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace uninorm {

namespace {

constexpr double kSlack = 1e-9;

// Stream tags for derive_seed, one per random object a cell draws.
constexpr std::uint64_t kSignTag = 0x5167;
constexpr std::uint64_t kSecondTag = 0x5eed;
constexpr std::uint64_t kSetTag = 0xa5e7;

const char* const kAnchorWeak = "weak-norm control of the uniformity norm under a pseudorandom majorant";
const char* const kAnchorPsi = "weak-norm control relative to an L_p reference psi";
const char* const kAnchorCut = "cut-norm control of the box norm under a pseudorandom majorant";
const char* const kAnchorCutGroup = "cut^s control of the U^s norm (lifted group)";
const char* const kAnchorReverse = "bounded reverse bound ||f||^{2^s} <= weak norm for |f| <= 1";
const char* const kAnchorGcs = "Gowers-Cauchy-Schwarz inequality for ell-box norms";
const char* const kAnchorNorm = "box_ell is a norm, nondecreasing in ell";
const char* const kAnchorBoxRoot = "box_ell <= box^{1/ell^s} for [-1,1]-valued tensors, up to o(1) under a majorant";
const char* const kAnchorMoment = "moment estimate E[1_A N^k] -> P(A) for the calibration function";

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double bounded_root(double eta, int s) { return std::pow(eta, 1.0 / std::ldexp(1.0, s)); }

bool within(double lhs, double rhs) { return lhs <= rhs + kSlack * std::max(1.0, std::abs(rhs)); }

std::vector<double> eta_levels(const ExperimentGrid& grid) {
  std::vector<double> v = grid.eta;
  std::sort(v.begin(), v.end(), std::greater<>());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<MajorantKind> families(const ExperimentGrid& grid) {
  if (grid.family == MajorantKind::constant_one) return {MajorantKind::constant_one};
  return {MajorantKind::constant_one, grid.family};
}

MajorantSpec family_spec(MajorantKind kind, const ExperimentGrid& grid, std::uint64_t seed) {
  MajorantSpec spec;
  spec.kind = kind;
  spec.delta = grid.delta;
  spec.epsilon = grid.epsilon;
  spec.seed = seed;
  return spec;
}

std::vector<std::uint64_t> seeds_of(const ExperimentGrid& grid) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < grid.seeds; ++i) out.push_back(grid.base_seed + static_cast<std::uint64_t>(i));
  return out;
}

// Writes measurement values by column name.
class CellWriter {
 public:
  explicit CellWriter(const std::vector<std::string>& columns) : columns_(columns) {}

  Cell make(std::string family, std::string kind, int s, std::int64_t size, std::uint64_t seed) const {
    Cell c;
    c.family = std::move(family);
    c.kind = std::move(kind);
    c.s = s;
    c.size = size;
    c.seed = seed;
    c.values.assign(columns_.size(), std::monostate{});
    return c;
  }

  void set(Cell& cell, std::string_view name, CellValue value) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw std::logic_error("unknown measurement " + std::string(name));
    cell.values[static_cast<std::size_t>(it - columns_.begin())] = std::move(value);
  }

 private:
  const std::vector<std::string>& columns_;
};

void skip(Cell& cell, const std::string& reason) {
  cell.skipped = true;
  cell.reason = reason;
}

void check(Cell& cell, std::string name, std::string anchor, double lhs, double rhs, bool passed) {
  cell.checks.push_back({std::move(name), std::move(anchor), lhs, rhs, passed});
}

// Runs one unit per entry in parallel; each unit returns its cells and
// handles library errors itself (skipping cells with a reason).
template <class Unit, class Fn>
std::vector<Cell> run_units(const std::vector<Unit>& units, Fn&& fn) {
  std::vector<std::vector<Cell>> out(units.size());
  std::vector<std::exception_ptr> errors(units.size());
  const auto n = static_cast<std::int64_t>(units.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto start = std::chrono::steady_clock::now();
    try {
      out[idx] = fn(units[idx]);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
    const double share = seconds_since(start) / static_cast<double>(std::max<std::size_t>(out[idx].size(), 1));
    for (auto& c : out[idx]) c.seconds = share;
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Cell> cells;
  for (auto& v : out) {
    for (auto& c : v) cells.push_back(std::move(c));
  }
  return cells;
}

// Upper bound on ||f||_{w^s}: the exact search when it fits the budget,
// otherwise the additive cut norm, which dominates it.
struct WeakBound {
  double value = 0.0;
  std::string method;
};

WeakBound certified_weak(const GroupFunction& f, int s, const Budget& budget) {
  SearchOptions opts;
  opts.budget = budget;
  try {
    return {weak_norm(f, s, opts).lower_bound, "weak-exact"};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
  }
  return {additive_cut_norm(f, s, opts).lower_bound, "cut-bound"};
}

double scale_for(double value, double eta) { return value > eta ? eta / value : 1.0; }

std::string p_label(double p) { return std::isinf(p) ? "inf" : format_double(p); }

void add_check_assertions(ExperimentReport& report) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::map<std::string, std::string> anchors;
  for (const auto& cell : report.cells) {
    for (const auto& c : cell.checks) {
      if (!counts.contains(c.name)) {
        order.push_back(c.name);
        anchors[c.name] = c.anchor;
      }
      auto& [held, total] = counts[c.name];
      ++total;
      if (c.passed) ++held;
    }
  }
  for (const auto& name : order) {
    const auto [held, total] = counts[name];
    report.assertions.push_back(
        {name, anchors[name], held == total, std::to_string(held) + "/" + std::to_string(total) + " cells hold"});
  }
}

// One trend assertion per (family, kind, s, size, p) on `measure`.
void add_trend_assertions(ExperimentReport& report, std::string_view measure, const std::string& anchor,
                          bool median_only = false) {
  const auto col = static_cast<std::size_t>(
      std::find(report.measurements.begin(), report.measurements.end(), measure) - report.measurements.begin());
  const auto levels = eta_levels(report.grid);

  std::vector<std::string> keys;
  std::map<std::string, std::map<std::uint64_t, std::map<double, double>>> table;
  for (const auto& cell : report.cells) {
    if (!cell.eta) continue;
    std::string key = "family=" + cell.family;
    if (!cell.kind.empty()) key += " kind=" + cell.kind;
    key += " s=" + std::to_string(cell.s) + " N=" + std::to_string(cell.size);
    if (cell.p) key += " p=" + p_label(*cell.p);
    if (!table.contains(key)) keys.push_back(key);
    auto& row = table[key][cell.seed];
    if (!cell.skipped && std::holds_alternative<double>(cell.values[col])) row[*cell.eta] = std::get<double>(cell.values[col]);
  }
  for (const auto& key : keys) {
    std::vector<std::vector<double>> series;
    for (const auto& [seed, row] : table[key]) {
      std::vector<double> s;
      for (double eta : levels) {
        const auto it = row.find(eta);
        if (it == row.end()) break;
        s.push_back(it->second);
      }
      if (s.size() == levels.size()) series.push_back(std::move(s));
    }
    const auto verdict = evaluate_trend(series);
    report.assertions.push_back({"trend " + std::string(measure) + " [" + key + "]", anchor,
                                 median_only ? verdict.median_strict : verdict.passed(), verdict.detail});
  }
}

// ---------------------------------------------------------------- prop21

struct GroupUnit {
  MajorantKind family;
  int s;
  std::int64_t n;
  std::uint64_t seed;
  double p = std::numeric_limits<double>::infinity();
};

std::vector<GroupUnit> group_units(const ExperimentGrid& grid, bool with_p) {
  std::vector<GroupUnit> units;
  const std::vector<double> ps = with_p ? grid.p : std::vector<double>{std::numeric_limits<double>::infinity()};
  for (auto fam : families(grid)) {
    for (int s : grid.s) {
      for (auto n : grid.sizes) {
        for (double p : ps) {
          for (auto seed : seeds_of(grid)) units.push_back({fam, s, n, seed, p});
        }
      }
    }
  }
  return units;
}

std::vector<Cell> level_cells(const CellWriter& w, const ExperimentGrid& grid, const std::string& family,
                              const std::string& kind, int s, std::int64_t size, std::uint64_t seed) {
  std::vector<Cell> cells;
  for (double eta : eta_levels(grid)) {
    auto c = w.make(family, kind, s, size, seed);
    c.eta = eta;
    cells.push_back(std::move(c));
  }
  return cells;
}

// Shared body of prop21 / prop23: f = nu r rescaled until the certified
// weak bound is at most eta, then ||f||_{U^s}.
void weak_sweep(const CellWriter& w, const ExperimentGrid& grid, std::vector<Cell>& cells, const GroupFunction& nu,
                int s, bool bounded) {
  Rng rng(derive_seed(cells.front().seed, kSignTag));
  const auto f = nu * GroupFunction(nu.group(), rng.signs(static_cast<std::size_t>(nu.group().order())));
  const auto weak = certified_weak(f, s, grid.budget);
  for (auto& cell : cells) {
    const double eta = *cell.eta;
    const double t = scale_for(weak.value, eta);
    const double us = gowers_norm(f * t, s, NormMethod::automatic, grid.budget).value;
    w.set(cell, "weak_method", weak.method);
    w.set(cell, "weak_base", weak.value);
    w.set(cell, "scale", t);
    w.set(cell, "weak_certified", t * weak.value);
    w.set(cell, "us_norm", us);
    if (bounded) {
      const double bound = bounded_root(eta, s);
      w.set(cell, "reverse_bound", bound);
      check(cell, "bounded reverse bound", kAnchorReverse, us, bound, within(us, bound));
    }
  }
}

void skip_all(std::vector<Cell>& cells, const std::string& reason) {
  for (auto& c : cells) skip(c, reason);
}

}  // namespace

bool ExperimentReport::passed() const { return failures() == 0; }

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(std::count_if(assertions.begin(), assertions.end(), [](const Assertion& a) { return !a.passed; }));
}

double median(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorKind::invalid_input, "median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

TrendVerdict evaluate_trend(const std::vector<std::vector<double>>& series, std::size_t min_seeds, double slack) {
  TrendVerdict out;
  out.seeds = series.size();
  std::ostringstream detail;
  if (series.empty() || series.front().size() < 2) {
    out.detail = "needs at least two eta levels and one complete seed";
    return out;
  }
  const std::size_t levels = series.front().size();
  std::size_t violations = 0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i + 1 < levels; ++i) {
      if (s[i + 1] > s[i] + slack) {
        ++violations;
        break;
      }
    }
  }
  out.per_seed = violations == 0;
  for (std::size_t i = 0; i < levels; ++i) {
    std::vector<double> col;
    for (const auto& s : series) col.push_back(s[i]);
    out.medians.push_back(median(std::move(col)));
  }
  out.median_strict = series.size() >= min_seeds;
  for (std::size_t i = 0; i + 1 < levels; ++i) out.median_strict = out.median_strict && out.medians[i + 1] < out.medians[i];

  detail << "medians";
  for (std::size_t i = 0; i < levels; ++i) detail << (i ? " > " : " ") << format_double(out.medians[i]);
  detail << "; " << series.size() << " seeds";
  if (series.size() < min_seeds) detail << " (need " << min_seeds << ")";
  detail << "; " << violations << " seeds not monotone";
  out.detail = detail.str();
  return out;
}

ExperimentReport verify_prop21(const ExperimentGrid& grid) {
  ExperimentReport report{"prop21", grid, {"nu_mean", "nu_u2s_dev", "weak_method", "weak_base", "scale",
                                           "weak_certified", "us_norm", "reverse_bound"}, {}, {}};
  const CellWriter w(report.measurements);
  report.cells = run_units(group_units(grid, false), [&](const GroupUnit& u) {
    auto cells = level_cells(w, grid, std::string(to_string(u.family)), "", u.s, u.n, u.seed);
    try {
      const auto nu = generate_majorant(family_spec(u.family, grid, u.seed), FiniteAbelianGroup::cyclic(u.n)).nu;
      const auto cert = certify(nu, u.s, std::nullopt, grid.budget);
      for (auto& c : cells) {
        w.set(c, "nu_mean", cert.mean);
        if (cert.u2s_dev) w.set(c, "nu_u2s_dev", *cert.u2s_dev);
      }
      weak_sweep(w, grid, cells, nu, u.s, u.family == MajorantKind::constant_one);
    } catch (const Error& e) {
      skip_all(cells, e.what());
    }
    return cells;
  });
  add_check_assertions(report);
  add_trend_assertions(report, "us_norm", kAnchorWeak);
  return report;
}

ExperimentReport verify_prop23(const ExperimentGrid& grid) {
  ExperimentReport report{"prop23", grid, {"q", "psi_lp", "psi_uls", "nu_mean", "nu_psi_dev", "weak_method",
                                           "weak_base", "scale", "weak_certified", "us_norm", "reverse_bound"}, {}, {}};
  const CellWriter w(report.measurements);
  report.cells = run_units(group_units(grid, true), [&](const GroupUnit& u) {
    auto cells = level_cells(w, grid, std::string(to_string(u.family)), "", u.s, u.n, u.seed);
    for (auto& c : cells) c.p = u.p;
    try {
      const auto z = FiniteAbelianGroup::cyclic(u.n);
      const int ell = group_ell(u.p);
      GroupFunction psi = GroupFunction::constant(z, 1.0);
      if (!std::isinf(u.p)) {
        // cosine bump normalized so that ||psi||_p <= 1 and ||psi||_{U^{ell s}} <= 1
        psi = GroupFunction::from(z, [&](Element x) {
          return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(x) / static_cast<double>(u.n));
        });
        const double size = std::max(lp_norm(psi, u.p), gowers_norm(psi, ell * u.s, NormMethod::automatic, grid.budget).value);
        psi = psi * (1.0 / size);
      }
      const auto ref = make_psi(psi, u.p);
      const double psi_uls = gowers_norm(psi, ref.ell * u.s, NormMethod::automatic, grid.budget).value;
      const auto base = generate_majorant(family_spec(u.family, grid, u.seed), z).nu;
      const auto nu = psi * base;
      const auto cert = certify(nu, u.s, ref, grid.budget);
      for (auto& c : cells) {
        c.ell = ref.ell;
        w.set(c, "q", ref.q);
        w.set(c, "psi_lp", std::isinf(u.p) ? psi.max_abs() : lp_norm(psi, u.p));
        w.set(c, "psi_uls", psi_uls);
        w.set(c, "nu_mean", cert.mean);
        if (cert.psi_dev) w.set(c, "nu_psi_dev", *cert.psi_dev);
      }
      if (!cert.psi_dev) throw Error(ErrorKind::budget_exceeded, "psi deviation unavailable");
      weak_sweep(w, grid, cells, nu, u.s, std::isinf(u.p) && u.family == MajorantKind::constant_one);
    } catch (const Error& e) {
      skip_all(cells, e.what());
    }
    return cells;
  });
  add_check_assertions(report);
  add_trend_assertions(report, "us_norm", kAnchorPsi);
  return report;
}

ExperimentReport verify_prop31_and_cor34(const ExperimentGrid& grid) {
  ExperimentReport report{"prop31", grid, {"nu_mean", "nu_dev", "cut_base", "scale", "cut_certified", "norm",
                                           "reverse_bound"}, {}, {}};
  const CellWriter w(report.measurements);
  struct Unit {
    GroupUnit base;
    bool tensor;
  };
  std::vector<Unit> units;
  for (bool tensor : {true, false}) {
    for (const auto& u : group_units(grid, false)) units.push_back({u, tensor});
  }
  report.cells = run_units(units, [&](const Unit& unit) {
    const auto& u = unit.base;
    auto cells = level_cells(w, grid, std::string(to_string(u.family)), unit.tensor ? "tensor" : "group", u.s, u.n,
                             u.seed);
    const bool bounded = u.family == MajorantKind::constant_one;
    SearchOptions opts;
    opts.budget = grid.budget;
    Rng rng(derive_seed(u.seed, kSignTag));
    try {
      const auto spec = family_spec(u.family, grid, u.seed);
      if (unit.tensor) {
        const auto nu = generate_majorant(spec, u.n, u.s).nu;
        const auto cert = certify(nu, std::nullopt, grid.budget);
        const auto F = nu * TensorFunction(u.n, u.s, rng.signs(nu.size()));
        const double cut = cut_norm(F, opts).lower_bound;
        for (auto& c : cells) {
          const double t = scale_for(cut, *c.eta);
          const double box = box_norm(F * t, grid.budget).value;
          w.set(c, "nu_mean", cert.mean);
          if (cert.box4_dev) w.set(c, "nu_dev", *cert.box4_dev);
          w.set(c, "cut_base", cut);
          w.set(c, "scale", t);
          w.set(c, "cut_certified", t * cut);
          w.set(c, "norm", box);
          if (bounded) {
            const double bound = bounded_root(*c.eta, u.s);
            w.set(c, "reverse_bound", bound);
            check(c, "bounded reverse bound (box)", kAnchorReverse, box, bound, within(box, bound));
          }
        }
      } else {
        const auto nu = generate_majorant(spec, FiniteAbelianGroup::cyclic(u.n)).nu;
        const auto cert = certify(nu, u.s, std::nullopt, grid.budget);
        const auto f = nu * GroupFunction(nu.group(), rng.signs(nu.size()));
        const double cut = additive_cut_norm(f, u.s, opts).lower_bound;
        for (auto& c : cells) {
          const double t = scale_for(cut, *c.eta);
          const double us = gowers_norm(f * t, u.s, NormMethod::automatic, grid.budget).value;
          w.set(c, "nu_mean", cert.mean);
          if (cert.us4_dev) w.set(c, "nu_dev", *cert.us4_dev);
          w.set(c, "cut_base", cut);
          w.set(c, "scale", t);
          w.set(c, "cut_certified", t * cut);
          w.set(c, "norm", us);
          if (bounded) {
            const double bound = bounded_root(*c.eta, u.s);
            w.set(c, "reverse_bound", bound);
            check(c, "bounded reverse bound (lifted group)", kAnchorReverse, us, bound, within(us, bound));
          }
        }
      }
    } catch (const Error& e) {
      skip_all(cells, e.what());
    }
    return cells;
  });
  add_check_assertions(report);
  add_trend_assertions(report, "norm", std::string(kAnchorCut) + "; " + kAnchorCutGroup);
  return report;
}

ExperimentReport verify_appendix(const ExperimentGrid& grid) {
  ExperimentReport report{"appendix", grid, {"lhs", "rhs", "nu_dev", "box4", "box_root", "excess"}, {}, {}};
  const CellWriter w(report.measurements);
  struct Unit {
    int s;
    std::int64_t n;
    std::uint64_t seed;
  };
  std::vector<Unit> units;
  for (int s : grid.s) {
    for (auto n : grid.sizes) {
      for (auto seed : seeds_of(grid)) units.push_back({s, n, seed});
    }
  }
  report.cells = run_units(units, [&](const Unit& u) {
    std::vector<Cell> cells;
    Rng rng(derive_seed(u.seed, kSignTag));
    const auto size = static_cast<std::size_t>(checked_pow(static_cast<std::uint64_t>(u.n), static_cast<std::uint64_t>(u.s)));
    const auto random_tensor = [&](double lo, double hi) { return TensorFunction(u.n, u.s, rng.uniforms(size, lo, hi)); };
    const auto box = [&](const TensorFunction& F, int ell) { return box_norm_ell(F, ell, grid.budget).value; };

    // Each property is its own cell; an over-budget property skips only its cell.
    const auto property = [&](const std::string& kind, int ell, auto&& body) {
      auto c = w.make("random", kind, u.s, u.n, u.seed);
      c.ell = ell;
      try {
        body(c);
      } catch (const Error& e) {
        skip(c, e.what());
      }
      cells.push_back(std::move(c));
    };
    const auto inequality = [&](Cell& c, const std::string& name, const char* anchor, double lhs, double rhs) {
      w.set(c, "lhs", lhs);
      w.set(c, "rhs", rhs);
      check(c, name, anchor, lhs, rhs, within(lhs, rhs));
    };

    for (int ell : {2, 4}) {
      property("gcs", ell, [&](Cell& c) {
        const auto count = static_cast<std::size_t>(checked_pow(static_cast<std::uint64_t>(ell), static_cast<std::uint64_t>(u.s)));
        std::vector<TensorFunction> fs;
        double rhs = 1.0;
        for (std::size_t i = 0; i < count; ++i) {
          fs.push_back(random_tensor(-1.0, 1.0));
          rhs *= box(fs.back(), ell);
        }
        inequality(c, "Gowers-Cauchy-Schwarz ell=" + std::to_string(ell), kAnchorGcs,
                   std::abs(multi_box_correlation(fs, ell, grid.budget)), rhs);
      });
    }
    property("ones", 4, [&](Cell& c) {
      const auto one = TensorFunction::constant(u.n, u.s, 1.0);
      const auto count = static_cast<std::size_t>(checked_pow(4, static_cast<std::uint64_t>(u.s)));
      const std::vector<TensorFunction> fs(count, one);
      const double lhs = multi_box_correlation(fs, 4, grid.budget);
      const double rhs = std::pow(box(one, 4), static_cast<double>(count));
      w.set(c, "lhs", lhs);
      w.set(c, "rhs", rhs);
      check(c, "Gowers-Cauchy-Schwarz equality on ones", kAnchorGcs, lhs, rhs, std::abs(lhs - rhs) <= kSlack);
    });
    for (int ell : {4, 6}) {
      property("monotone", ell, [&](Cell& c) {
        const auto F = random_tensor(-2.0, 2.0);
        inequality(c, "box_" + std::to_string(ell - 2) + " <= box_" + std::to_string(ell), kAnchorNorm, box(F, ell - 2),
                   box(F, ell));
      });
    }
    property("triangle", 4, [&](Cell& c) {
      const auto F = random_tensor(-2.0, 2.0);
      const auto G = random_tensor(-2.0, 2.0);
      inequality(c, "triangle inequality box_4", kAnchorNorm, box(F + G, 4), box(F, 4) + box(G, 4));
    });
    property("homogeneous", 4, [&](Cell& c) {
      const auto F = random_tensor(-2.0, 2.0);
      const double a = rng.uniform(-3.0, 3.0);
      const double lhs = box(F * a, 4);
      const double rhs = std::abs(a) * box(F, 4);
      w.set(c, "lhs", lhs);
      w.set(c, "rhs", rhs);
      check(c, "homogeneity box_4", kAnchorNorm, lhs, rhs, std::abs(lhs - rhs) <= kSlack * std::max(1.0, rhs));
    });
    property("bounded", 4, [&](Cell& c) {
      const auto F = random_tensor(-1.0, 1.0);
      const double b4 = box(F, 4);
      const double root = std::pow(box(F, 2), 1.0 / std::pow(4.0, u.s));
      w.set(c, "box4", b4);
      w.set(c, "box_root", root);
      w.set(c, "excess", b4 - root);
      inequality(c, "box_4 <= box^{1/4^s} for |F| <= 1", kAnchorBoxRoot, b4, root);
    });

    // Majorized sweep: F = nu_theta r with nu_theta = 1 + theta (nu - 1).
    Rng signs(derive_seed(u.seed, kSecondTag));
    const auto r = TensorFunction(u.n, u.s, signs.signs(size));
    const auto family = std::string(to_string(grid.family));
    std::vector<Cell> sweep = level_cells(w, grid, family, "majorized", u.s, u.n, u.seed);
    try {
      const auto nu = generate_majorant(family_spec(grid.family, grid, u.seed), u.n, u.s).nu;
      const double dev = box(nu - TensorFunction::constant(u.n, u.s, 1.0), 6);
      for (auto& c : sweep) {
        c.ell = 4;
        const auto F = mix_majorant(nu, *c.eta) * r;
        const double b4 = box(F, 4);
        const double root = std::pow(box(F, 2), 1.0 / std::pow(4.0, u.s));
        w.set(c, "nu_dev", *c.eta * dev);
        w.set(c, "box4", b4);
        w.set(c, "box_root", root);
        w.set(c, "excess", b4 - root);
      }
    } catch (const Error& e) {
      skip_all(sweep, e.what());
    }
    for (auto& c : sweep) cells.push_back(std::move(c));
    return cells;
  });
  add_check_assertions(report);
  add_trend_assertions(report, "excess", kAnchorBoxRoot);
  return report;
}

ExperimentReport verify_moments(const ExperimentGrid& grid) {
  ExperimentReport report{"moments", grid, {"k", "nu_u2s_dev", "set_density", "moment"}, {}, {}};
  const CellWriter w(report.measurements);
  struct Unit {
    int s;
    std::int64_t n;
    std::uint64_t seed;
  };
  std::vector<Unit> units;
  for (int s : grid.s) {
    for (auto n : grid.sizes) {
      for (auto seed : seeds_of(grid)) units.push_back({s, n, seed});
    }
  }
  const auto family = std::string(to_string(grid.family));
  report.cells = run_units(units, [&](const Unit& u) {
    std::vector<Cell> cells;
    for (int k : grid.k) {
      auto row = level_cells(w, grid, family, "k=" + std::to_string(k), u.s, u.n, u.seed);
      try {
        const auto z = FiniteAbelianGroup::cyclic(u.n);
        const auto base = generate_majorant(family_spec(grid.family, grid, u.seed), z).nu;
        Rng rng(derive_seed(u.seed, kSetTag));
        const auto set = rng.subset(u.n, u.n / 2);
        for (auto& c : row) {
          const auto nu = mix_majorant(base, *c.eta);
          w.set(c, "k", static_cast<std::int64_t>(k));
          w.set(c, "nu_u2s_dev",
                gowers_norm(nu - GroupFunction::constant(z, 1.0), 2 * u.s, NormMethod::automatic, grid.budget).value);
          w.set(c, "set_density", static_cast<double>(set.size()) / static_cast<double>(u.n));
          w.set(c, "moment", moment_estimate(nu, u.s, set, k));
        }
      } catch (const Error& e) {
        skip_all(row, e.what());
      }
      for (auto& c : row) cells.push_back(std::move(c));
    }
    return cells;
  });
  add_trend_assertions(report, "moment", kAnchorMoment, true);
  return report;
}

ExperimentReport run_experiment(std::string_view id, const ExperimentGrid& grid) {
  if (id == "prop21") return verify_prop21(grid);
  if (id == "prop23") return verify_prop23(grid);
  if (id == "prop31") return verify_prop31_and_cor34(grid);
  if (id == "appendix") return verify_appendix(grid);
  if (id == "moments") return verify_moments(grid);
  throw Error(ErrorKind::invalid_parameter, "unknown experiment '" + std::string(id) + "'");
}

ExperimentGrid default_grid(std::string_view id) {
  ExperimentGrid g;
  if (id == "prop23") {
    g.sizes = {8};
  } else if (id == "appendix") {
    g.sizes = {4, 6};
  } else if (id == "moments") {
    g.sizes = {16};
    g.eta = {0.4, 0.2, 0.1};
  } else if (id != "prop21" && id != "prop31") {
    throw Error(ErrorKind::invalid_parameter, "unknown experiment '" + std::string(id) + "'");
  }
  return g;
}

// ---------------------------------------------------------------- grid I/O

namespace {

template <class T>
std::vector<T> list_of(const Json& v, const char* key) {
  if (!v.is_array()) return {v.get<T>()};
  try {
    return v.get<std::vector<T>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("grid field \"") + key + "\": " + e.what());
  }
}

double p_from(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::invalid_input, "grid field \"p\": unknown value '" + s + "'");
  }
  if (!v.is_number()) throw Error(ErrorKind::invalid_input, "grid field \"p\" must be numbers or \"inf\"");
  return v.get<double>();
}

Json number_or_label(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

}  // namespace

ExperimentGrid parse_grid(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_input, "grid must be a JSON object");
  static const std::set<std::string> known{"s",     "N",       "eta", "seeds", "base_seed", "family",
                                           "delta", "epsilon", "p",   "k",     "budget"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::invalid_input, "unknown grid field \"" + key + "\"");
  }
  ExperimentGrid g;
  try {
    if (j.contains("s")) g.s = list_of<int>(j["s"], "s");
    if (j.contains("N")) g.sizes = list_of<std::int64_t>(j["N"], "N");
    if (j.contains("eta")) g.eta = list_of<double>(j["eta"], "eta");
    if (j.contains("seeds")) g.seeds = j["seeds"].get<int>();
    if (j.contains("base_seed")) g.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("family")) g.family = parse_majorant_kind(j["family"].get<std::string>());
    if (j.contains("delta")) g.delta = j["delta"].get<double>();
    if (j.contains("epsilon")) g.epsilon = j["epsilon"].get<double>();
    if (j.contains("k")) g.k = list_of<int>(j["k"], "k");
    if (j.contains("p")) {
      g.p.clear();
      const auto& v = j["p"];
      if (v.is_array()) {
        for (const auto& x : v) g.p.push_back(p_from(x));
      } else {
        g.p.push_back(p_from(v));
      }
    }
    if (j.contains("budget")) {
      const auto& b = j["budget"];
      if (b.contains("enumeration")) g.budget.enumeration = b["enumeration"].get<std::uint64_t>();
      if (b.contains("exhaustive")) g.budget.exhaustive = b["exhaustive"].get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("grid: ") + e.what());
  }
  if (g.family == MajorantKind::custom) throw Error(ErrorKind::invalid_parameter, "grid family cannot be custom");
  if (g.seeds < 0) throw Error(ErrorKind::invalid_parameter, "seeds must be >= 0");
  for (int s : g.s) {
    if (s < 2) throw Error(ErrorKind::invalid_parameter, "s must be >= 2");
  }
  for (auto n : g.sizes) {
    if (n < 1) throw Error(ErrorKind::invalid_parameter, "N must be >= 1");
  }
  for (double e : g.eta) {
    if (!(e >= 0.0 && e <= 1.0)) throw Error(ErrorKind::invalid_parameter, "eta levels must lie in [0, 1]");
  }
  for (double p : g.p) {
    if (!(p > 1.0)) throw Error(ErrorKind::invalid_parameter, "p must be > 1");
  }
  for (int k : g.k) {
    if (k < 1 || k > 2) throw Error(ErrorKind::invalid_parameter, "k must be 1 or 2");
  }
  return g;
}

Json serialize(const ExperimentGrid& g) {
  Json p = Json::array();
  for (double x : g.p) p.push_back(number_or_label(x));
  return {{"s", g.s},
          {"N", g.sizes},
          {"eta", g.eta},
          {"seeds", g.seeds},
          {"base_seed", g.base_seed},
          {"family", std::string(to_string(g.family))},
          {"delta", g.delta},
          {"epsilon", g.epsilon},
          {"p", std::move(p)},
          {"k", g.k},
          {"budget", {{"enumeration", g.budget.enumeration}, {"exhaustive", g.budget.exhaustive}}}};
}

// ---------------------------------------------------------------- emission

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw Error(ErrorKind::invalid_parameter, "unknown report format '" + std::string(name) + "'");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string text_of(const CellValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else {
          return x;
        }
      },
      v);
}

Json json_of(const CellValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return number_or_label(x);
        } else {
          return x;
        }
      },
      v);
}

std::string check_status(const Cell& c) {
  if (c.checks.empty()) return "";
  const bool ok = std::all_of(c.checks.begin(), c.checks.end(), [](const CellCheck& k) { return k.passed; });
  return ok ? "pass" : "fail";
}

std::string render_csv(const ExperimentReport& report, const EmitOptions& options) {
  std::string out = "experiment,family,kind,s,N,eta,p,ell,seed,status,reason";
  for (const auto& m : report.measurements) out += "," + csv_field(m);
  out += ",check";
  if (options.timing) out += ",seconds";
  out += "\n";
  for (const auto& c : report.cells) {
    out += csv_field(report.id) + "," + csv_field(c.family) + "," + csv_field(c.kind) + "," + std::to_string(c.s) +
           "," + std::to_string(c.size) + "," + (c.eta ? format_double(*c.eta) : "") + "," +
           (c.p ? format_double(*c.p) : "") + "," + (c.ell ? std::to_string(*c.ell) : "") + "," +
           std::to_string(c.seed) + "," + (c.skipped ? "skipped" : "ok") + "," + csv_field(c.reason);
    for (const auto& v : c.values) out += "," + csv_field(text_of(v));
    out += "," + check_status(c);
    if (options.timing) out += "," + format_double(c.seconds);
    out += "\n";
  }
  return out;
}

std::string render_json(const ExperimentReport& report, const EmitOptions& options) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json cell;
    cell["family"] = c.family;
    cell["kind"] = c.kind;
    cell["s"] = c.s;
    cell["N"] = c.size;
    cell["eta"] = c.eta ? number_or_label(*c.eta) : Json(nullptr);
    cell["p"] = c.p ? number_or_label(*c.p) : Json(nullptr);
    cell["ell"] = c.ell ? Json(*c.ell) : Json(nullptr);
    cell["seed"] = c.seed;
    cell["status"] = c.skipped ? "skipped" : "ok";
    cell["reason"] = c.reason;
    Json values = Json::object();
    for (std::size_t i = 0; i < c.values.size(); ++i) values[report.measurements[i]] = json_of(c.values[i]);
    cell["values"] = std::move(values);
    Json checks = Json::array();
    for (const auto& k : c.checks) {
      checks.push_back({{"name", k.name},
                        {"anchor", k.anchor},
                        {"lhs", number_or_label(k.lhs)},
                        {"rhs", number_or_label(k.rhs)},
                        {"passed", k.passed}});
    }
    cell["checks"] = std::move(checks);
    if (options.timing) cell["seconds"] = c.seconds;
    cells.push_back(std::move(cell));
  }
  Json assertions = Json::array();
  for (const auto& a : report.assertions) {
    assertions.push_back({{"name", a.name}, {"anchor", a.anchor}, {"passed", a.passed}, {"detail", a.detail}});
  }
  const Json doc = {{"schema", "uninorm-experiment/1"},
                    {"experiment", report.id},
                    {"grid", serialize(report.grid)},
                    {"measurements", report.measurements},
                    {"cells", std::move(cells)},
                    {"assertions", std::move(assertions)},
                    {"passed", report.passed()}};
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ExperimentReport& report, ReportFormat format, const EmitOptions& options) {
  return format == ReportFormat::csv ? render_csv(report, options) : render_json(report, options);
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path,
                 const EmitOptions& options) {
  write_text_file(path, render_report(report, format, options));
}

}  // namespace uninorm
