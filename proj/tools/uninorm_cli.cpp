#include "uninorm/boxnorms.hpp"
#include "uninorm/decompose.hpp"
#include "uninorm/error.hpp"
#include "uninorm/harness.hpp"
#include "uninorm/interval.hpp"
#include "uninorm/io.hpp"
#include "uninorm/pseudorandom.hpp"
#include "uninorm/uniformity.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>
#include <optional>
#include <string>

using namespace uninorm;

namespace {

struct SearchFlags {
  std::string mode = "exhaustive";
  int restarts = 32;
  std::uint64_t seed = 7;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "exhaustive | alternating")->capture_default_str();
    cmd->add_option("--restarts", restarts, "alternating restarts")->capture_default_str();
    cmd->add_option("--seed", seed, "alternating start seed")->capture_default_str();
  }

  SearchOptions options() const {
    SearchOptions o;
    o.mode = parse_search_mode(mode);
    o.restarts = restarts;
    o.seed = seed;
    return o;
  }
};

bool is_tensor(const Json& j) { return j.is_object() && j.contains("vertex_count"); }

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json weak_json(const WeakNormEstimate& w, const SearchOptions& o) {
  auto j = serialize(w);
  j["method"] = std::string(to_string(o.mode));
  j["cost"] = w.evaluations;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniformity, box and cut norms; dense-model and transference experiments"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)");

  // norm
  auto* norm = app.add_subcommand("norm", "Gowers U^s norm of a group function");
  std::string input;
  int s = 2;
  std::string method = "auto";
  norm->add_option("--input", input, "function JSON")->required();
  norm->add_option("--s", s)->capture_default_str();
  norm->add_option("--method", method, "auto | direct | recursive | fourier | lifted")->capture_default_str();

  // weaknorm
  auto* weak = app.add_subcommand("weaknorm", "weak w^s norm of a group function");
  SearchFlags weak_flags;
  weak->add_option("--input", input, "function JSON")->required();
  weak->add_option("--s", s)->capture_default_str();
  weak_flags.add_to(weak);

  // boxnorm
  auto* boxn = app.add_subcommand("boxnorm", "ell-box norm of a tensor");
  int ell = 2;
  boxn->add_option("--input", input, "tensor JSON")->required();
  boxn->add_option("--ell", ell, "even integer >= 2")->capture_default_str();

  // cutnorm
  auto* cut = app.add_subcommand("cutnorm", "cut norm of a tensor");
  SearchFlags cut_flags;
  cut->add_option("--input", input, "tensor JSON")->required();
  cut_flags.add_to(cut);

  // majorant
  auto* maj = app.add_subcommand("majorant", "generate (and optionally certify) a majorant");
  std::string kind = "sparse";
  double delta = 0.5;
  double epsilon = 0.0;
  std::vector<std::int64_t> factors;
  std::int64_t vertices = 0;
  std::uint64_t seed = 7;
  bool do_certify = false;
  maj->add_option("--kind", kind, "constant | perturbed | sparse")->capture_default_str();
  maj->add_option("--delta", delta, "sparse-set density")->capture_default_str();
  maj->add_option("--epsilon", epsilon, "perturbation size")->capture_default_str();
  maj->add_option("--group", factors, "cyclic orders, e.g. 32 or 4,4")->delimiter(',');
  maj->add_option("--vertices", vertices, "tensor side |V| (with --s as the arity)");
  maj->add_option("--seed", seed)->capture_default_str();
  maj->add_option("--s", s)->capture_default_str();
  maj->add_flag("--certify", do_certify, "attach the deviation certificate");

  // dense-model / kvn
  auto* dense = app.add_subcommand("dense-model", "[0,1]-valued dense model of g relative to nu");
  auto* kvn = app.add_subcommand("kvn", "Koopman-von Neumann decomposition of f relative to nu");
  std::string g_path, nu_path;
  double eps = 0.05;
  int max_iterations = 0;
  SearchFlags dec_flags;
  dense->add_option("--g", g_path, "function or tensor JSON")->required();
  kvn->add_option("--f", g_path, "function or tensor JSON")->required();
  for (auto* cmd : {dense, kvn}) {
    cmd->add_option("--nu", nu_path, "majorant JSON")->required();
    cmd->add_option("--s", s, "group functions only")->capture_default_str();
    cmd->add_option("--eps", eps)->capture_default_str();
    cmd->add_option("--max-iterations", max_iterations, "0 uses the default bound")->capture_default_str();
    dec_flags.add_to(cmd);
  }

  // interval
  auto* interval = app.add_subcommand("interval", "U^s[N] norm of a function on [N]");
  std::string nprime = "auto";
  interval->add_option("--f", input, "interval JSON {\"n\", \"values\"}")->required();
  interval->add_option("--s", s)->capture_default_str();
  interval->add_option("--nprime", nprime, "auto | prime modulus > 2N")->capture_default_str();

  // transfer
  auto* transfer = app.add_subcommand("transfer", "KvN decomposition on [N] through Z_N'");
  double big_c = 20.0;
  double t_eps = 0.5;
  std::optional<double> alpha;
  bool widen = false;
  std::string nu_kind = "constant";
  SearchFlags transfer_flags;
  transfer_flags.mode = "alternating";
  transfer->add_option("--f", input, "interval JSON")->required();
  transfer->add_option("--nu", nu_path, "majorant on Z_N' (default: generated with --nu-kind)");
  transfer->add_option("--nu-kind", nu_kind, "constant | perturbed | sparse")->capture_default_str();
  transfer->add_option("--delta", delta)->capture_default_str();
  transfer->add_option("--nu-seed", seed)->capture_default_str();
  transfer->add_option("--C", big_c)->capture_default_str();
  transfer->add_option("--eps", t_eps)->capture_default_str();
  transfer->add_option("--s", s)->capture_default_str();
  transfer->add_option("--alpha", alpha, "override the cut-off ramp fraction");
  transfer->add_flag("--widen", widen, "accept a prime above 2CN");
  transfer->add_option("--max-iterations", max_iterations)->capture_default_str();
  transfer_flags.add_to(transfer);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a verification sweep and write a report");
  std::string exp_id, grid_path, out_path, format = "csv";
  bool timing = false;
  experiment->add_option("id", exp_id, "prop21 | prop23 | prop31 | appendix | moments")->required();
  experiment->add_option("--grid", grid_path, "grid JSON (default grid when omitted)");
  experiment->add_option("--out", out_path, "report path (stdout when omitted)");
  experiment->add_option("--format", format, "csv | json")->capture_default_str();
  experiment->add_flag("--timing", timing, "include wall-clock seconds per cell");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*norm) {
      const auto f = parse_group_function(read_json_file(input));
      print(serialize(gowers_norm(f, s, parse_norm_method(method))));
    } else if (*weak) {
      const auto f = parse_group_function(read_json_file(input));
      const auto o = weak_flags.options();
      print(weak_json(weak_norm(f, s, o), o));
    } else if (*boxn) {
      print(serialize(box_norm_ell(parse_tensor(read_json_file(input)), ell)));
    } else if (*cut) {
      const auto o = cut_flags.options();
      print(weak_json(cut_norm(parse_tensor(read_json_file(input)), o), o));
    } else if (*maj) {
      MajorantSpec spec;
      spec.kind = parse_majorant_kind(kind);
      spec.delta = delta;
      spec.epsilon = epsilon;
      spec.seed = seed;
      Json out;
      out["kind"] = std::string(to_string(spec.kind));
      out["seed"] = seed;
      if (vertices > 0) {
        const auto m = generate_majorant(spec, vertices, s);
        out["nu"] = serialize(m.nu);
        out["clipped"] = m.clipped;
        if (do_certify) out["certificate"] = serialize(certify(m.nu));
      } else {
        if (factors.empty()) throw Error(ErrorKind::invalid_parameter, "--group or --vertices is required");
        const auto m = generate_majorant(spec, FiniteAbelianGroup(factors));
        out["nu"] = serialize(m.nu);
        out["clipped"] = m.clipped;
        if (do_certify) out["certificate"] = serialize(certify(m.nu, s));
      }
      print(out);
    } else if (*dense || *kvn) {
      const auto gj = read_json_file(g_path);
      const auto nj = read_json_file(nu_path);
      DecomposeOptions o;
      o.search = dec_flags.options();
      o.max_iterations = max_iterations;
      if (is_tensor(gj)) {
        const auto g = parse_tensor(gj);
        const auto nu = parse_tensor(nj);
        print(serialize(*dense ? dense_model(g, nu, eps, o) : kvn_tensor(g, nu, eps, o)));
      } else {
        const auto g = parse_group_function(gj);
        const auto nu = parse_group_function(nj);
        print(serialize(*dense ? dense_model(g, nu, s, eps, o) : kvn_group(g, nu, s, eps, o)));
      }
    } else if (*interval) {
      const auto f = parse_interval(read_json_file(input));
      const std::int64_t modulus = nprime == "auto" ? default_modulus(f.length()) : std::stoll(nprime);
      auto j = serialize(interval_norm(f, s, modulus));
      j["n_prime"] = modulus;
      print(j);
    } else if (*transfer) {
      const auto f = parse_interval(read_json_file(input));
      TransferOptions o;
      o.cutoff.alpha = alpha;
      o.cutoff.widen = widen;
      o.decompose.search = transfer_flags.options();
      o.decompose.max_iterations = max_iterations;
      std::optional<GroupFunction> nu;
      if (!nu_path.empty()) {
        nu = parse_group_function(read_json_file(nu_path));
      } else {
        const auto profile = build_cutoff(f.length(), big_c, t_eps, s, o.cutoff);
        MajorantSpec spec;
        spec.kind = parse_majorant_kind(nu_kind);
        spec.delta = delta;
        spec.seed = seed;
        nu = generate_majorant(spec, FiniteAbelianGroup::cyclic(profile.n_prime)).nu;
      }
      print(serialize(transfer_kvn(f, *nu, s, big_c, t_eps, o)));
    } else if (*experiment) {
      const auto grid = grid_path.empty() ? default_grid(exp_id) : parse_grid(read_json_file(grid_path));
      const auto report = run_experiment(exp_id, grid);
      const auto fmt = parse_report_format(format);
      if (out_path.empty()) {
        std::cout << render_report(report, fmt, {.timing = timing});
      } else {
        emit_report(report, fmt, out_path, {.timing = timing});
      }
      for (const auto& a : report.assertions) {
        std::cerr << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
      }
      return report.passed() ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
