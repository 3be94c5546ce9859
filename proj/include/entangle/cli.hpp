#pragma once

// Command-line front end: bound, sigma, oracle, simulate, sphere.
//
// Exit codes: 0 proven / success, 1 failed, 2 budget exceeded, 64 usage.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "entangle/bounds.hpp"
#include "entangle/certificate.hpp"
#include "entangle/path_oracle.hpp"
#include "entangle/perc_sim.hpp"
#include "entangle/pipeline.hpp"
#include "entangle/point_io.hpp"
#include "entangle/sphere.hpp"

namespace entangle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;

inline constexpr std::uint64_t kDefaultSeed = 20110607;
inline constexpr const char* kOutDirVariable = "ENTANGLE_OUT_DIR";

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Proven: return kExitOk;
    case Verdict::Failed: return kExitFailed;
    case Verdict::BudgetExceeded: return kExitBudget;
  }
  return kExitFailed;
}

/// Relative output paths are resolved against $ENTANGLE_OUT_DIR when set.
inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirVariable); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Heuristic minimum truncated to 11 decimals, then one ulp lower.
inline double default_threshold(int dim, double alpha) {
  const double cand = candidate_minimum(dim, alpha).value;
  return next_down(std::floor(cand * 1e11) / 1e11);
}

struct Options {
  // shared
  int dim = 3;
  unsigned threads = default_threads();
  bool no_timestamp = false;
  std::string out;
  // bound
  std::string mode = "markov";
  std::string schedule_file;
  std::optional<double> l0;
  double slack = 1e-4;
  std::size_t points = 0;
  bool full = false;
  bool independent = false;
  std::uint64_t node_budget = 100'000'000;
  // sigma
  double alpha = 0.5;
  std::optional<double> threshold;
  int max_depth = 200;
  // oracle
  int n = 0;
  bool histogram = false;
  bool char_mode = false;
  int r = 1;
  std::uint64_t enum_budget = kDefaultEnumerationBudget;
  // simulate
  double p = 0.05;
  std::uint64_t trials = 10000;
  int r_max = 40;
  std::size_t cap = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<int> fit;
  // sphere
  std::string set_file;
  std::string check = "both";
  std::string obj_file;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Certified lower bounds for entanglement critical probabilities"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    Options o;
    auto add_common = [&](CLI::App* s) {
      s->add_option("--threads", o.threads, "worker threads");
      s->add_flag("--no-timestamp", o.no_timestamp, "omit elapsed times");
      s->add_option("--out", o.out, "output file (default: standard output)");
    };

    auto* bound = app.add_subcommand("bound", "lower bound on the critical probability");
    bound->add_option("--dim", o.dim, "dimension d >= 3")->required();
    bound->add_option("--mode", o.mode, "closed or markov")->check(CLI::IsMember({"closed", "markov"}));
    bound->add_option("--schedule", o.schedule_file, "alpha schedule file")->check(CLI::ExistingFile);
    bound->add_option("--l0", o.l0, "target L0");
    bound->add_option("--slack", o.slack, "relative room between limiting L and L0");
    bound->add_option("--points", o.points, "geometric schedule with this many points");
    bound->add_flag("--full", o.full, "long backwards-built schedule");
    bound->add_flag("--independent", o.independent, "certify each index from scratch");
    bound->add_option("--node-budget", o.node_budget, "branch-and-bound node budget per index");
    add_common(bound);

    auto* sigma = app.add_subcommand("sigma", "certify a lower bound on the rate sigma_d(alpha)");
    sigma->add_option("--dim", o.dim, "dimension")->required();
    sigma->add_option("--alpha", o.alpha, "W3 mass alpha in (0, 0.5]");
    sigma->add_option("--threshold", o.threshold, "threshold to prove");
    sigma->add_option("--node-budget", o.node_budget, "node budget");
    sigma->add_option("--max-depth", o.max_depth, "maximum split depth");
    add_common(sigma);

    auto* oracle = app.add_subcommand("oracle", "exact walk enumeration");
    oracle->add_option("--dim", o.dim, "dimension")->required();
    oracle->add_option("--n", o.n, "walk length (maximum length for --char)")->required();
    auto* hist_flag = oracle->add_flag("--histogram", o.histogram, "descending-step histogram of ISAWs");
    auto* char_flag = oracle->add_flag("--char", o.char_mode, "(A,B) table of SAWs ending at l1 norm r");
    hist_flag->excludes(char_flag);
    oracle->add_option("--r", o.r, "target l1 norm for --char");
    oracle->add_option("--budget", o.enum_budget, "node budget");
    add_common(oracle);

    auto* simulate = app.add_subcommand("simulate", "radius tail of the good-path closure");
    simulate->add_option("--dim", o.dim, "dimension")->required();
    simulate->add_option("--p", o.p, "bond probability");
    simulate->add_option("--trials", o.trials, "number of trials");
    simulate->add_option("--r-max", o.r_max, "largest radius in the table");
    simulate->add_option("--cap", o.cap, "vertex cap per closure");
    simulate->add_option("--seed", o.seed, "seed");
    simulate->add_option("--fit", o.fit, "r range for a log-slope fit (two integers)")->expected(2);
    add_common(simulate);

    auto* sphere = app.add_subcommand("sphere", "check the box-union surface around a descending set");
    sphere->add_option("--set", o.set_file, "point list file")->required()->check(CLI::ExistingFile);
    sphere->add_option("--check", o.check, "crossing, complex or both")
        ->check(CLI::IsMember({"crossing", "complex", "both"}));
    sphere->add_option("--obj", o.obj_file, "write the d = 3 surface as OBJ");
    add_common(sphere);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      std::ostringstream o1, o2;
      const int code = app.exit(e, o1, o2);
      out_ << o1.str();
      err_ << o2.str();
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (o.threads < 1) o.threads = 1;
    try {
      if (*bound) return run_bound(o, app);
      if (*sigma) return run_sigma(o, app);
      if (*oracle) return run_oracle(o);
      if (*simulate) return run_simulate(o, app);
      if (*sphere) return run_sphere(o, app);
    } catch (const BudgetExceeded& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitBudget;
    } catch (const std::invalid_argument& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitFailed;
    }
    return kExitUsage;
  }

 private:
  // Writes to --out (resolved) or standard output.
  void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
      out_ << text;
      return;
    }
    const auto path = resolve_output(o.out);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
  }

  static json run_config(const CLI::App& app) {
    json j;
    for (const auto* sub : app.get_subcommands()) {
      j["subcommand"] = sub->get_name();
      for (const auto* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "-h") continue;
        const auto& res = opt->results();
        std::string name = opt->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (res.empty()) {
          if (opt->get_default_str().empty()) continue;
          j[name] = opt->get_default_str();
        } else if (res.size() == 1) {
          j[name] = res.front();
        } else {
          j[name] = res;
        }
      }
    }
    return j;
  }

  int run_bound(Options& o, const CLI::App& app) {
    const bool ts = !o.no_timestamp;
    if (o.dim < 3) throw std::invalid_argument("--dim must be >= 3");
    json j;
    j["d"] = o.dim;
    j["mode"] = o.mode;
    if (o.mode == "closed") {
      const Rational v = theorem1_bound(o.dim);
      j["value"] = v.str();
      j["valueDecimal"] = v.value();
      j["roundingMode"] = "exact";
      j["runConfig"] = run_config(app);
      emit(o, j.dump(2) + "\n");
      return kExitOk;
    }
    PipelineOptions po;
    po.slack = o.slack;
    po.l0 = o.l0;
    po.full_schedule = o.full;
    po.geometric_points = o.points;
    if (!o.schedule_file.empty()) {
      std::ifstream f(o.schedule_file);
      po.schedule = read_schedule(f);
    }
    po.certify.shared_partition = !o.independent;
    po.certify.bb.node_budget = o.node_budget;
    po.certify.bb.threads = o.threads;
    const PipelineResult r = run_pipeline(o.dim, po);
    const Verdict v = r.verdict.verdict();
    j["verdict"] = to_string(v);
    j["value"] = v == Verdict::Proven ? json(r.value) : json(nullptr);
    j["roundingMode"] = "downward";
    j["L0"] = r.l0;
    j["LHat"] = r.l_hat;
    j["sigmaHeuristic"] = r.sigma_half;
    j["schedule"] = to_json(r.verdict, r.schedule, ts);
    // sigma_d(0.5) on its own, for the conjectural value.
    BranchBoundOptions bb;
    bb.node_budget = o.node_budget;
    bb.threads = o.threads;
    const SigmaCertificate half = certify_sigma(o.dim, 0.5, default_threshold(o.dim, 0.5), bb);
    if (half.verdict == Verdict::Proven) {
      j["conjectureValue"] = {{"value", conjecture_value(o.dim, half.threshold)},
                              {"sigmaLower", half.threshold},
                              {"limitingL", limiting_L(o.dim, half.threshold).hi},
                              {"status", "conjectural"}};
    }
    j["runConfig"] = run_config(app);
    emit(o, j.dump(2) + "\n");
    return exit_code(v);
  }

  int run_sigma(Options& o, const CLI::App& app) {
    if (o.dim < 2) throw std::invalid_argument("--dim must be >= 2");
    if (!(o.alpha > 0 && o.alpha <= 0.5)) throw std::invalid_argument("--alpha must lie in (0, 0.5]");
    const double threshold = o.threshold ? *o.threshold : default_threshold(o.dim, o.alpha);
    BranchBoundOptions bb;
    bb.node_budget = o.node_budget;
    bb.max_depth = o.max_depth;
    bb.threads = o.threads;
    const SigmaCertificate c = certify_sigma(o.dim, o.alpha, threshold, bb);
    json j = to_json(c, !o.no_timestamp);
    j["runConfig"] = run_config(app);
    emit(o, j.dump(2) + "\n");
    return exit_code(c.verdict);
  }

  int run_oracle(Options& o) {
    if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
    std::ostringstream csv;
    if (o.char_mode) {
      const CharTable t = char_table(o.dim, o.r, o.n, o.enum_budget);
      csv << "A,B,count\n";
      for (const auto& [ab, c] : t.entries) csv << ab.first << ',' << ab.second << ',' << c << '\n';
    } else {
      const DescHistogram h = desc_histogram(o.dim, o.n, o.enum_budget);
      csv << "B,count\n";
      for (int b = 0; b <= h.n; ++b) csv << b << ',' << h.counts[b] << '\n';
    }
    emit(o, csv.str());
    return kExitOk;
  }

  int run_simulate(Options& o, const CLI::App&) {
    const TailTable t = tail_estimate(o.dim, o.p, o.trials, o.r_max, o.cap, o.seed, o.threads);
    std::ostringstream csv;
    csv << "r,count,probability,ciLow,ciHigh\n";
    csv.precision(10);
    for (const auto& row : t.rows) {
      csv << row.r << ',' << row.count << ',' << row.probability << ',' << row.ci_low << ',' << row.ci_high << '\n';
    }
    emit(o, csv.str());
    err_ << "trials " << t.trials << ", cap exceeded " << t.cap_exceeded << '\n';
    if (o.fit.size() == 2) {
      const SlopeFit f = fit_log_slope(t, o.fit[0], o.fit[1]);
      err_ << "log-slope " << f.slope << " over " << f.points << " rows\n";
    }
    return kExitOk;
  }

  int run_sphere(Options& o, const CLI::App&) {
    std::ifstream f(o.set_file);
    const PointList pl = read_points(f);
    if (pl.dim == 0) throw std::invalid_argument("empty point list");
    const PointSet k = descending_closure(PointSet(pl.points.begin(), pl.points.end()), pl.dim);
    const BoxUnion u = build_volume(k, pl.dim);
    json j;
    j["d"] = pl.dim;
    j["size"] = k.size();
    j["radius"] = radius(k);
    j["boxes"] = u.boxes.size();
    j["bridges"] = u.count(BoxOrigin::Bridge);
    bool ok = true;
    if (o.check != "complex") {
      const EdgeSet crossing = bonds_crossing_boundary(u, radius(k) + 1);
      const EdgeSet expected = boundary_edges(k, pl.dim);
      bool interior = true;
      for (const auto& x : k) interior = interior && classify_point(u, x) == PointPosition::Interior;
      j["crossing"] = {{"bonds", crossing.size()}, {"boundaryEdges", expected.size()},
                       {"equal", crossing == expected}, {"interior", interior}};
      ok = ok && crossing == expected && interior;
    }
    if (o.check != "crossing") {
      if (pl.dim == 3) {
        const BoundaryComplex c = boundary_complex(u);
        j["complex"] = {{"vertices", c.vertices}, {"edges", c.edges}, {"faces", c.faces},
                        {"components", c.components}, {"manifold", c.manifold},
                        {"eulerCharacteristic", c.euler_characteristic()}};
        ok = ok && c.components == 1 && c.manifold && c.euler_characteristic() == 2;
        if (!o.obj_file.empty()) {
          std::ofstream obj(resolve_output(o.obj_file));
          write_obj(obj, c);
        }
      } else if (pl.dim == 2) {
        const BoundaryCurve c = boundary_curve(u);
        j["curve"] = {{"vertices", c.vertices}, {"segments", c.segments}, {"components", c.components},
                      {"simpleClosed", c.simple_closed}};
        ok = ok && c.simple_closed;
      } else {
        throw NotThreeDimensional();
      }
    }
    j["ok"] = ok;
    emit(o, j.dump(2) + "\n");
    return ok ? kExitOk : kExitFailed;
  }

  std::ostream& out_;
  std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace entangle::cli
