#include "polysum/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "polysum/io.hpp"
#include "polysum/metrics.hpp"

namespace polysum {

using json = nlohmann::ordered_json;

namespace {

// stream ids for deriving per-purpose sub-streams from a cell's seed
enum StreamId : std::uint64_t {
  kTermStreamBase = 0,  // + term index
  kSolverStream = 1000,
  kProbeStream = 2000,
  kBallStream = 3000,
  kPjProbeStream = 4000,
};

std::vector<Ball> default_heavy_balls() {
  return {
      {{0.0, 0.0}, 0.6},  {{1.2, 0.0}, 0.5},   {{-1.2, 0.0}, 0.5},
      {{0.0, 1.2}, 0.5},  {{0.0, -1.2}, 0.5},  {{2.0, 0.0}, 0.7},
      {{-2.0, 0.0}, 0.7}, {{0.0, 2.0}, 0.7},   {{1.6, 1.6}, 0.6},
      {{-1.6, -1.6}, 0.6},
  };
}

std::vector<Ball> random_balls_in_grid(const Grid& grid, std::size_t count, Rng& rng) {
  std::vector<Ball> balls;
  balls.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = rng.angle();
    const double rr = 0.5 * grid.half_width * std::sqrt(rng.uniform01());
    const std::complex<double> c =
        grid.center + std::complex<double>(rr * std::cos(t), rr * std::sin(t));
    balls.push_back(Ball{c, grid.half_width * rng.uniform(0.1, 0.35)});
  }
  return balls;
}

std::vector<std::complex<double>> random_probes(std::size_t count, double radius,
                                                Rng& rng) {
  std::vector<std::complex<double>> probes;
  probes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) probes.push_back(radius * rng.in_unit_disk());
  return probes;
}

long count_points_in_ball(const std::vector<ExtComplex>& pts, const Ball& b) {
  long inside = 0;
  for (const auto& x : pts) {
    if (x.exp2 > 10) continue;  // far outside any desk-scale ball
    if (std::abs(x.to_complex() - b.center) < b.radius) ++inside;
  }
  return inside;
}

CountResult count_with_escalation(const PolySum& s, const Ball& b) {
  std::size_t q = std::max<std::size_t>(256, 16 * s.degree());
  CountResult res;
  for (int esc = 0; esc < 4; ++esc) {
    res = count_roots_argument(s, b.center, b.radius, q);
    if (res.reliable) return res;
    q *= 4;
  }
  return res;
}

struct CellOutcome {
  json record;
  bool ok = false;
  std::string error;
  std::vector<std::filesystem::path> files;
  std::map<std::string, double> metric_values;
};

struct CellTask {
  std::size_t n;
  std::uint64_t seed;
  std::filesystem::path dir;  // cell output directory
};

json ball_json(const Ball& b) {
  return json{{"center", {b.center.real(), b.center.imag()}}, {"radius", b.radius}};
}

// Safe Poisson-Jensen contour: grow R until every root keeps a relative
// margin from the circle.
double safe_pj_radius(const RootReport& report) {
  double rmax = 0.0;
  for (const auto& y : report.roots) rmax = std::fmax(rmax, std::abs(y));
  double big_r = 1.25 * rmax + 0.5;
  for (int tries = 0; tries < 64; ++tries) {
    bool ok = true;
    for (const auto& y : report.roots) {
      if (std::fabs(std::abs(y) - big_r) < 1e-3 * big_r) {
        ok = false;
        break;
      }
    }
    if (ok) return big_r;
    big_r *= 1.0314159;
  }
  return big_r;
}

class Experiment {
public:
  Experiment(const ExperimentConfig& cfg, const RunOptions& opts)
      : cfg_(cfg), opts_(opts) {
    out_dir_ = opts_.out_dir.value_or(cfg_.out_dir);
  }

  RunReport run();

private:
  CellOutcome run_cell(const CellTask& task) const;
  CellOutcome run_light_cell(const CellTask& task, Rng& cell_rng) const;
  CellOutcome run_heavy_cell(const CellTask& task, Rng& cell_rng) const;
  CellOutcome run_validate_cell(const CellTask& task, Rng& cell_rng) const;

  std::vector<RootPoly> sample_terms(std::size_t n, Rng& cell_rng) const;
  void write_cell_roots(const CellTask& task, const std::vector<RootPoly>& terms,
                        const RootReport* report, CellOutcome& out) const;

  const ExperimentConfig& cfg_;
  const RunOptions& opts_;
  std::filesystem::path out_dir_;
  std::optional<LimitSpec> limit_;
  std::optional<GridMeasure> rho_;
};

std::vector<RootPoly> Experiment::sample_terms(std::size_t n, Rng& cell_rng) const {
  std::vector<RootPoly> terms;
  terms.reserve(cfg_.terms.size());
  for (std::size_t k = 0; k < cfg_.terms.size(); ++k) {
    Rng term_rng = cell_rng.split(kTermStreamBase + k);
    const std::size_t nk = cfg_.terms[k].degree.degree_at(n);
    terms.emplace_back(cfg_.terms[k].measure.sample(term_rng, nk));
  }
  return terms;
}

void Experiment::write_cell_roots(const CellTask& task,
                                  const std::vector<RootPoly>& terms,
                                  const RootReport* report, CellOutcome& out) const {
  std::filesystem::create_directories(task.dir);
  const auto path = task.dir / "roots.csv";
  std::ofstream os(path);
  io::write_combined_roots_csv(os, terms, report);
  out.files.push_back(path);
}

CellOutcome Experiment::run_light_cell(const CellTask& task, Rng& cell_rng) const {
  CellOutcome out;
  const auto terms = sample_terms(task.n, cell_rng);
  const PolySum sum{std::vector<RootPoly>(terms)};
  Rng solver_rng = cell_rng.split(kSolverStream);
  const RootReport report = find_roots(sum, cfg_.solve, solver_rng);
  write_cell_roots(task, terms, &report, out);

  out.record["solver"] = json::parse(report.diagnostics_json());
  if (!report.converged) {
    out.error = "solver did not converge: " + report.failure_reason;
    return out;
  }

  const EmpiricalMeasure emp{std::vector<std::complex<double>>(report.roots)};
  json jm;
  for (const auto& name : cfg_.metrics) {
    if (name == "potential_discrepancy") {
      Rng probe_rng = cell_rng.split(kProbeStream);
      const auto probes =
          random_probes(cfg_.probes.count, cfg_.probes.radius, probe_rng);
      const auto pd =
          potential_discrepancy(emp, *limit_, probes, cfg_.probes.exclusion);
      jm[name] = pd.value;
      jm["potential_discrepancy_probes_used"] = pd.used;
      jm["potential_discrepancy_probes_discarded"] = pd.discarded;
      out.metric_values[name] = pd.value;
    } else if (name == "ball_discrepancy") {
      std::vector<Ball> balls = cfg_.balls;
      if (balls.empty()) {
        Rng ball_rng = cell_rng.split(kBallStream);
        balls = random_balls_in_grid(cfg_.grid, cfg_.ball_count, ball_rng);
      }
      const double bd = ball_discrepancy(emp, *rho_, balls);
      jm[name] = bd;
      out.metric_values[name] = bd;
    } else {
      jm[name] = nullptr;
      jm[name + "_failed"] = "metric not available in light-tail mode";
    }
  }
  out.record["metrics"] = jm;
  out.ok = true;
  return out;
}

CellOutcome Experiment::run_heavy_cell(const CellTask& task, Rng& cell_rng) const {
  CellOutcome out;
  const auto terms = sample_terms(task.n, cell_rng);
  write_cell_roots(task, terms, nullptr, out);

  const RootPoly& p = terms[0];
  const RootPoly& q = terms[1];
  const double sn = s_statistic(p, q);
  out.record["s_n"] = sn;
  out.metric_values["s_n"] = sn;

  const PolySum sum{std::vector<RootPoly>(terms)};
  std::vector<Ball> balls = cfg_.balls.empty() ? default_heavy_balls() : cfg_.balls;
  const std::size_t n_theta = std::max<std::size_t>(256, 16 * sum.degree());

  json jballs = json::array();
  double worst_disagreement = 0.0;
  for (const auto& b : balls) {
    json jb = ball_json(b);
    const bool p_dom = rouche_dominance(p, q, b.center, b.radius, n_theta);
    const bool q_dom =
        !p_dom && rouche_dominance(q, p, b.center, b.radius, n_theta);
    jb["dominant"] = p_dom ? "p" : (q_dom ? "q" : "none");
    if (p_dom || q_dom) {
      const RootPoly& dom = p_dom ? p : q;
      const long term_count = count_points_in_ball(dom.roots(), b);
      const CountResult cr = count_with_escalation(sum, b);
      jb["term_count"] = term_count;
      jb["sum_count"] = cr.count;
      jb["count_reliable"] = cr.reliable;
      jb["dist_to_integer"] = cr.dist_to_integer;
      jb["agree"] = cr.reliable && cr.count == term_count;
      worst_disagreement = std::fmax(
          worst_disagreement, std::fabs(static_cast<double>(cr.count - term_count)));
    }
    jballs.push_back(jb);
  }
  out.record["balls"] = jballs;
  out.record["nearest_term_ball_discrepancy"] = worst_disagreement;
  out.metric_values["nearest_term_ball_discrepancy"] = worst_disagreement;
  out.ok = true;
  return out;
}

CellOutcome Experiment::run_validate_cell(const CellTask& task, Rng& cell_rng) const {
  CellOutcome out;
  const auto terms = sample_terms(task.n, cell_rng);
  const PolySum sum{std::vector<RootPoly>(terms)};
  Rng solver_rng = cell_rng.split(kSolverStream);
  const RootReport report = find_roots(sum, cfg_.solve, solver_rng);
  write_cell_roots(task, terms, &report, out);
  out.record["solver"] = json::parse(report.diagnostics_json());
  if (!report.converged) {
    out.error = "solver did not converge: " + report.failure_reason;
    return out;
  }

  json jm;
  const double big_r = safe_pj_radius(report);
  Rng probe_rng = cell_rng.split(kPjProbeStream);
  double pj_max = 0.0;
  std::size_t probes_done = 0;
  for (int attempts = 0; probes_done < 10 && attempts < 200; ++attempts) {
    const std::complex<double> z = 0.7 * big_r * probe_rng.in_unit_disk();
    bool clear = true;
    for (const auto& y : report.roots) {
      if (std::abs(z - y) < 1e-3) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    const auto pj = poisson_jensen_residual(sum, report, z, big_r, 4096);
    pj_max = std::fmax(pj_max, pj.residual);
    ++probes_done;
  }
  jm["pj_residual_max"] = pj_max;
  out.metric_values["pj_residual_max"] = pj_max;

  const BumpFunction bump = cfg_.bump.value_or(
      BumpFunction{cfg_.grid.center, 0.5 * cfg_.grid.half_width});
  const auto hk = hkyv_residual(sum, report, bump, cfg_.grid);
  jm["hkyv_residual"] = hk.residual;
  jm["hkyv_lhs"] = hk.lhs;
  out.metric_values["hkyv_residual"] = hk.residual;
  out.record["metrics"] = jm;
  out.ok = true;
  return out;
}

CellOutcome Experiment::run_cell(const CellTask& task) const {
  Rng cell_rng(task.seed + opts_.seed_offset);
  CellOutcome out;
  try {
    switch (cfg_.mode) {
      case Mode::light_tail:
        out = run_light_cell(task, cell_rng);
        break;
      case Mode::heavy_tail:
        out = run_heavy_cell(task, cell_rng);
        break;
      case Mode::validate:
        out = run_validate_cell(task, cell_rng);
        break;
      case Mode::limit_only:
        out.ok = true;
        break;
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  out.record["n"] = task.n;
  out.record["seed"] = task.seed;
  if (!out.error.empty()) out.record["error"] = out.error;
  return out;
}

RunReport Experiment::run() {
  RunReport rep;
  rep.out_dir = out_dir_;
  std::filesystem::create_directories(out_dir_);

  // limit object + extracted grid measure (shared by all cells)
  if (cfg_.mode == Mode::light_tail || cfg_.mode == Mode::limit_only) {
    std::vector<LimitComponent> comps;
    for (const auto& t : cfg_.terms) {
      comps.push_back(LimitComponent{t.measure, t.degree.limit_ratio()});
    }
    Rng limit_rng(0x11C0DEull ^ opts_.seed_offset);
    limit_.emplace(std::move(comps), cfg_.mc_samples, limit_rng);
    rho_ = riesz_extract(*limit_, cfg_.grid);
    const auto path = out_dir_ / "rho_grid.csv";
    std::ofstream os(path);
    io::write_grid_csv(os, *rho_);
    rep.manifest.push_back(path);
  }

  // one cell per (n, seed)
  std::vector<CellTask> tasks;
  if (cfg_.mode != Mode::limit_only) {
    for (const auto n : cfg_.n_values) {
      for (const auto seed : cfg_.seeds) {
        std::ostringstream dir;
        dir << "n" << n << "_seed" << seed;
        tasks.push_back(CellTask{n, seed, out_dir_ / "cells" / dir.str()});
      }
    }
  }

  std::vector<CellOutcome> outcomes(tasks.size());
  if (!tasks.empty()) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads =
        std::min<std::size_t>(tasks.size(),
                              opts_.threads > 0 ? static_cast<unsigned>(opts_.threads) : hw);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        outcomes[i] = run_cell(tasks[i]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // deterministic ordered reduction into the summary
  json summary;
  summary["name"] = cfg_.name;
  summary["version"] = "0.1.0";
  summary["mode"] = mode_name(cfg_.mode);
  summary["config"] = json::parse(cfg_.echo_json());
  if (rho_) {
    summary["rho_grid"] = json::parse(io::grid_header_json(*rho_));
  }

  bool all_ok = true;
  json jcells = json::array();
  std::map<std::string, std::vector<double>> metric_series;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    jcells.push_back(outcomes[i].record);
    all_ok = all_ok && outcomes[i].ok;
    for (const auto& [k, v] : outcomes[i].metric_values) metric_series[k].push_back(v);
    for (const auto& f : outcomes[i].files) rep.manifest.push_back(f);
  }
  if (!tasks.empty()) summary["cells"] = jcells;

  json jagg;
  bool tol_ok = true;
  for (auto& [k, vals] : metric_series) {
    std::sort(vals.begin(), vals.end());
    const double median = vals[vals.size() / 2];
    jagg[k + "_median"] = median;
    jagg[k + "_min"] = vals.front();
    jagg[k + "_max"] = vals.back();
    const auto tol = cfg_.tolerances.find(k);
    if (tol != cfg_.tolerances.end()) {
      const bool ok = median <= tol->second;
      jagg[k + "_within_tolerance"] = ok;
      tol_ok = tol_ok && ok;
    }
  }
  summary["aggregate"] = jagg;

  rep.passed = all_ok && tol_ok;
  summary["pass"] = rep.passed;

  // manifest completeness: verify everything written so far, then add the
  // summary itself
  for (const auto& f : rep.manifest) {
    if (!std::filesystem::exists(f) || std::filesystem::file_size(f) == 0) {
      throw std::runtime_error("manifest entry missing or empty: " + f.string());
    }
  }
  const auto summary_path = out_dir_ / "summary.json";
  rep.manifest.push_back(summary_path);
  json jman = json::array();
  for (const auto& f : rep.manifest) {
    jman.push_back(std::filesystem::relative(f, out_dir_).string());
  }
  summary["manifest"] = jman;

  rep.summary_json = summary.dump(2) + "\n";
  std::ofstream os(summary_path);
  os << rep.summary_json;
  os.close();
  return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  Experiment e(cfg, opts);
  return e.run();
}

}  // namespace polysum
