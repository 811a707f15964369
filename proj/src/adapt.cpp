#include "marg/adapt.hpp"

#include <algorithm>
#include <functional>

#include "marg/errors.hpp"
#include "marg/sobel.hpp"

namespace marg {

SweepSpec SweepSpec::defaults() {
  SweepSpec s;
  for (int tau = 2; tau <= 80; tau += 2) {
    s.tau_s_grid.push_back(tau);
    s.tau_l_grid.push_back(tau);
  }
  return s;
}

double coverage(const RegionSet& rs) {
  const std::size_t total = static_cast<std::size_t>(rs.height) * rs.width;
  if (total == 0) return 0.0;
  return static_cast<double>(rs.covered.count()) / static_cast<double>(total);
}

std::optional<std::size_t> plateau_stop_index(const std::vector<SweepPoint>& points, double eps,
                                              int window) {
  for (std::size_t i = window; i < points.size(); ++i) {
    const double base = points[i - window].coverage;
    bool flat = true;
    for (std::size_t k = i - window + 1; k <= i; ++k) {
      if (points[k].coverage - base >= eps) {
        flat = false;
        break;
      }
    }
    if (flat) return i;
  }
  return std::nullopt;
}

namespace {

struct PhaseResult {
  std::vector<SweepPoint> points;
  int chosen_tau = 0;
  bool converged = false;
};

PhaseResult run_phase(const Image& img, const EdgeMap& edges, const GrowConfig& base,
                      const std::vector<int>& grid, bool vary_tau_s, int other_tau, double eps,
                      int window, int n_threads) {
  auto eval_point = [&](int tau) {
    GrowConfig cfg = base;
    cfg.thresholds = vary_tau_s ? ThresholdPair{other_tau, tau} : ThresholdPair{tau, other_tau};
    const RegionSet rs = segment_with_edges(img, cfg, edges);
    return SweepPoint{tau, coverage(rs), static_cast<int>(rs.regions.size())};
  };

  PhaseResult res;
  if (n_threads <= 1) {
    for (int tau : grid) {
      res.points.push_back(eval_point(tau));
      if (auto stop = plateau_stop_index(res.points, eps, window)) {
        res.chosen_tau = res.points[*stop - window].tau;
        res.converged = true;
        return res;
      }
    }
  } else {
    // Evaluate in chunks; the plateau decision runs on the ordered prefix and
    // the report is truncated at the stop index, so extra points computed past
    // it never surface and the output matches the serial path bit for bit.
    const std::size_t chunk = std::max<std::size_t>(n_threads, window + 1);
    std::size_t begin = 0;
    while (begin < grid.size()) {
      const std::size_t end = std::min(grid.size(), begin + chunk);
      std::vector<SweepPoint> buf(end - begin);
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
      for (long t = 0; t < static_cast<long>(end - begin); ++t)
        buf[t] = eval_point(grid[begin + t]);
      res.points.insert(res.points.end(), buf.begin(), buf.end());
      if (auto stop = plateau_stop_index(res.points, eps, window)) {
        res.points.resize(*stop + 1);
        res.chosen_tau = res.points[*stop - window].tau;
        res.converged = true;
        return res;
      }
      begin = end;
    }
  }
  res.chosen_tau = grid.back();
  res.converged = false;
  return res;
}

}  // namespace

SweepReport adaptive_thresholds(const Image& img, const GrowConfig& base, const SweepSpec& spec,
                                int n_threads) {
  if (spec.tau_s_grid.empty() || spec.tau_l_grid.empty())
    throw ConfigError("sweep grids must be non-empty");
  auto strictly_ascending = [](const std::vector<int>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<int>()) == v.end();
  };
  if (!strictly_ascending(spec.tau_s_grid) || !strictly_ascending(spec.tau_l_grid))
    throw ConfigError("sweep grids must be strictly ascending");
  if (spec.plateau_window < 1) throw ConfigError("plateau window must be at least 1");
  if (spec.plateau_eps <= 0.0) throw ConfigError("plateau eps must be positive");

  const EdgeMap edges = sobel_edges(img, base.edge_fraction);

  SweepReport report;
  const PhaseResult phase1 = run_phase(img, edges, base, spec.tau_s_grid, true,
                                       spec.tau_l_during_s_sweep, spec.plateau_eps,
                                       spec.plateau_window, n_threads);
  report.seed_sweep = phase1.points;
  report.seed_converged = phase1.converged;

  const PhaseResult phase2 =
      run_phase(img, edges, base, spec.tau_l_grid, false, phase1.chosen_tau, spec.plateau_eps,
                spec.plateau_window, n_threads);
  report.local_sweep = phase2.points;
  report.local_converged = phase2.converged;
  report.chosen = {phase2.chosen_tau, phase1.chosen_tau};
  return report;
}

nlohmann::json sweep_report_json(const SweepReport& report) {
  auto points = [](const std::vector<SweepPoint>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts)
      arr.push_back({{"tau", p.tau}, {"coverage", p.coverage}, {"n_regions", p.n_regions}});
    return arr;
  };
  return {
      {"seed_sweep", points(report.seed_sweep)},
      {"local_sweep", points(report.local_sweep)},
      {"chosen", {{"tau_l", report.chosen.tau_l}, {"tau_s", report.chosen.tau_s}}},
      {"seed_converged", report.seed_converged},
      {"local_converged", report.local_converged},
  };
}

SweepReport sweep_report_from_json(const nlohmann::json& j) {
  auto points = [](const nlohmann::json& arr) {
    std::vector<SweepPoint> pts;
    for (const auto& p : arr)
      pts.push_back({p.at("tau").get<int>(), p.at("coverage").get<double>(),
                     p.at("n_regions").get<int>()});
    return pts;
  };
  SweepReport report;
  report.seed_sweep = points(j.at("seed_sweep"));
  report.local_sweep = points(j.at("local_sweep"));
  report.chosen = {j.at("chosen").at("tau_l").get<int>(), j.at("chosen").at("tau_s").get<int>()};
  report.seed_converged = j.at("seed_converged").get<bool>();
  report.local_converged = j.at("local_converged").get<bool>();
  return report;
}

}  // namespace marg
