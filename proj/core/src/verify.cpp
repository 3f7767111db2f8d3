#include "gnm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

#include "gnm/error.hpp"
#include "gnm/rng.hpp"
#include "gnm/samplers.hpp"
#include "json.hpp"

namespace gnm {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kMinPooledBin = 20;

struct Tally {
  std::vector<std::uint64_t> cell_counts;  // side * side when counting cells
  std::vector<std::uint64_t> edge_histogram;
  std::vector<std::uint64_t> examined_sum;
  std::vector<std::uint64_t> active_sum;
  std::uint64_t min_total_examined = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_total_examined = 0;
  std::uint64_t total_examined_sum = 0;

  void add(const SampleResult& r, std::uint64_t side) {
    if (!cell_counts.empty()) {
      for (const auto& e : r.network.edges) ++cell_counts[e.row * side + e.col];
    }
    const std::size_t edges = r.network.edges.size();
    if (edge_histogram.size() <= edges) edge_histogram.resize(edges + 1, 0);
    ++edge_histogram[edges];
    const auto& levels = r.trace.per_level;
    if (examined_sum.size() < levels.size()) {
      examined_sum.resize(levels.size(), 0);
      active_sum.resize(levels.size(), 0);
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      examined_sum[i] += levels[i].rvs_examined;
      active_sum[i] += levels[i].rvs_active;
    }
    const std::uint64_t total = r.trace.total_examined();
    min_total_examined = std::min(min_total_examined, total);
    max_total_examined = std::max(max_total_examined, total);
    total_examined_sum += total;
  }

  void merge(const Tally& o) {
    auto add_vec = [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
      if (into.size() < from.size()) into.resize(from.size(), 0);
      for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
    };
    add_vec(cell_counts, o.cell_counts);
    add_vec(edge_histogram, o.edge_histogram);
    add_vec(examined_sum, o.examined_sum);
    add_vec(active_sum, o.active_sum);
    min_total_examined = std::min(min_total_examined, o.min_total_examined);
    max_total_examined = std::max(max_total_examined, o.max_total_examined);
    total_examined_sum += o.total_examined_sum;
  }
};

// Runs n replicates split into contiguous chunks, one per worker. Each
// replicate is seeded independently, so the merged tally does not depend on
// the worker count.
Tally run_replicates(const ModelConfig& cfg, Strategy strategy, std::uint64_t n, std::uint64_t master,
                     const VerifyOptions& opts, bool count_cells) {
  const std::uint64_t side = cfg.node_count();
  SampleOptions sample_opts;
  sample_opts.dense_cap = opts.dense_cap;

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(std::max<std::uint64_t>(n, 1))));
  std::vector<Tally> tallies(workers);
  for (auto& t : tallies) {
    if (count_cells) t.cell_counts.assign(side * side, 0);
  }
  auto run_chunk = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      tallies[w].add(sample(strategy, cfg, replicate_seed(master, strategy, i), sample_opts), side);
    }
  };

  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          run_chunk(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (unsigned w = 1; w < workers; ++w) tallies[0].merge(tallies[w]);
  return std::move(tallies[0]);
}

void check_marginal_inputs(const ModelConfig& cfg, std::uint64_t n_samples, const VerifyOptions& opts) {
  validate_config(cfg);
  if (n_samples == 0) throw Error(ErrorCode::kBadArgs, "need at least one sample");
  const std::uint64_t n = cfg.node_count();
  if (n > (std::uint64_t{1} << 32) || n * n > opts.dense_cap) {
    throw Error(ErrorCode::kCapExceeded, "per-cell report over " + std::to_string(n) +
                                             " nodes exceeds the dense cap");
  }
}

double z_score(double empirical, double theoretical, std::uint64_t n) {
  if (theoretical <= 0.0 || theoretical >= 1.0) {
    return empirical == theoretical ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (empirical - theoretical) / std::sqrt(theoretical * (1.0 - theoretical) / static_cast<double>(n));
}

ordered_json cell_json(const Cell& c) { return ordered_json::array({c.row, c.col}); }

// JSON has no infinity; large sentinel keeps the document parseable.
double finite(double v) { return std::isfinite(v) ? v : (v > 0 ? 1e308 : -1e308); }

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master, Strategy strategy, std::uint64_t index) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(strategy)), index);
}

double chi_square_p_value(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

MarginalReport marginal_test(const ModelConfig& cfg, Strategy strategy, std::uint64_t n_samples,
                             std::uint64_t seed, const VerifyOptions& opts) {
  check_marginal_inputs(cfg, n_samples, opts);
  const Tally tally = run_replicates(cfg, strategy, n_samples, seed, opts, true);

  MarginalReport report;
  report.strategy = strategy;
  report.n_samples = n_samples;
  report.seed = seed;
  report.z_threshold = opts.z_threshold;
  const std::uint64_t n = cfg.node_count();
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      const Cell cell{i, j};
      if (!keeps_cell(cfg, cell)) continue;
      CellMarginal m{cell, edge_prob(cfg, i, j),
                     static_cast<double>(tally.cell_counts[i * n + j]) / static_cast<double>(n_samples), 0.0};
      m.z_score = z_score(m.empirical, m.theoretical, n_samples);
      if (std::abs(m.z_score) > opts.z_threshold) ++report.flagged;
      report.cells.push_back(m);
    }
  }
  report.passed = report.flagged <= opts.max_flagged;
  return report;
}

EquivalenceReport equivalence_test(const ModelConfig& cfg, Strategy strategy_a, Strategy strategy_b,
                                   std::uint64_t n_samples, std::uint64_t seed, const VerifyOptions& opts) {
  check_marginal_inputs(cfg, n_samples, opts);
  const Tally a = run_replicates(cfg, strategy_a, n_samples, seed, opts, true);
  const Tally b = run_replicates(cfg, strategy_b, n_samples, seed, opts, true);

  EquivalenceReport report;
  report.strategy_a = strategy_a;
  report.strategy_b = strategy_b;
  report.n_samples = n_samples;
  report.seed = seed;
  const double dn = static_cast<double>(n_samples);
  const std::uint64_t n = cfg.node_count();
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      const Cell cell{i, j};
      if (!keeps_cell(cfg, cell)) continue;
      const double fa = static_cast<double>(a.cell_counts[i * n + j]) / dn;
      const double fb = static_cast<double>(b.cell_counts[i * n + j]) / dn;
      const double pooled = (fa + fb) / 2.0;
      const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / dn);
      const double z = se > 0.0 ? (fa - fb) / se : 0.0;
      report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
      report.cells.push_back({cell, fa, fb, z});
    }
  }

  report.histogram_a = a.edge_histogram;
  report.histogram_b = b.edge_histogram;
  const std::size_t width = std::max(a.edge_histogram.size(), b.edge_histogram.size());
  report.histogram_a.resize(width, 0);
  report.histogram_b.resize(width, 0);

  // Pool adjacent bins, then the two-sample statistic for equal totals.
  std::vector<std::pair<double, double>> bins;
  double ra = 0.0, rb = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    ra += static_cast<double>(report.histogram_a[k]);
    rb += static_cast<double>(report.histogram_b[k]);
    if (ra + rb >= kMinPooledBin) {
      bins.emplace_back(ra, rb);
      ra = rb = 0.0;
    }
  }
  if (ra + rb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(ra, rb);
    } else {
      bins.back().first += ra;
      bins.back().second += rb;
    }
  }
  for (const auto& [x, y] : bins) report.chi_square += (x - y) * (x - y) / (x + y);
  report.dof = bins.empty() ? 0 : static_cast<std::uint32_t>(bins.size() - 1);
  report.p_value = chi_square_p_value(report.chi_square, report.dof);
  report.passed = report.max_abs_z <= opts.z_threshold && report.p_value > opts.p_threshold;
  return report;
}

ComplexityReport complexity_audit(const ModelConfig& cfg, std::uint64_t n_runs, std::uint64_t seed,
                                  const VerifyOptions& opts) {
  validate_config(cfg);
  if (n_runs == 0) throw Error(ErrorCode::kBadArgs, "need at least one run");

  ComplexityReport report;
  report.n_runs = n_runs;
  report.seed = seed;
  report.ci_rv_count = ci_rv_count(cfg);
  report.ebound = dcsd_ebound(cfg);
  report.dcsd_expected_examined = dcsd_expected_examined(cfg);
  const double b2 = static_cast<double>(cfg.b()) * cfg.b();
  for (std::uint32_t lambda = 0; lambda <= cfg.tied_levels(); ++lambda) {
    report.ci_formula += std::pow(b2, cfg.ell + lambda);
    report.dcsd_formula += expected_active(cfg, lambda);
  }
  report.strict_inequality = report.dcsd_formula < report.ci_formula;
  const bool some_theta_below_one =
      std::any_of(cfg.theta.entries.begin(), cfg.theta.entries.end(), [](double v) { return v < 1.0; });

  const double runs = static_cast<double>(n_runs);
  report.ci_checked = report.ci_rv_count <= opts.dense_cap;
  if (report.ci_checked) {
    const Tally ci = run_replicates(cfg, Strategy::kCi, n_runs, seed, opts, false);
    report.ci_exact = ci.min_total_examined == report.ci_rv_count && ci.max_total_examined == report.ci_rv_count;
    const double mean = static_cast<double>(ci.total_examined_sum) / runs;
    report.strategies.push_back({Strategy::kCi, mean, static_cast<double>(report.ci_rv_count), report.ebound,
                                 mean <= static_cast<double>(report.ebound)});
  }

  const Tally dcsd = run_replicates(cfg, Strategy::kDcsd, n_runs, seed, opts, false);
  const double dcsd_mean = static_cast<double>(dcsd.total_examined_sum) / runs;
  report.strategies.push_back({Strategy::kDcsd, dcsd_mean, report.dcsd_formula, report.ebound,
                               dcsd_mean <= static_cast<double>(report.ebound)});
  bool levels_ok = true;
  for (std::uint32_t lambda = 0; lambda <= cfg.tied_levels(); ++lambda) {
    LevelActivity level;
    level.lambda = lambda;
    level.mean_active = static_cast<double>(dcsd.active_sum[lambda]) / runs;
    level.expected = expected_active(cfg, lambda);
    level.rel_error = level.expected > 0.0 ? std::abs(level.mean_active - level.expected) / level.expected
                                           : (level.mean_active == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    level.within_tolerance = level.rel_error <= opts.active_rel_tolerance;
    levels_ok = levels_ok && level.within_tolerance;
    report.dcsd_levels.push_back(level);
  }

  report.passed = (!report.ci_checked || report.ci_exact) && report.strategies.back().within_bound && levels_ok &&
                  (!some_theta_below_one || report.strict_inequality);
  return report;
}

DegreeStats degree_stats(const SampledNetwork& net) {
  DegreeStats stats;
  stats.n_nodes = net.n_nodes;
  stats.edge_count = net.edges.size();
  std::unordered_map<std::uint64_t, std::uint64_t> out_degree;
  std::unordered_map<std::uint64_t, std::uint64_t> in_degree;
  for (const auto& e : net.edges) {
    ++out_degree[e.row];
    ++in_degree[e.col];
  }
  auto histogram = [&](const std::unordered_map<std::uint64_t, std::uint64_t>& degrees, std::uint64_t& max_degree) {
    max_degree = 0;
    for (const auto& [node, d] : degrees) max_degree = std::max(max_degree, d);
    std::vector<std::uint64_t> hist(max_degree + 1, 0);
    for (const auto& [node, d] : degrees) ++hist[d];
    hist[0] += net.n_nodes - degrees.size();
    return hist;
  };
  stats.out_degree_histogram = histogram(out_degree, stats.max_out_degree);
  stats.in_degree_histogram = histogram(in_degree, stats.max_in_degree);
  return stats;
}

std::string to_json(const MarginalReport& report) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"cell", cell_json(c.cell)},
                     {"theoretical", c.theoretical},
                     {"empirical", c.empirical},
                     {"z", finite(c.z_score)}});
  }
  ordered_json doc = {{"kind", "marginal"},
                      {"strategy", std::string(to_string(report.strategy))},
                      {"n_samples", report.n_samples},
                      {"seed", report.seed},
                      {"z_threshold", report.z_threshold},
                      {"flagged", report.flagged},
                      {"passed", report.passed},
                      {"cells", cells}};
  return doc.dump();
}

std::string to_json(const EquivalenceReport& report) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"cell", cell_json(c.cell)}, {"freq_a", c.freq_a}, {"freq_b", c.freq_b}, {"z", c.z_score}});
  }
  ordered_json doc = {{"kind", "equivalence"},
                      {"strategy_a", std::string(to_string(report.strategy_a))},
                      {"strategy_b", std::string(to_string(report.strategy_b))},
                      {"n_samples", report.n_samples},
                      {"seed", report.seed},
                      {"max_abs_z", report.max_abs_z},
                      {"chi_square", report.chi_square},
                      {"dof", report.dof},
                      {"p_value", report.p_value},
                      {"passed", report.passed},
                      {"histogram_a", report.histogram_a},
                      {"histogram_b", report.histogram_b},
                      {"cells", cells}};
  return doc.dump();
}

std::string to_json(const ComplexityReport& report) {
  ordered_json strategies = ordered_json::array();
  for (const auto& s : report.strategies) {
    strategies.push_back({{"strategy", std::string(to_string(s.strategy))},
                          {"mean_rvs_examined", s.mean_rvs_examined},
                          {"formula_value", s.formula_value},
                          {"ebound", s.ebound},
                          {"within_bound", s.within_bound}});
  }
  ordered_json levels = ordered_json::array();
  for (const auto& l : report.dcsd_levels) {
    levels.push_back({{"lambda", l.lambda},
                      {"mean_active", l.mean_active},
                      {"expected", l.expected},
                      {"rel_error", finite(l.rel_error)},
                      {"within_tolerance", l.within_tolerance}});
  }
  ordered_json doc = {{"kind", "complexity"},
                      {"n_runs", report.n_runs},
                      {"seed", report.seed},
                      {"ci", report.ci_rv_count},
                      {"ebound", report.ebound},
                      {"ci_checked", report.ci_checked},
                      {"ci_exact", report.ci_exact},
                      {"dcsd_expected_examined", report.dcsd_expected_examined},
                      {"ci_formula", report.ci_formula},
                      {"dcsd_formula", report.dcsd_formula},
                      {"strict_inequality", report.strict_inequality},
                      {"passed", report.passed},
                      {"strategies", strategies},
                      {"dcsd_levels", levels}};
  return doc.dump();
}

std::string to_json(const DegreeStats& stats) {
  ordered_json doc = {{"n_nodes", stats.n_nodes},
                      {"edge_count", stats.edge_count},
                      {"max_out_degree", stats.max_out_degree},
                      {"max_in_degree", stats.max_in_degree},
                      {"out_degree_histogram", stats.out_degree_histogram},
                      {"in_degree_histogram", stats.in_degree_histogram}};
  return doc.dump();
}

std::string to_text(const MarginalReport& report) {
  std::ostringstream out;
  out << "marginal test  strategy=" << to_string(report.strategy) << "  samples=" << report.n_samples
      << "  seed=" << report.seed << '\n';
  out << std::left << std::setw(14) << "cell" << std::setw(14) << "theoretical" << std::setw(14) << "empirical"
      << "z\n";
  out << std::fixed;
  for (const auto& c : report.cells) {
    std::ostringstream cell;
    cell << '(' << c.cell.row << ',' << c.cell.col << ')';
    out << std::setw(14) << cell.str() << std::setw(14) << std::setprecision(6) << c.theoretical << std::setw(14)
        << c.empirical << std::setprecision(3) << c.z_score << (std::abs(c.z_score) > report.z_threshold ? "  *" : "")
        << '\n';
  }
  out << "flagged " << report.flagged << " of " << report.cells.size() << "  "
      << (report.passed ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string to_text(const EquivalenceReport& report) {
  std::ostringstream out;
  out << "equivalence test  " << to_string(report.strategy_a) << " vs " << to_string(report.strategy_b)
      << "  samples=" << report.n_samples << "  seed=" << report.seed << '\n';
  out << "max |z| over " << report.cells.size() << " cells: " << report.max_abs_z << '\n';
  out << "edge-count chi-square " << report.chi_square << " on " << report.dof << " dof, p=" << report.p_value
      << '\n';
  out << (report.passed ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string to_text(const ComplexityReport& report) {
  std::ostringstream out;
  out << "complexity audit  runs=" << report.n_runs << "  seed=" << report.seed << '\n';
  out << "ci_rv_count " << report.ci_rv_count << "  ebound " << report.ebound << '\n';
  if (report.ci_checked) {
    out << "ci exact on every run: " << (report.ci_exact ? "yes" : "no") << '\n';
  } else {
    out << "ci not run (above dense cap)\n";
  }
  out << std::left << std::setw(10) << "strategy" << std::setw(18) << "mean_examined" << std::setw(18) << "formula"
      << std::setw(14) << "ebound" << "within\n";
  for (const auto& s : report.strategies) {
    out << std::setw(10) << to_string(s.strategy) << std::setw(18) << s.mean_rvs_examined << std::setw(18)
        << s.formula_value << std::setw(14) << s.ebound << (s.within_bound ? "yes" : "no") << '\n';
  }
  out << "dcsd expected examined " << report.dcsd_expected_examined << '\n';
  out << std::setw(8) << "lambda" << std::setw(16) << "mean_active" << std::setw(16) << "expected" << "rel_error\n";
  for (const auto& l : report.dcsd_levels) {
    out << std::setw(8) << l.lambda << std::setw(16) << l.mean_active << std::setw(16) << l.expected << l.rel_error
        << (l.within_tolerance ? "" : "  *") << '\n';
  }
  out << "sum (b^2)^(ell+lambda) = " << report.ci_formula << "  >  sum (sum Theta)^(ell+lambda) = "
      << report.dcsd_formula << ": " << (report.strict_inequality ? "yes" : "no") << '\n';
  out << (report.passed ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace gnm
