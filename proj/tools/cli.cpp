#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gnm/config.hpp"
#include "gnm/error.hpp"
#include "gnm/kron.hpp"
#include "gnm/samplers.hpp"
#include "gnm/verify.hpp"
#include "json.hpp"

namespace gnm::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSeedEnv = "GNM_MASTER_SEED";

std::uint64_t dense_cap(const RunSpec& spec) {
  // One dense cell is budgeted as one double.
  return spec.cap_bytes ? *spec.cap_bytes / sizeof(double) : kDefaultDenseCap;
}

ModelConfig load(const RunSpec& spec) {
  if (spec.config_path.empty()) throw Error(ErrorCode::kBadConfig, "--config is required");
  ModelConfig cfg = load_config(spec.config_path);
  if (spec.k_override) cfg.big_k = *spec.k_override;
  if (spec.ell_override) cfg.ell = *spec.ell_override;
  validate_config(cfg);
  return cfg;
}

std::uint64_t master_seed(const RunSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used, 10);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kBadArgs, std::string(kSeedEnv) + " is not an unsigned 64-bit integer");
  }
  throw Error(ErrorCode::kBadArgs, "a master seed is required: pass --seed or set " + std::string(kSeedEnv));
}

Strategy primary_strategy(const RunSpec& spec) {
  return spec.strategies.empty() ? Strategy::kDcsd : spec.strategies.front();
}

// Writes `text` to the output path, or to `out` when none is set.
void emit(const RunSpec& spec, const std::string& text, std::ostream& out) {
  if (!spec.output_path) {
    out << text;
    return;
  }
  std::ofstream file(*spec.output_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + spec.output_path->string());
  file << text;
  if (!file) throw Error(ErrorCode::kIoError, "write failed for " + spec.output_path->string());
}

int generate(const RunSpec& spec, std::ostream& out) {
  const ModelConfig cfg = load(spec);
  const std::uint64_t seed = spec.seed.value_or(0);
  SampleOptions opts;
  opts.dense_cap = dense_cap(spec);
  const SampleResult result = sample(primary_strategy(spec), cfg, seed, opts);

  const Format format = spec.format.value_or(Format::kEdgeList);
  if (format == Format::kTraceJson) {
    emit(spec, trace_to_json(result.trace) + "\n", out);
    return kExitOk;
  }
  if (format != Format::kEdgeList) throw Error(ErrorCode::kBadArgs, "generate writes edgelist or trace-json");
  std::ostringstream edges;
  write_edge_list(edges, result.network);
  emit(spec, edges.str(), out);
  if (spec.output_path) {
    RunSpec trace_spec = spec;
    trace_spec.output_path = spec.output_path->string() + ".trace.json";
    emit(trace_spec, trace_to_json(result.trace) + "\n", out);
  }
  return kExitOk;
}

int verify(const RunSpec& spec, std::ostream& out) {
  const ModelConfig cfg = load(spec);
  const std::uint64_t seed = master_seed(spec);
  VerifyOptions opts;
  opts.workers = spec.workers;
  opts.dense_cap = dense_cap(spec);
  const std::uint64_t n = spec.n_samples.value_or(100000);
  const Strategy strategy = primary_strategy(spec);
  const Strategy other = spec.against.value_or(strategy == Strategy::kCi ? Strategy::kDcsd : Strategy::kCi);

  const MarginalReport marginal = marginal_test(cfg, strategy, n, seed, opts);
  const EquivalenceReport equivalence = equivalence_test(cfg, strategy, other, n, seed, opts);
  if (spec.format.value_or(Format::kText) == Format::kReportJson) {
    ordered_json doc = {{"marginal", ordered_json::parse(to_json(marginal))},
                        {"equivalence", ordered_json::parse(to_json(equivalence))}};
    emit(spec, doc.dump() + "\n", out);
  } else {
    emit(spec, to_text(marginal) + "\n" + to_text(equivalence), out);
  }
  return marginal.passed && equivalence.passed ? kExitOk : kExitCheckFailed;
}

int audit(const RunSpec& spec, std::ostream& out) {
  const ModelConfig cfg = load(spec);
  VerifyOptions opts;
  opts.workers = spec.workers;
  opts.dense_cap = dense_cap(spec);
  const ComplexityReport report = complexity_audit(cfg, spec.n_samples.value_or(10000), master_seed(spec), opts);
  emit(spec, spec.format.value_or(Format::kText) == Format::kReportJson ? to_json(report) + "\n" : to_text(report),
       out);
  return report.passed ? kExitOk : kExitCheckFailed;
}

int bench(const RunSpec& spec, std::ostream& out) {
  const ModelConfig base = load(spec);
  const std::uint32_t k_min = spec.k_min.value_or(base.big_k);
  const std::uint32_t k_max = spec.k_max.value_or(std::max(k_min, base.big_k));
  const std::vector<Strategy> strategies =
      spec.strategies.empty() ? std::vector<Strategy>{Strategy::kCi, Strategy::kDcsd} : spec.strategies;
  const std::uint64_t reps = std::max<std::uint64_t>(1, spec.n_samples.value_or(1));
  const std::uint64_t seed = spec.seed.value_or(0);
  SampleOptions opts;
  opts.dense_cap = dense_cap(spec);

  ordered_json rows = ordered_json::array();
  for (std::uint32_t k = k_min; k <= k_max; ++k) {
    ModelConfig cfg = base;
    cfg.big_k = k;
    if (cfg.ell > k) continue;
    validate_config(cfg);
    for (Strategy strategy : strategies) {
      ordered_json row = {{"K", k}, {"ell", cfg.ell}, {"strategy", std::string(to_string(strategy))}};
      double examined = 0.0;
      double edges = 0.0;
      double wall_ms = 0.0;
      std::string status = "ok";
      std::string reason;
      for (std::uint64_t r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        try {
          const SampleResult result = sample(strategy, cfg, replicate_seed(seed, strategy, r), opts);
          examined += static_cast<double>(result.trace.total_examined());
          edges += static_cast<double>(result.network.edges.size());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kCapExceeded && e.code() != ErrorCode::kGroupCapExceeded &&
              e.code() != ErrorCode::kOverflow) {
            throw;
          }
          status = "refused";
          reason = e.what();
          break;
        }
        wall_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      row["status"] = status;
      if (status == "ok") {
        row["wall_ms"] = wall_ms / static_cast<double>(reps);
        row["rvs_examined"] = examined / static_cast<double>(reps);
        row["edges"] = edges / static_cast<double>(reps);
      } else {
        row["reason"] = reason;
      }
      try {
        row["ci_rv_count"] = ci_rv_count(cfg);
      } catch (const Error&) {
        row["ci_rv_count"] = nullptr;
      }
      try {
        row["ebound"] = dcsd_ebound(cfg);
      } catch (const Error&) {
        row["ebound"] = nullptr;
      }
      row["full_cells"] = std::pow(static_cast<double>(cfg.b()), 2.0 * k);
      rows.push_back(std::move(row));
    }
  }

  if (spec.format.value_or(Format::kText) == Format::kReportJson) {
    ordered_json doc = {{"kind", "bench"}, {"seed", seed}, {"repetitions", reps}, {"rows", rows}};
    emit(spec, doc.dump() + "\n", out);
    return kExitOk;
  }
  std::ostringstream table;
  table << "K\tell\tstrategy\tstatus\twall_ms\trvs_examined\tedges\tci_rv_count\tebound\tfull_cells\n";
  for (const auto& row : rows) {
    auto cell = [&](const char* key) -> std::string {
      if (!row.contains(key) || row[key].is_null()) return "-";
      return row[key].is_string() ? row[key].get<std::string>() : row[key].dump();
    };
    table << cell("K") << '\t' << cell("ell") << '\t' << cell("strategy") << '\t' << cell("status") << '\t'
          << cell("wall_ms") << '\t' << cell("rvs_examined") << '\t' << cell("edges") << '\t' << cell("ci_rv_count")
          << '\t' << cell("ebound") << '\t' << cell("full_cells") << '\n';
  }
  emit(spec, table.str(), out);
  return kExitOk;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.command) {
      case Command::kGenerate: return generate(spec, out);
      case Command::kVerify: return verify(spec, out);
      case Command::kAudit: return audit(spec, out);
      case Command::kBench: return bench(spec, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kCapExceeded:
      case ErrorCode::kGroupCapExceeded:
        err << "hint: the dense strategies (naive, ci) enumerate every cell; the dcsd and gp strategies scale "
               "with the number of active cells and handle large K.\n";
        return kExitCapExceeded;
      case ErrorCode::kIoError: return kExitIo;
      default: return kExitBadInput;
    }
  }
  return kExitBadInput;
}

ParseOutcome parse_args(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample networks from Kronecker-product generative network models"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string config;
  std::vector<std::string> strategies;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string output;
  std::string format;
  std::uint64_t cap = 0;
  std::uint32_t k = 0, ell = 0, k_min = 0, k_max = 0;
  std::string against;

  const std::vector<std::pair<const char*, Command>> commands = {
      {"generate", Command::kGenerate}, {"verify", Command::kVerify}, {"audit", Command::kAudit}, {"bench", Command::kBench}};
  const std::map<std::string, const char*> help = {
      {"generate", "Sample one network; write its edge list and trace"},
      {"verify", "Per-cell marginal test and two-strategy equivalence test"},
      {"audit", "Random-variable counts against the closed-form complexity formulas"},
      {"bench", "Wall time and examined RVs across K and strategies"}};

  std::vector<CLI::App*> subs;
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config, "Model config JSON")->required();
    sub->add_option("--strategy", strategies, "naive|ci|dcsd|gp|kpgm-gp (comma list for bench)")->delimiter(',');
    sub->add_option("--seed", seed, "Master seed (verify/audit fall back to GNM_MASTER_SEED)");
    sub->add_option("--samples", samples, "Samples (verify), runs (audit) or repetitions (bench)");
    sub->add_option("--out", output, "Output path (default: stdout)");
    sub->add_option("--format", format, "edgelist|trace-json|report-json|text");
    sub->add_option("--workers", spec.workers, "Worker threads for replicate fan-out")->check(CLI::PositiveNumber);
    sub->add_option("--cap", cap, "Dense memory cap in bytes (8 bytes per cell)");
    sub->add_option("--K", k, "Override K from the config");
    sub->add_option("--ell", ell, "Override ell from the config");
    if (command == Command::kBench) {
      sub->add_option("--k-min", k_min, "Smallest K to run");
      sub->add_option("--k-max", k_max, "Largest K to run");
    }
    if (command == Command::kVerify) {
      sub->add_option("--against", against, "Strategy compared in the equivalence test");
    }
    sub->callback([&spec, command] { spec.command = command; });
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, app.exit(e, out, err) == 0 ? kExitOk : kExitBadInput};
  }

  try {
    const CLI::App* used = app.get_subcommands().front();
    auto given = [used](const char* name) {
      const CLI::Option* opt = used->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    spec.config_path = config;
    for (const auto& s : strategies) spec.strategies.push_back(parse_strategy(s));
    if (given("--seed")) spec.seed = seed;
    if (given("--samples")) spec.n_samples = samples;
    if (given("--out")) spec.output_path = output;
    if (given("--cap")) spec.cap_bytes = cap;
    if (given("--K")) spec.k_override = k;
    if (given("--ell")) spec.ell_override = ell;
    if (given("--k-min")) spec.k_min = k_min;
    if (given("--k-max")) spec.k_max = k_max;
    if (!against.empty()) spec.against = parse_strategy(against);
    if (!format.empty()) {
      if (format == "edgelist") spec.format = Format::kEdgeList;
      else if (format == "trace-json") spec.format = Format::kTraceJson;
      else if (format == "report-json") spec.format = Format::kReportJson;
      else if (format == "text") spec.format = Format::kText;
      else throw Error(ErrorCode::kBadArgs, "unknown format \"" + format + "\"");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return {std::nullopt, kExitBadInput};
  }
  return {spec, kExitOk};
}

}  // namespace gnm::cli
