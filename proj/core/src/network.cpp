#include "gnm/network.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "gnm/error.hpp"
#include "json.hpp"

namespace gnm {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kNaiveKpgm: return "naive";
    case Strategy::kCi: return "ci";
    case Strategy::kDcsd: return "dcsd";
    case Strategy::kGp: return "gp";
    case Strategy::kKpgmGp: return "kpgm-gp";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::kNaiveKpgm, Strategy::kCi, Strategy::kDcsd, Strategy::kGp,
                 Strategy::kKpgmGp}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::kBadArgs, "unknown strategy \"" + std::string(name) + "\"");
}

std::uint64_t SampleTrace::total_examined() const {
  std::uint64_t total = 0;
  for (const auto& level : per_level) total += level.rvs_examined;
  return total;
}

bool keeps_cell(const ModelConfig& cfg, const Cell& cell) noexcept {
  if (!cfg.directed) return cfg.allow_self_loops ? cell.row <= cell.col : cell.row < cell.col;
  return cfg.allow_self_loops || cell.row != cell.col;
}

SampledNetwork make_network(const ModelConfig& cfg, std::vector<Cell> final_cells) {
  if (!cfg.directed || !cfg.allow_self_loops) {
    std::erase_if(final_cells, [&](const Cell& c) { return !keeps_cell(cfg, c); });
  }
  return SampledNetwork{cfg.node_count(), std::move(final_cells)};
}

void write_edge_list(std::ostream& out, const SampledNetwork& net) {
  for (const auto& e : net.edges) out << e.row << '\t' << e.col << '\n';
}

std::string trace_to_json(const SampleTrace& trace) {
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& level : trace.per_level) {
    levels.push_back({{"lambda", level.lambda},
                      {"examined", level.rvs_examined},
                      {"active", level.rvs_active}});
  }
  nlohmann::ordered_json doc = {{"seed", trace.seed},
                        {"strategy", std::string(to_string(trace.strategy))},
                        {"per_level", levels}};
  return doc.dump();
}

}  // namespace gnm
