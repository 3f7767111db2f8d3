#include "gnm/samplers.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gnm/error.hpp"
#include "wide_int.hpp"
#include "gnm/rng.hpp"

namespace gnm {

namespace {

using detail::u128;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  const u128 product = static_cast<u128>(a) * b;
  if (product > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorCode::kOverflow, std::string(what) + " exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(product);
}

void check_cap(std::uint64_t needed, std::uint64_t cap, const char* what) {
  if (needed > cap) {
    throw Error(ErrorCode::kCapExceeded, std::string(what) + " needs " + std::to_string(needed) +
                                             " dense cells, above the cap of " + std::to_string(cap) +
                                             "; use the dcsd or gp strategy for large K");
  }
}

const std::vector<Cell>& checked_override(const std::vector<Cell>& cells, std::uint64_t side) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].row >= side || cells[i].col >= side) {
      throw Error(ErrorCode::kIndexOutOfRange, "level-0 override cell outside the level grid");
    }
    if (i > 0 && !(cells[i - 1] < cells[i])) {
      throw Error(ErrorCode::kBadArgs, "level-0 override must be sorted and duplicate-free");
    }
  }
  return cells;
}

// Level 0 as a sparse active list: every cell of P^ell drawn row-major.
LevelState sample_level0_sparse(const ModelConfig& cfg, Rng rng, const SampleOptions& opts,
                                LevelRecord& record) {
  LevelState state{0, cfg.level_side(0), {}};
  record = {0, checked_mul(state.side, state.side, "level-0 cell count"), 0};
  if (opts.level0_override) {
    state.active_cells = checked_override(*opts.level0_override, state.side);
  } else {
    for (std::uint64_t i = 0; i < state.side; ++i) {
      for (std::uint64_t j = 0; j < state.side; ++j) {
        if (rng.bernoulli(cell_prob(cfg.theta, cfg.ell, i, j))) state.active_cells.push_back({i, j});
      }
    }
  }
  record.rvs_active = state.active_cells.size();
  return state;
}

SampleResult finish(const ModelConfig& cfg, std::uint64_t seed, Strategy strategy,
                    std::vector<LevelRecord> records, std::vector<Cell> final_cells) {
  return SampleResult{make_network(cfg, std::move(final_cells)),
                      SampleTrace{seed, strategy, std::move(records)}};
}

}  // namespace

SampleResult sample_kpgm_naive(const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  validate_config(cfg);
  const std::uint64_t n = cfg.node_count();
  const std::uint64_t cells = checked_mul(n, n, "N_v^2");
  check_cap(cells, opts.dense_cap, "naive KPGM sampling");

  Rng rng = Rng(seed).child(0);
  std::vector<Cell> edges;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      if (rng.bernoulli(cell_prob(cfg.theta, cfg.big_k, i, j))) edges.push_back({i, j});
    }
  }
  std::vector<LevelRecord> records{{0, cells, edges.size()}};
  return finish(cfg, seed, Strategy::kNaiveKpgm, std::move(records), std::move(edges));
}

SampleResult sample_mkpgm_ci(const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  validate_config(cfg);
  check_cap(ci_rv_count(cfg), opts.dense_cap, "CI sampling");

  const Rng root(seed);
  const std::uint32_t b = cfg.b();
  std::uint64_t side = cfg.level_side(0);
  std::vector<std::uint8_t> grid(side * side, 0);
  std::vector<LevelRecord> records;

  std::uint64_t active = 0;
  if (opts.level0_override) {
    for (const auto& c : checked_override(*opts.level0_override, side)) grid[c.row * side + c.col] = 1;
    active = opts.level0_override->size();
  } else {
    Rng rng = root.child(0);
    for (std::uint64_t i = 0; i < side; ++i) {
      for (std::uint64_t j = 0; j < side; ++j) {
        const bool on = rng.bernoulli(cell_prob(cfg.theta, cfg.ell, i, j));
        grid[i * side + j] = on;
        active += on;
      }
    }
  }
  records.push_back({0, side * side, active});

  for (std::uint32_t lambda = 1; lambda <= cfg.tied_levels(); ++lambda) {
    Rng rng = root.child(lambda);
    const std::uint64_t next_side = side * b;
    std::vector<std::uint8_t> next(next_side * next_side, 0);
    active = 0;
    for (std::uint64_t k = 0; k < next_side; ++k) {
      const std::uint64_t parent_row = (k / b) * side;
      const auto x = static_cast<std::uint32_t>(k % b);
      for (std::uint64_t l = 0; l < next_side; ++l) {
        // The CPT is consulted (and a draw consumed) even under an inactive parent.
        const double p = grid[parent_row + l / b] ? cfg.theta.at(x, static_cast<std::uint32_t>(l % b)) : 0.0;
        const bool on = rng.bernoulli(p);
        next[k * next_side + l] = on;
        active += on;
      }
    }
    records.push_back({lambda, next_side * next_side, active});
    grid = std::move(next);
    side = next_side;
  }

  std::vector<Cell> final_cells;
  final_cells.reserve(active);
  for (std::uint64_t i = 0; i < side; ++i) {
    for (std::uint64_t j = 0; j < side; ++j) {
      if (grid[i * side + j]) final_cells.push_back({i, j});
    }
  }
  return finish(cfg, seed, Strategy::kCi, std::move(records), std::move(final_cells));
}

SampleResult sample_mkpgm_dcsd(const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  validate_config(cfg);
  const Rng root(seed);
  const std::uint32_t b = cfg.b();
  const std::uint64_t b2 = static_cast<std::uint64_t>(b) * b;

  std::vector<LevelRecord> records(1);
  LevelState level = sample_level0_sparse(cfg, root.child(0), opts, records[0]);

  for (std::uint32_t lambda = 1; lambda <= cfg.tied_levels(); ++lambda) {
    Rng rng = root.child(lambda);
    std::vector<Cell> next;
    for (const auto& parent : level.active_cells) {
      for (std::uint32_t x = 0; x < b; ++x) {
        for (std::uint32_t y = 0; y < b; ++y) {
          if (rng.bernoulli(cfg.theta.at(x, y))) next.push_back({parent.row * b + x, parent.col * b + y});
        }
      }
    }
    std::sort(next.begin(), next.end());
    records.push_back({lambda, checked_mul(level.active_cells.size(), b2, "examined count"), next.size()});
    level = LevelState{lambda, level.side * b, std::move(next)};
  }
  return finish(cfg, seed, Strategy::kDcsd, std::move(records), std::move(level.active_cells));
}

SampleResult sample_mkpgm_gp(const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  validate_config(cfg);
  const Rng root(seed);
  const std::uint32_t b = cfg.b();

  std::vector<LevelRecord> records(1);
  LevelState level = sample_level0_sparse(cfg, root.child(0), opts, records[0]);

  for (std::uint32_t lambda = 1; lambda <= cfg.tied_levels(); ++lambda) {
    Rng rng = root.child(lambda);
    const auto& parents = level.active_cells;
    std::uint64_t covered = 0;
    std::vector<Cell> next;
    for (const auto& group : tied_level_groups(cfg.theta, parents.size())) {
      covered += group.t;
      const auto& block = std::get<BlockCells>(group.cell_source);
      const std::uint64_t per_parent = block.positions.size();
      const std::uint64_t hits = binomial_draw(group.t, group.pi, rng);
      for (std::uint64_t rank : choose_without_replacement(group.t, hits, rng)) {
        const Cell& parent = parents[rank / per_parent];
        const ThetaPosition& pos = block.positions[rank % per_parent];
        next.push_back({parent.row * b + pos.row, parent.col * b + pos.col});
      }
    }
    std::sort(next.begin(), next.end());
    records.push_back({lambda, covered, next.size()});
    level = LevelState{lambda, level.side * b, std::move(next)};
  }
  return finish(cfg, seed, Strategy::kGp, std::move(records), std::move(level.active_cells));
}

SampleResult sample_kpgm_gp(const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  const KpgmGroups groups = kpgm_groups(cfg, opts.group_cap);
  Rng rng = Rng(seed).child(0);
  std::uint64_t covered = 0;
  std::vector<Cell> edges;
  for (const auto& group : groups.groups) {
    covered += group.t;
    const std::uint64_t hits = binomial_draw(group.t, group.pi, rng);
    for (std::uint64_t rank : choose_without_replacement(group.t, hits, rng)) {
      edges.push_back(unrank_kpgm_cell(groups, group, rank));
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<LevelRecord> records{{0, covered, edges.size()}};
  return finish(cfg, seed, Strategy::kKpgmGp, std::move(records), std::move(edges));
}

SampleResult sample(Strategy strategy, const ModelConfig& cfg, std::uint64_t seed, const SampleOptions& opts) {
  switch (strategy) {
    case Strategy::kNaiveKpgm: return sample_kpgm_naive(cfg, seed, opts);
    case Strategy::kCi: return sample_mkpgm_ci(cfg, seed, opts);
    case Strategy::kDcsd: return sample_mkpgm_dcsd(cfg, seed, opts);
    case Strategy::kGp: return sample_mkpgm_gp(cfg, seed, opts);
    case Strategy::kKpgmGp: return sample_kpgm_gp(cfg, seed, opts);
  }
  throw Error(ErrorCode::kBadArgs, "unknown strategy");
}

}  // namespace gnm
