#include "gnm/groups.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gnm/error.hpp"
#include "wide_int.hpp"
#include "gnm/kron.hpp"

namespace gnm {

namespace {

using detail::u128;
constexpr u128 kU64Max = std::numeric_limits<std::uint64_t>::max();

// C(n, k) in 128-bit, saturating at just above kU64Max.
u128 binomial_coefficient(u128 n, u128 k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (u128 i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
    if (result > kU64Max) return kU64Max + 1;
  }
  return result;
}

u128 multinomial(const std::vector<std::uint32_t>& counts) {
  u128 result = 1;
  std::uint32_t placed = 0;
  for (auto c : counts) {
    placed += c;
    result *= binomial_coefficient(placed, c);
  }
  return result;
}

void enumerate_compositions(std::uint32_t remaining, std::size_t slot, std::vector<std::uint32_t>& counts,
                            std::vector<std::vector<std::uint32_t>>& out) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    out.push_back(counts);
    return;
  }
  for (std::uint32_t c = remaining + 1; c-- > 0;) {
    counts[slot] = c;
    enumerate_compositions(remaining - c, slot + 1, counts, out);
  }
}

}  // namespace

DistinctTheta distinct_theta(const ThetaMatrix& theta) {
  struct Entry {
    double value;
    ThetaPosition pos;
  };
  std::vector<Entry> entries;
  for (std::uint32_t r = 0; r < theta.side; ++r) {
    for (std::uint32_t c = 0; c < theta.side; ++c) entries.push_back({theta.at(r, c), {r, c}});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });

  DistinctTheta out;
  for (const auto& e : entries) {
    if (out.values.empty() || out.values.back() != e.value) {
      out.values.push_back(e.value);
      out.positions.emplace_back();
    }
    out.positions.back().push_back(e.pos);
  }
  return out;
}

std::vector<ProbabilityGroup> tied_level_groups(const ThetaMatrix& theta, std::uint64_t active_parents) {
  const auto distinct = distinct_theta(theta);
  std::vector<ProbabilityGroup> groups;
  groups.reserve(distinct.values.size());
  for (std::size_t s = 0; s < distinct.values.size(); ++s) {
    const u128 t = static_cast<u128>(active_parents) * distinct.positions[s].size();
    if (t > kU64Max) throw Error(ErrorCode::kOverflow, "group size exceeds 64 bits");
    groups.push_back({distinct.values[s], static_cast<std::uint64_t>(t),
                      BlockCells{active_parents, distinct.positions[s]}});
  }
  return groups;
}

KpgmGroups kpgm_groups(const ModelConfig& cfg, std::uint64_t group_cap) {
  validate_config(cfg);
  const std::uint64_t b2 = static_cast<std::uint64_t>(cfg.b()) * cfg.b();
  (void)checked_pow(b2, cfg.big_k);

  KpgmGroups out;
  out.distinct = distinct_theta(cfg.theta);
  out.big_k = cfg.big_k;
  out.b = cfg.b();
  const auto& values = out.distinct.values;
  const std::size_t m = values.size();

  const u128 n_compositions = binomial_coefficient(cfg.big_k + m - 1, m - 1);
  if (n_compositions > group_cap) {
    throw Error(ErrorCode::kGroupCapExceeded,
                "KPGM group sampling needs " +
                    (n_compositions > kU64Max ? std::string("more than 2^64")
                                              : std::to_string(static_cast<std::uint64_t>(n_compositions))) +
                    " theta compositions, above the cap of " + std::to_string(group_cap));
  }

  std::vector<std::vector<std::uint32_t>> all;
  all.reserve(static_cast<std::size_t>(n_compositions));
  std::vector<std::uint32_t> scratch(m, 0);
  enumerate_compositions(cfg.big_k, 0, scratch, all);

  struct Scored {
    double pi;
    Composition comp;
  };
  std::vector<Scored> scored;
  scored.reserve(all.size());
  for (auto& counts : all) {
    u128 cells = multinomial(counts);
    double pi = 1.0;
    for (std::size_t s = 0; s < m; ++s) {
      for (std::uint32_t i = 0; i < counts[s]; ++i) {
        cells *= out.distinct.positions[s].size();
        pi *= values[s];
      }
    }
    scored.push_back({pi, Composition{std::move(counts), static_cast<std::uint64_t>(cells)}});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.pi < b.pi; });

  for (auto& s : scored) {
    if (out.groups.empty() || out.groups.back().pi != s.pi) {
      out.groups.push_back({s.pi, 0, CompositionCells{}});
    }
    auto& group = out.groups.back();
    group.t += s.comp.cells;
    std::get<CompositionCells>(group.cell_source).compositions.push_back(std::move(s.comp));
  }
  return out;
}

Cell unrank_kpgm_cell(const KpgmGroups& groups, const ProbabilityGroup& group, std::uint64_t rank) {
  if (rank >= group.t) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "rank " + std::to_string(rank) + " outside group of " + std::to_string(group.t));
  }
  const auto& source = std::get<CompositionCells>(group.cell_source);
  const auto& positions = groups.distinct.positions;
  const std::uint32_t k = groups.big_k;

  for (const auto& comp : source.compositions) {
    if (rank >= comp.cells) {
      rank -= comp.cells;
      continue;
    }
    u128 choices = 1;
    for (std::size_t s = 0; s < comp.counts.size(); ++s) {
      for (std::uint32_t i = 0; i < comp.counts[s]; ++i) choices *= positions[s].size();
    }
    u128 perm_rank = rank / choices;
    u128 choice_rank = rank % choices;

    std::vector<std::uint32_t> counts = comp.counts;
    u128 perms = multinomial(counts);
    Cell cell;
    const std::uint64_t base = groups.b;
    for (std::uint32_t remaining = k; remaining > 0; --remaining) {
      std::size_t pick = 0;
      for (std::size_t s = 0; s < counts.size(); ++s) {
        if (counts[s] == 0) continue;
        const u128 block = perms * counts[s] / remaining;
        if (perm_rank < block) {
          pick = s;
          perms = block;
          break;
        }
        perm_rank -= block;
      }
      --counts[pick];
      const auto& pool = positions[pick];
      const auto& pos = pool[static_cast<std::size_t>(choice_rank % pool.size())];
      choice_rank /= pool.size();
      cell.row = cell.row * base + pos.row;
      cell.col = cell.col * base + pos.col;
    }
    return cell;
  }
  throw Error(ErrorCode::kIndexOutOfRange, "rank outside group compositions");
}

}  // namespace gnm
