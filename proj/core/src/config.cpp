#include "gnm/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gnm/error.hpp"
#include "gnm/kron.hpp"
#include "json.hpp"

namespace gnm {

using nlohmann::json;

ThetaMatrix ThetaMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  ThetaMatrix theta;
  theta.side = static_cast<std::uint32_t>(rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw Error(ErrorCode::kBadConfig, "theta must be square");
    }
    theta.entries.insert(theta.entries.end(), row.begin(), row.end());
  }
  return theta;
}

double ThetaMatrix::sum() const { return std::accumulate(entries.begin(), entries.end(), 0.0); }

std::uint64_t ModelConfig::node_count() const { return checked_pow(b(), big_k); }

std::uint64_t ModelConfig::level_side(std::uint32_t lambda) const {
  return checked_pow(b(), ell + lambda);
}

const ModelConfig& validate_config(const ModelConfig& cfg) {
  const auto& theta = cfg.theta;
  if (theta.side < 2) {
    throw Error(ErrorCode::kBadConfig, "theta side b must be at least 2");
  }
  if (theta.entries.size() != static_cast<std::size_t>(theta.side) * theta.side) {
    throw Error(ErrorCode::kBadConfig, "theta must hold b*b entries");
  }
  for (double v : theta.entries) {
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << "theta entry " << v << " outside [0, 1]";
      throw Error(ErrorCode::kEntryOutOfRange, msg.str());
    }
  }
  if (cfg.ell < 1 || cfg.ell > cfg.big_k) {
    std::ostringstream msg;
    msg << "need 1 <= ell <= K, got ell=" << cfg.ell << " K=" << cfg.big_k;
    throw Error(ErrorCode::kBadLevels, msg.str());
  }
  (void)checked_pow(theta.side, cfg.big_k);
  return cfg;
}

namespace {

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::kBadConfig, std::string("missing field \"") + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("field \"") + key + "\": " + e.what());
  }
}

std::uint32_t positive_int(const json& doc, const char* key) {
  const auto value = required<std::int64_t>(doc, key);
  if (value < 1 || value > 0xFFFFFFFFll) {
    throw Error(ErrorCode::kBadConfig, std::string("field \"") + key + "\" must be a positive integer");
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

ModelConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kBadConfig, "config must be a JSON object");
  }

  ModelConfig cfg;
  const auto b = positive_int(doc, "b");
  const auto rows = required<std::vector<std::vector<double>>>(doc, "theta");
  if (rows.size() != b) {
    throw Error(ErrorCode::kBadConfig, "theta has " + std::to_string(rows.size()) +
                                           " rows but b=" + std::to_string(b));
  }
  cfg.theta = ThetaMatrix::from_rows(rows);
  cfg.big_k = positive_int(doc, "K");
  cfg.ell = positive_int(doc, "ell");
  if (doc.contains("directed")) cfg.directed = required<bool>(doc, "directed");
  if (doc.contains("self_loops")) cfg.allow_self_loops = required<bool>(doc, "self_loops");
  validate_config(cfg);
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::string config_to_json(const ModelConfig& cfg) {
  json rows = json::array();
  for (std::uint32_t r = 0; r < cfg.theta.side; ++r) {
    json row = json::array();
    for (std::uint32_t c = 0; c < cfg.theta.side; ++c) row.push_back(cfg.theta.at(r, c));
    rows.push_back(std::move(row));
  }
  json doc = {{"b", cfg.theta.side},     {"theta", rows},
              {"K", cfg.big_k},          {"ell", cfg.ell},
              {"directed", cfg.directed}, {"self_loops", cfg.allow_self_loops}};
  return doc.dump();
}

}  // namespace gnm
