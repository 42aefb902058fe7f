#include "beamsculpt/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rand_detail.hpp"

namespace beamsculpt {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SystemConfig::validate() const {
  if (n_users < 1) throw ConfigError("n_users must be >= 1");
  if (n_tx < n_users) throw ConfigError("n_tx must be >= n_users");
  if (!finite_positive(bandwidth_hz)) throw ConfigError("bandwidth_hz must be > 0");
  if (!finite_positive(power_budget)) throw ConfigError("power_budget must be > 0");
  if (!finite_positive(noise_variance)) throw ConfigError("noise_variance must be > 0");
  if (static_cast<int>(min_rate_bps.size()) != n_users)
    throw ConfigError("min_rate_bps must have one entry per user");
  for (double r : min_rate_bps)
    if (!std::isfinite(r) || r < 0.0) throw ConfigError("min_rate_bps entries must be >= 0");
  if (static_cast<int>(fairness_weights.size()) != n_users)
    throw ConfigError("fairness_weights must have one entry per user");
  for (double w : fairness_weights)
    if (!finite_positive(w)) throw ConfigError("fairness_weights entries must be > 0");
}

SystemConfig SystemConfig::make(int n_tx, int n_users) {
  SystemConfig c;
  c.n_tx = n_tx;
  c.n_users = n_users;
  c.min_rate_bps.assign(static_cast<size_t>(n_users), 0.0);
  c.fairness_weights.assign(static_cast<size_t>(n_users), 1.0);
  c.validate();
  return c;
}

ReliabilityMatrix ReliabilityMatrix::from_matrix(Eigen::MatrixXd values) {
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double b = values(i, j);
      if (!std::isfinite(b) || b < 0.0 || b > 1.0)
        throw ConfigError("reliability value out of [0,1] at row " +
                          std::to_string(i) + ", column " + std::to_string(j));
    }
  return ReliabilityMatrix{std::move(values)};
}

ReliabilityMatrix ReliabilityMatrix::from_per_antenna(
    const Eigen::VectorXd& per_antenna, int n_users) {
  if (n_users < 1) throw ConfigError("n_users must be >= 1");
  return from_matrix(per_antenna.replicate(1, n_users));
}

ChannelMatrix generate_channel(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  auto rng = detail::make_rng(seed, detail::kChannelStream);
  ChannelMatrix h(config.n_tx, config.n_users);
  for (int j = 0; j < config.n_users; ++j)
    for (int i = 0; i < config.n_tx; ++i) h(i, j) = detail::complex_gaussian(rng);
  return h;
}

ReliabilityMatrix generate_reliability(const SystemConfig& config,
                                       std::uint64_t seed,
                                       ReliabilityScheme scheme,
                                       const std::string& path) {
  config.validate();
  if (scheme == ReliabilityScheme::from_file) return load_reliability_csv(path, config);
  auto rng = detail::make_rng(seed, detail::kReliabilityStream);
  Eigen::VectorXd per_antenna(config.n_tx);
  for (int i = 0; i < config.n_tx; ++i) per_antenna(i) = detail::uniform01(rng);
  return ReliabilityMatrix::from_per_antenna(per_antenna, config.n_users);
}

namespace {

std::vector<double> parse_csv_row(const std::string& line, bool* numeric) {
  std::vector<double> values;
  *numeric = true;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &consumed);
    } catch (const std::exception&) {
      *numeric = false;
      return values;
    }
    while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
      ++consumed;
    if (consumed != cell.size()) {
      *numeric = false;
      return values;
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

ReliabilityMatrix load_reliability_csv(const std::string& path,
                                       const SystemConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reliability file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    bool numeric = false;
    std::vector<double> row = parse_csv_row(line, &numeric);
    if (!numeric) {
      if (first) {  // header line
        first = false;
        continue;
      }
      throw ConfigError("malformed reliability file: " + path);
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != config.n_tx)
    throw ConfigError("reliability file must have n_tx=" + std::to_string(config.n_tx) +
                      " data rows, got " + std::to_string(rows.size()));
  const size_t n_cols = rows.front().size();
  if (n_cols != 1 && n_cols != static_cast<size_t>(config.n_users))
    throw ConfigError("reliability file must have 1 or n_users columns");
  for (const auto& row : rows)
    if (row.size() != n_cols) throw ConfigError("ragged reliability file: " + path);

  if (n_cols == 1) {
    Eigen::VectorXd per_antenna(config.n_tx);
    for (int i = 0; i < config.n_tx; ++i) per_antenna(i) = rows[i][0];
    return ReliabilityMatrix::from_per_antenna(per_antenna, config.n_users);
  }
  Eigen::MatrixXd beta(config.n_tx, config.n_users);
  for (int i = 0; i < config.n_tx; ++i)
    for (int j = 0; j < config.n_users; ++j) beta(i, j) = rows[i][j];
  return ReliabilityMatrix::from_matrix(std::move(beta));
}

namespace {

using nlohmann::json;

// Scalar rates/weights broadcast to every user; arrays must match n_users.
std::vector<double> per_user_values(const json& value, int n_users,
                                    const std::string& key) {
  std::vector<double> out;
  if (value.is_number()) {
    out.assign(static_cast<size_t>(n_users), value.get<double>());
  } else if (value.is_array()) {
    for (const auto& v : value) {
      if (!v.is_number()) throw ConfigError(key + " entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else {
    throw ConfigError(key + " must be a number or an array of numbers");
  }
  return out;
}

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + " must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key + " must be an integer");
  return j.get<int>();
}

}  // namespace

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  static const char* known[] = {"n_tx",           "n_users",        "bandwidth_hz",
                                "power_budget",   "noise_variance", "min_rate_bps",
                                "fairness_weights", "reliability"};
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key: " + key);
  }

  LoadedConfig out;
  SystemConfig& c = out.system;
  if (doc.contains("n_tx")) c.n_tx = require_int(doc["n_tx"], "n_tx");
  if (doc.contains("n_users")) c.n_users = require_int(doc["n_users"], "n_users");
  if (c.n_users < 1) throw ConfigError("n_users must be >= 1");
  if (doc.contains("bandwidth_hz"))
    c.bandwidth_hz = require_number(doc["bandwidth_hz"], "bandwidth_hz");
  if (doc.contains("power_budget"))
    c.power_budget = require_number(doc["power_budget"], "power_budget");
  if (doc.contains("noise_variance"))
    c.noise_variance = require_number(doc["noise_variance"], "noise_variance");
  c.min_rate_bps = doc.contains("min_rate_bps")
                       ? per_user_values(doc["min_rate_bps"], c.n_users, "min_rate_bps")
                       : std::vector<double>(static_cast<size_t>(c.n_users), 0.0);
  c.fairness_weights =
      doc.contains("fairness_weights")
          ? per_user_values(doc["fairness_weights"], c.n_users, "fairness_weights")
          : std::vector<double>(static_cast<size_t>(c.n_users), 1.0);

  if (doc.contains("reliability")) {
    const json& rel = doc["reliability"];
    if (!rel.is_object()) throw ConfigError("reliability must be an object");
    for (const auto& [key, _] : rel.items())
      if (key != "scheme" && key != "path")
        throw ConfigError("unknown reliability key: " + key);
    const std::string scheme = rel.value("scheme", "per_antenna_uniform");
    if (scheme == "per_antenna_uniform") {
      out.reliability.scheme = ReliabilityScheme::per_antenna_uniform;
    } else if (scheme == "from_file") {
      out.reliability.scheme = ReliabilityScheme::from_file;
      if (!rel.contains("path") || !rel["path"].is_string())
        throw ConfigError("reliability.scheme from_file requires reliability.path");
      out.reliability.path = rel["path"].get<std::string>();
    } else {
      throw ConfigError("unknown reliability scheme: " + scheme);
    }
  }

  c.validate();
  return out;
}

}  // namespace beamsculpt
