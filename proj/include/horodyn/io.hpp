#pragma once

// Experiment configuration (JSON in), result records (JSON out) and trace
// grids (CSV out). Floating-point output carries 17 significant digits, the
// config digest is embedded in every record, and files are written through a
// temp-and-rename so partial artifacts never appear.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "horodyn/dynamics.hpp"
#include "horodyn/geometry.hpp"
#include "horodyn/horoball.hpp"
#include "horodyn/metrics.hpp"
#include "horodyn/verify.hpp"

namespace horodyn::io {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Vec parse_vec(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a number array");
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + ": expected a number array");
    v.push_back(e.get<double>());
  }
  return v;
}

inline Mat parse_mat(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a matrix");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw ConfigError(std::string(what) + ": expected a matrix");
  Mat m(j.size(), cols, 0.0);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError(std::string(what) + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

inline ConvexBody parse_body(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("body: missing type");
  const std::string type = j.at("type").get<std::string>();
  const double tol = j.value("boundary_tol", kDefaultBoundaryTol);
  try {
    if (type == "hpolytope") return ConvexBody::hpolytope(parse_mat(j.at("a"), "body.a"), parse_vec(j.at("b"), "body.b"), tol);
    if (type == "box") return ConvexBody::box(parse_vec(j.at("lo"), "body.lo"), parse_vec(j.at("hi"), "body.hi"), tol);
    if (type == "interval") return ConvexBody::interval(j.at("lo").get<double>(), j.at("hi").get<double>(), tol);
    if (type == "ellipsoid") return ConvexBody::ellipsoid(parse_vec(j.at("center"), "body.center"), parse_mat(j.at("shape"), "body.shape"), tol);
    if (type == "ball") return ConvexBody::ball(parse_vec(j.at("center"), "body.center"), j.at("radius").get<double>(), tol);
    if (type == "simplex") return ConvexBody::simplex(j.at("dim").get<std::size_t>(), tol);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("body: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("body: ") + e.what());
  }
  throw ConfigError("body: unknown type '" + type + "'");
}

inline MetricInstance parse_metric(const json& config) {
  const json j = config.value("metric", json{{"kind", "hilbert"}});
  const std::string kind = j.value("kind", "hilbert");
  const double kappa = j.value("kappa", 0.0);
  try {
    if (kind == "hilbert") {
      if (!config.contains("body")) throw ConfigError("metric: hilbert requires a body");
      return MetricInstance::hilbert(parse_body(config.at("body")), kappa);
    }
    if (kind == "hilbert_cone") return MetricInstance::hilbert_cone_orthant(j.at("dim").get<std::size_t>(), kappa);
    if (kind == "poincare") return MetricInstance::poincare(kappa);
    if (kind == "polydisc") return MetricInstance::polydisc(j.at("factors").get<std::size_t>(), kappa);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("metric: ") + e.what());
  }
  throw ConfigError("metric: unknown kind '" + kind + "'");
}

inline Map parse_map(const json& j, const std::optional<ConvexBody>& body) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("map: missing type");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "projective_linear") return Map::projective_linear(parse_mat(j.at("matrix"), "map.matrix"));
    if (type == "affine") {
      if (!body) throw ConfigError("map: affine requires a body");
      return Map::affine(parse_mat(j.at("linear"), "map.linear"), parse_vec(j.at("offset"), "map.offset"),
                         *body, j.value("claimed_nonexpansive", true));
    }
    if (type == "composition") {
      std::vector<Map> parts;
      for (const auto& p : j.at("parts")) parts.push_back(parse_map(p, body));
      return Map::compose(std::move(parts));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("map: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
  throw ConfigError("map: unknown type '" + type + "'");
}

inline Semigroup parse_semigroup(const json& config) {
  if (!config.contains("generator")) throw ConfigError("semigroup: missing generator");
  try {
    return Semigroup(parse_mat(config.at("generator"), "generator"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

// Seed policy: an explicit point list, or a count drawn from per-index
// streams of the master seed (thread count cannot change the draw).
inline std::vector<Vec> parse_seeds(const json& config, const ConvexBody& body, std::uint64_t master_seed) {
  const json j = config.value("seeds", json{{"count", 10}});
  std::vector<Vec> seeds;
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) seeds.push_back(parse_vec(p, "seeds.points"));
  } else {
    const int count = j.value("count", 10);
    if (count < 1) throw ConfigError("seeds: count must be positive");
    for (int i = 0; i < count; ++i) {
      Rng rng = derive_stream(master_seed, static_cast<std::uint64_t>(i));
      seeds.push_back(body.sample_interior(rng));
    }
  }
  for (const Vec& s : seeds) {
    if (body.classify(s) != PointClass::Interior) throw ConfigError("seeds: point outside the domain interior");
  }
  return seeds;
}

inline AttractorParams parse_attractor_params(const json& config) {
  const json p = config.value("params", json::object());
  AttractorParams out;
  out.omega.n_steps = p.value("n_steps", out.omega.n_steps);
  out.omega.tail_fraction = p.value("tail_fraction", out.omega.tail_fraction);
  out.omega.cluster_radius = p.value("cluster_radius", out.omega.cluster_radius);
  out.bounded.window = p.value("window", out.bounded.window);
  out.bounded.r_bound = p.value("r_bound", out.bounded.r_bound);
  out.bounded.r_esc = p.value("r_esc", out.bounded.r_esc);
  out.bounded.r_growth = p.value("r_growth", out.bounded.r_growth);
  return out;
}

inline ApproachPolicy parse_approach_policy(const json& config) {
  const json p = config.value("approach", json::object());
  ApproachPolicy out;
  out.lambda = p.value("lambda", out.lambda);
  out.steps = p.value("steps", out.steps);
  out.tail = p.value("tail", out.tail);
  return out;
}

inline std::string config_digest(const json& config, std::uint64_t seed) {
  return horodyn::verify::config_digest("experiment", config, seed);
}

// ---------------------------------------------------------------------------
// Output helpers.

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += columns_[i];
    }
    buffer_ += '\n';
  }

  void add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
  }

  const std::string& str() const { return buffer_; }

 private:
  std::vector<std::string> columns_;
  std::string buffer_;
};

inline json vec_to_json(const Vec& v) { return json(v); }

inline json clusters_to_json(const std::vector<Cluster>& clusters) {
  json out = json::array();
  for (const Cluster& c : clusters) {
    out.push_back(json{{"point", c.representative}, {"multiplicity", c.multiplicity}});
  }
  return out;
}

inline json orbit_result_json(const OrbitTrace& trace, Boundedness verdict, const json& config,
                              std::uint64_t seed) {
  return json{{"boundedness", to_string(verdict)},
              {"config_digest", config_digest(config, seed)},
              {"final_point", trace.points.back()},
              {"n_points", trace.points.size()},
              {"seed", seed},
              {"truncated", trace.truncated}};
}

inline std::string orbit_csv(const OrbitTrace& trace) {
  const std::size_t dim = trace.points.empty() ? 0 : trace.points.front().size();
  std::vector<std::string> cols{"step"};
  for (std::size_t j = 0; j < dim; ++j) cols.push_back("x" + std::to_string(j + 1));
  cols.push_back("d_to_start");
  cols.push_back("step_d");
  CsvWriter csv(std::move(cols));
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    std::vector<double> row{static_cast<double>(i)};
    row.insert(row.end(), trace.points[i].begin(), trace.points[i].end());
    row.push_back(trace.d_to_start[i]);
    // Step column holds the distance from the previous point.
    row.push_back(i == 0 ? 0.0 : trace.step_d[i - 1]);
    csv.add_row(row);
  }
  return csv.str();
}

// Interior grid of horofunction values: columns x1..xn, lo, hi, member.
inline std::string horoball_grid_csv(const MetricInstance& metric, const HoroballSpec& spec,
                                     int grid_per_axis, const ApproachPolicy& policy = {}) {
  const ConvexBody& body = *metric.body();
  const std::size_t dim = body.dimension();
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < dim; ++j) cols.push_back("x" + std::to_string(j + 1));
  cols.push_back("horofunction_lo");
  cols.push_back("horofunction_hi");
  cols.push_back("member");
  CsvWriter csv(std::move(cols));

  std::vector<int> index(dim, 0);
  const Vec& lo = body.box_lo();
  const Vec& hi = body.box_hi();
  for (;;) {
    Vec x(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const double t = (static_cast<double>(index[j]) + 0.5) / static_cast<double>(grid_per_axis);
      x[j] = lo[j] + t * (hi[j] - lo[j]);
    }
    if (body.classify(x) == PointClass::Interior) {
      const auto est = horofunction_estimate(metric, spec, x, policy);
      std::vector<double> row(x.begin(), x.end());
      row.push_back(est.lo);
      row.push_back(est.hi);
      row.push_back(horoball_member(est, spec) ? 1.0 : 0.0);
      csv.add_row(row);
    }
    std::size_t j = 0;
    while (j < dim && ++index[j] == grid_per_axis) index[j++] = 0;
    if (j == dim) break;
  }
  return csv.str();
}

}  // namespace horodyn::io
