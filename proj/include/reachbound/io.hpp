#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "reachbound/beta_reach.hpp"
#include "reachbound/geometry.hpp"
#include "reachbound/mesh.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/rconv_bound.hpp"
#include "reachbound/reach_bound.hpp"

namespace reachbound {

/// Malformed input file.
class FormatError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Shortest decimal that round-trips a double; "inf" for +infinity.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_number(const std::string& tok) {
  if (tok == "inf" || tok == "+inf" || tok == "Infinity") return kInfinity;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw FormatError("not a number: '" + tok + "'");
  return v;
}

namespace detail {

// Data lines as token lists; '#' starts a comment, commas count as whitespace.
inline std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace detail

/// Reads a cloud: one point per line, dimension taken from the first line.
/// Exact duplicates are dropped.
inline PointCloud read_cloud(std::istream& in) {
  const auto rows = detail::read_rows(in);
  if (rows.empty()) throw FormatError("cloud file has no points");
  PointCloud cloud(rows.front().size());
  std::vector<double> p;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cloud.dim()) {
      throw FormatError("cloud row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " values, expected " +
                        std::to_string(cloud.dim()));
    }
    p.clear();
    for (const auto& t : rows[r]) p.push_back(parse_number(t));
    cloud.push_back(p);
  }
  cloud.deduplicate();
  return cloud;
}

inline PointCloud load_cloud(const std::string& path) {
  auto in = detail::open_in(path);
  return read_cloud(in);
}

inline void write_cloud(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? " " : "") << format_number(p[k]);
    out << '\n';
  }
}

inline void save_cloud(const std::string& path, const PointCloud& cloud) {
  auto out = detail::open_out(path);
  write_cloud(out, cloud);
}

/// XYZ export is the plain cloud format restricted to the listed points.
inline void save_xyz(const std::string& path, const PointCloud& cloud,
                     const std::vector<std::size_t>& ids) {
  auto out = detail::open_out(path);
  write_cloud(out, cloud.select(ids));
}

/// Reads a grid: cloud rows with a trailing 0/1 label. Duplicate locations
/// are merged; conflicting labels are an error. `epsilon` is stored as given.
inline LabeledGrid read_grid(std::istream& in, double epsilon = 0.0) {
  const auto rows = detail::read_rows(in);
  if (rows.empty()) throw FormatError("grid file has no points");
  if (rows.front().size() < 2) throw FormatError("grid rows need coordinates and a label");
  LabeledGrid grid;
  grid.phi = PointCloud(rows.front().size() - 1);
  grid.epsilon = epsilon;
  std::map<std::vector<double>, std::uint8_t> seen;
  std::vector<double> p;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != grid.phi.dim() + 1) {
      throw FormatError("grid row " + std::to_string(r + 1) + " has the wrong number of values");
    }
    p.clear();
    for (std::size_t k = 0; k + 1 < rows[r].size(); ++k) p.push_back(parse_number(rows[r][k]));
    const std::string& lab = rows[r].back();
    if (lab != "0" && lab != "1") throw FormatError("grid label must be 0 or 1, got '" + lab + "'");
    const std::uint8_t label = lab == "1" ? 1 : 0;
    auto [it, fresh] = seen.emplace(p, label);
    if (!fresh) {
      if (it->second != label) throw FormatError("grid point listed with conflicting labels");
      continue;
    }
    grid.phi.push_back(p);
    grid.inside.push_back(label);
  }
  return grid;
}

inline LabeledGrid load_grid(const std::string& path, double epsilon = 0.0) {
  auto in = detail::open_in(path);
  return read_grid(in, epsilon);
}

inline void write_grid(std::ostream& out, const LabeledGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.phi[i];
    for (double c : p) out << format_number(c) << ' ';
    out << int(grid.inside[i]) << '\n';
  }
}

inline void save_grid(const std::string& path, const LabeledGrid& grid) {
  auto out = detail::open_out(path);
  write_grid(out, grid);
}

/// Profile CSV: header `beta,value`, one row per breakpoint, then a row
/// `support_end,inf` marking where the profile becomes infinite. A finite
/// horizon is recorded in a leading comment.
inline void write_profile_csv(std::ostream& out, const BetaReachProfile& p) {
  if (std::isfinite(p.horizon())) out << "# horizon=" << format_number(p.horizon()) << '\n';
  out << "beta,value\n";
  for (const auto& bp : p.breakpoints()) {
    out << format_number(bp.beta) << ',' << format_number(bp.value) << '\n';
  }
  if (!p.empty()) out << format_number(p.support_end()) << ",inf\n";
}

inline void save_profile_csv(const std::string& path, const BetaReachProfile& p) {
  auto out = detail::open_out(path);
  write_profile_csv(out, p);
}

inline BetaReachProfile read_profile_csv(std::istream& in) {
  double horizon = kInfinity;
  std::vector<BetaReachProfile::Breakpoint> bps;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# horizon=", 0) == 0) {
      horizon = parse_number(line.substr(10));
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "beta,value") throw FormatError("profile CSV must start with 'beta,value'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("profile row without a comma: " + line);
    bps.push_back({parse_number(line.substr(0, comma)), parse_number(line.substr(comma + 1))});
  }
  if (!header) throw FormatError("profile CSV has no header");
  if (bps.empty()) return BetaReachProfile({}, 0.0, horizon);
  if (!std::isinf(bps.back().value)) throw FormatError("profile CSV must end with a support row");
  const double support_end = bps.back().beta;
  bps.pop_back();
  return BetaReachProfile(std::move(bps), support_end, horizon);
}

inline BetaReachProfile load_profile_csv(const std::string& path) {
  auto in = detail::open_in(path);
  return read_profile_csv(in);
}

/// ASCII OFF mesh; polygons are fan-triangulated.
inline TriangleMesh read_off(std::istream& in) {
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    for (std::string t; ss >> t;) toks.push_back(t);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= toks.size()) throw FormatError("OFF file ends early");
    return toks[pos++];
  };
  auto next_count = [&] {
    const double v = parse_number(next());
    if (v < 0 || v != std::floor(v)) throw FormatError("OFF: bad count");
    return static_cast<std::size_t>(v);
  };
  if (next() != "OFF") throw FormatError("missing OFF header");
  const std::size_t nv = next_count();
  const std::size_t nf = next_count();
  next_count();  // edges, unused
  std::vector<Vec3> verts(nv);
  for (auto& v : verts) {
    for (auto& c : v) c = parse_number(next());
  }
  std::vector<TriangleMesh::Triangle> tris;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t k = next_count();
    if (k < 3) throw FormatError("OFF: face with fewer than 3 vertices");
    std::vector<std::uint32_t> ids(k);
    for (auto& id : ids) id = static_cast<std::uint32_t>(next_count());
    for (std::size_t t = 1; t + 1 < k; ++t) tris.push_back({ids[0], ids[t], ids[t + 1]});
  }
  return TriangleMesh(std::move(verts), tris);
}

inline TriangleMesh load_off(const std::string& path) {
  auto in = detail::open_in(path);
  return read_off(in);
}

inline void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertices().size() << ' ' << mesh.size() << " 0\n";
  for (const auto& v : mesh.vertices()) {
    out << format_number(v[0]) << ' ' << format_number(v[1]) << ' ' << format_number(v[2]) << '\n';
  }
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

/// JSON number, or the string "inf".
inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

inline nlohmann::json to_json(const ReachBoundResult& r) {
  nlohmann::json j;
  j["bound"] = json_number(r.value);
  j["epsilon"] = r.epsilon;
  if (r.witness) {
    j["witness_i"] = r.witness->i;
    j["witness_j"] = r.witness->j;
    j["alpha"] = r.witness->alpha;
    j["x"] = r.witness->x;
  }
  j["pairs_examined"] = r.pairs_examined;
  j["pairs_pruned"] = r.pairs_pruned;
  if (r.admissible_empty) j["warning"] = "epsilon exceeds the resolution of the cloud";
  return j;
}

inline nlohmann::json to_json(const RconvBoundResult& r) {
  nlohmann::json j;
  j["bound"] = json_number(r.value);
  j["epsilon"] = r.epsilon;
  j["r_max"] = r.r_max;
  j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
  j["window_limited"] = r.window_limited;
  return j;
}

inline nlohmann::json to_json(const ProfileFit& f) {
  return {{"beta_lo", f.beta_lo},     {"beta_hi", f.beta_hi},
          {"intercept", f.intercept}, {"slope", f.slope},
          {"rms_residual", f.rms_residual}, {"samples", f.samples},
          {"weighting", f.weighting}};
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace reachbound
