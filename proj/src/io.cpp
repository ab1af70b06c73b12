// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainbandit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "chainbandit/errors.hpp"

namespace chainbandit {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::string s = line;
  for (char& c : s) {
    if (c == ',' || c == '\t') c = ' ';
  }
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& tok, int line) {
  if (tok == "nan" || tok == "NaN") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

long long parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
}

std::vector<double> parse_reals(const std::string& text, int line) {
  std::vector<double> out;
  for (const auto& tok : split_csv(text)) out.push_back(parse_real(tok, line));
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

// ---------------------------------------------------------------------------
// Spaces

PointCloud read_point_cloud(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::size_t dim = 0;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto pos = t.find("dim=");
      if (pos != std::string::npos) {
        const long long d = parse_int(trim(t.substr(pos + 4)), lineno);
        if (d <= 0) throw ParseError("dim must be positive", lineno);
        dim = static_cast<std::size_t>(d);
      }
      continue;
    }
    if (dim == 0) throw ParseError("point cloud needs a '# dim=D' header before the first point", lineno);
    const auto fields = split_fields(t);
    if (fields.size() != dim) {
      throw ParseError("expected " + std::to_string(dim) + " coordinates, got " + std::to_string(fields.size()),
                       lineno);
    }
    for (const auto& f : fields) {
      const double v = parse_real(f, lineno);
      if (!std::isfinite(v)) throw ParseError("non-finite coordinate", lineno);
      flat.push_back(v);
    }
  }
  if (dim == 0 || flat.empty()) throw ParseError("point cloud is empty", lineno);
  return PointCloud(dim, std::move(flat));
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  out << "# dim=" << cloud.dim() << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_real(p[k]);
    out << '\n';
  }
}

FiniteMetricSpace read_distance_matrix(std::istream& in) {
  std::string line;
  int lineno = 0;
  long long n = -1;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_fields(t);
    if (n < 0) {
      if (fields.size() != 1) throw ParseError("first line must hold the point count", lineno);
      n = parse_int(fields[0], lineno);
      if (n <= 0) throw ParseError("point count must be positive", lineno);
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(n)) {
      throw ParseError("expected " + std::to_string(n) + " entries, got " + std::to_string(fields.size()), lineno);
    }
    if (flat.size() >= static_cast<std::size_t>(n * n)) throw ParseError("too many rows", lineno);
    for (const auto& f : fields) flat.push_back(parse_real(f, lineno));
  }
  if (n < 0) throw ParseError("distance matrix is empty", lineno);
  if (flat.size() != static_cast<std::size_t>(n * n)) throw ParseError("too few rows", lineno);
  return FiniteMetricSpace::from_matrix(static_cast<std::size_t>(n), std::move(flat));
}

void write_distance_matrix(std::ostream& out, const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  out << n << '\n';
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = 0; j < n; ++j) out << (j ? "," : "") << format_real(space(i, j));
    out << '\n';
  }
}

bool is_point_cloud_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    return t[0] == '#' && t.find("dim=") != std::string::npos;
  }
  return false;
}

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return read_point_cloud(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

FiniteMetricSpace load_distance_matrix(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return read_distance_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// Covers and trees

void write_cover_csv(std::ostream& out, const CoverResult& cover) {
  out << "center_id,order\n";
  for (std::size_t k = 0; k < cover.centers.size(); ++k) out << cover.centers[k] << ',' << k << '\n';
}

void write_tree(std::ostream& out, const ChainingTree& tree) {
  out << "# space_size=" << tree.space_size() << '\n';
  out << "# schedule=" << schedule_name(tree.schedule()) << '\n';
  out << "# epsilon=" << join_reals(tree.epsilon_schedule()) << '\n';
  out << "# capacity=" << join_reals(tree.capacity_schedule()) << '\n';
  out << "# u=" << format_real(tree.pruning_u()) << '\n';
  out << "# restart_count=" << tree.restart_count() << '\n';
  out << "node_id,depth,location_id,parent_id,is_pruned,radius,value\n";
  for (const auto& n : tree.nodes()) {
    out << n.id << ',' << n.depth << ',' << n.location << ','
        << (n.parent == kNoNode ? std::string("-1") : std::to_string(n.parent)) << ',' << (n.pruned ? 1 : 0) << ','
        << format_real(n.radius) << ',' << format_real(n.value) << '\n';
  }
}

ChainingTree read_tree(std::istream& in) {
  std::string line;
  int lineno = 0;
  long long space_size = -1;
  CapacitySchedule schedule = CapacitySchedule::kGeometric;
  std::vector<double> eps, cap;
  double u = 0.0;
  int restarts = 0;
  bool header_seen = false;
  std::vector<TreeNode> nodes;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(t.substr(1, eq - 1));
      const std::string val = trim(t.substr(eq + 1));
      if (key == "space_size") space_size = parse_int(val, lineno);
      else if (key == "schedule") {
        try {
          schedule = parse_schedule(val);
        } catch (const ArgumentError& e) {
          throw ParseError(e.what(), lineno);
        }
      } else if (key == "epsilon") eps = parse_reals(val, lineno);
      else if (key == "capacity") cap = parse_reals(val, lineno);
      else if (key == "u") u = parse_real(val, lineno);
      else if (key == "restart_count") restarts = static_cast<int>(parse_int(val, lineno));
      continue;
    }
    if (!header_seen) {
      if (t != "node_id,depth,location_id,parent_id,is_pruned,radius,value") {
        throw ParseError("unexpected tree header '" + t + "'", lineno);
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv(t);
    if (f.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(f.size()), lineno);
    TreeNode n;
    n.id = static_cast<NodeId>(parse_int(f[0], lineno));
    n.depth = static_cast<int>(parse_int(f[1], lineno));
    n.location = static_cast<PointId>(parse_int(f[2], lineno));
    const long long parent = parse_int(f[3], lineno);
    n.parent = parent < 0 ? kNoNode : static_cast<NodeId>(parent);
    n.pruned = parse_int(f[4], lineno) != 0;
    n.radius = parse_real(f[5], lineno);
    n.value = parse_real(f[6], lineno);
    nodes.push_back(n);
  }
  if (space_size <= 0) throw ParseError("tree file lacks '# space_size='", 0);
  try {
    return ChainingTree::from_nodes(static_cast<std::size_t>(space_size), std::move(nodes), std::move(eps),
                                    std::move(cap), schedule, restarts, u);
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// Regret records

void write_regret_csv(std::ostream& out, const RegretRecord& record) {
  out << "iter,depth,u_i,point_id,ucb,y,inst_regret,cum_regret,simple_regret\n";
  for (const auto& r : record.rows) {
    out << r.iter << ',' << r.depth << ',' << format_real(r.u_i) << ',' << r.point << ',' << format_real(r.ucb)
        << ',' << format_real(r.y) << ',' << format_real(r.inst_regret) << ',' << format_real(r.cum_regret) << ','
        << format_real(r.simple_regret) << '\n';
  }
}

RegretRecord read_regret_csv(std::istream& in) {
  RegretRecord rec;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!header) {
      if (t != "iter,depth,u_i,point_id,ucb,y,inst_regret,cum_regret,simple_regret") {
        throw ParseError("unexpected regret header '" + t + "'", lineno);
      }
      header = true;
      continue;
    }
    const auto f = split_csv(t);
    if (f.size() != 9) throw ParseError("expected 9 fields, got " + std::to_string(f.size()), lineno);
    RegretRow r;
    r.iter = static_cast<std::size_t>(parse_int(f[0], lineno));
    r.depth = static_cast<int>(parse_int(f[1], lineno));
    r.u_i = parse_real(f[2], lineno);
    r.point = static_cast<PointId>(parse_int(f[3], lineno));
    r.ucb = parse_real(f[4], lineno);
    r.y = parse_real(f[5], lineno);
    r.inst_regret = parse_real(f[6], lineno);
    r.cum_regret = parse_real(f[7], lineno);
    r.simple_regret = parse_real(f[8], lineno);
    if (std::isnan(r.cum_regret)) rec.has_truth = false;
    rec.rows.push_back(r);
  }
  return rec;
}

void write_observation_log(std::ostream& out, const RegretRecord& record) {
  out << "iter,point_id,y\n";
  for (const auto& r : record.rows) out << r.iter << ',' << r.point << ',' << format_real(r.y) << '\n';
}

}  // namespace chainbandit
