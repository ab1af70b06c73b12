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

#ifndef CHAINBANDIT_IO_HPP_
#define CHAINBANDIT_IO_HPP_

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainbandit/bandit.hpp"
#include "chainbandit/chaining.hpp"
#include "chainbandit/metric.hpp"

namespace chainbandit {

// printf("%.12g").
std::string format_real(double v);

// Point cloud text: "# dim=D" header, then one point per line with
// comma- or whitespace-separated coordinates.
PointCloud read_point_cloud(std::istream& in);
void write_point_cloud(std::ostream& out, const PointCloud& cloud);

// Distance matrix text: n on the first line, then n rows of n entries.
FiniteMetricSpace read_distance_matrix(std::istream& in);
void write_distance_matrix(std::ostream& out, const FiniteMetricSpace& space);

// File readers; IoError names the path when it cannot be opened.
bool is_point_cloud_file(const std::string& path);
PointCloud load_point_cloud(const std::string& path);
FiniteMetricSpace load_distance_matrix(const std::string& path);

// center_id,order
void write_cover_csv(std::ostream& out, const CoverResult& cover);

// '#' header lines with the schedules, then
// node_id,depth,location_id,parent_id,is_pruned,radius,value (root parent -1).
void write_tree(std::ostream& out, const ChainingTree& tree);
ChainingTree read_tree(std::istream& in);

// iter,depth,u_i,point_id,ucb,y,inst_regret,cum_regret,simple_regret
void write_regret_csv(std::ostream& out, const RegretRecord& record);
RegretRecord read_regret_csv(std::istream& in);

// iter,point_id,y
void write_observation_log(std::ostream& out, const RegretRecord& record);

// Opens `path` for writing or throws IoError naming it.
std::ofstream open_output(const std::string& path);

}  // namespace chainbandit

#endif  // CHAINBANDIT_IO_HPP_
