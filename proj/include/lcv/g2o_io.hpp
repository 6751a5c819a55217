/* g2o_io.hpp -- text I/O for the VERTEX_SE2 / EDGE_SE2 g2o subset. */

#ifndef LCV_G2O_IO_HPP
#define LCV_G2O_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "lcv/pose_graph.hpp"

namespace lcv {

/* Lines:
 *   VERTEX_SE2 id x y theta
 *   EDGE_SE2 from to dx dy dtheta i11 i12 i13 i22 i23 i33
 * Values are written with 12 significant digits. Edges with
 * to == from + 1 are classified as odometry, the rest as loop edges. */
void write_g2o(std::ostream& out, const PoseGraph& graph);
void write_g2o_file(const std::string& path, const PoseGraph& graph);

void write_trajectory_g2o(std::ostream& out,
                          const std::vector<Pose2>& poses);

PoseGraph read_g2o(std::istream& in);
PoseGraph read_g2o_file(const std::string& path);

}  // namespace lcv

#endif  // LCV_G2O_IO_HPP
