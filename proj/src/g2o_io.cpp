#include "lcv/g2o_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lcv {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_edge(std::ostream& out, const Edge& e) {
    const Eigen::Matrix3d& I = e.information;
    out << "EDGE_SE2 " << e.from << ' ' << e.to << ' '
        << fmt(e.measurement.x) << ' ' << fmt(e.measurement.y) << ' '
        << fmt(e.measurement.theta) << ' ' << fmt(I(0, 0)) << ' '
        << fmt(I(0, 1)) << ' ' << fmt(I(0, 2)) << ' ' << fmt(I(1, 1)) << ' '
        << fmt(I(1, 2)) << ' ' << fmt(I(2, 2)) << '\n';
}

}  // namespace

void write_trajectory_g2o(std::ostream& out,
                          const std::vector<Pose2>& poses) {
    for (std::size_t i = 0; i < poses.size(); ++i)
        out << "VERTEX_SE2 " << i << ' ' << fmt(poses[i].x) << ' '
            << fmt(poses[i].y) << ' ' << fmt(poses[i].theta) << '\n';
}

void write_g2o(std::ostream& out, const PoseGraph& graph) {
    write_trajectory_g2o(out, graph.poses);
    for (const Edge& e : graph.odometry_edges)
        write_edge(out, e);
    for (const Edge& e : graph.loop_edges)
        write_edge(out, e);
}

void write_g2o_file(const std::string& path, const PoseGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    write_g2o(out, graph);
}

PoseGraph read_g2o(std::istream& in) {
    std::map<int, Pose2> vertices;
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag.empty() || tag[0] == '#')
            continue;
        if (tag == "VERTEX_SE2") {
            int id;
            double x, y, th;
            if (!(ss >> id >> x >> y >> th))
                throw std::runtime_error("malformed VERTEX_SE2: " + line);
            vertices[id] = Pose2(x, y, th);
        } else if (tag == "EDGE_SE2") {
            Edge e;
            double dx, dy, dth, i11, i12, i13, i22, i23, i33;
            if (!(ss >> e.from >> e.to >> dx >> dy >> dth >> i11 >> i12 >>
                  i13 >> i22 >> i23 >> i33))
                throw std::runtime_error("malformed EDGE_SE2: " + line);
            e.measurement = Pose2(dx, dy, dth);
            e.information << i11, i12, i13, i12, i22, i23, i13, i23, i33;
            edges.push_back(e);
        }
        /* unknown tags are skipped */
    }
    PoseGraph g;
    g.poses.reserve(vertices.size());
    int expect = 0;
    for (const auto& [id, pose] : vertices) {
        if (id != expect++)
            throw std::runtime_error("vertex ids must be dense from 0");
        g.poses.push_back(pose);
    }
    for (const Edge& e : edges) {
        if (e.from < 0 || e.to < 0 ||
            e.from >= static_cast<int>(g.poses.size()) ||
            e.to >= static_cast<int>(g.poses.size()))
            throw std::runtime_error("edge references missing vertex");
        if (e.to == e.from + 1)
            g.odometry_edges.push_back(e);
        else
            g.loop_edges.push_back(e);
    }
    return g;
}

PoseGraph read_g2o_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    return read_g2o(in);
}

}  // namespace lcv
