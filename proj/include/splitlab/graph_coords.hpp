#ifndef SPLITLAB_GRAPH_COORDS_HPP
#define SPLITLAB_GRAPH_COORDS_HPP

#include <string>

#include "splitlab/chart.hpp"
#include "splitlab/plane.hpp"

namespace splitlab {

// A linear map from a base plane to a complementary plane whose graph is a
// plane of the base's dimension, expressed in the frame blocks of a
// reference chart (block 0 = base, block 1 = complement).
struct GraphCoords {
  std::string base_id;
  std::string complement_id;
  Mat p;  // complement-dim x base-dim

  // Operator (spectral) norm of p.
  double norm() const;
};

// Graph coordinates of a plane over a two-block reference chart.  Planes
// close to vertical (base component nearly singular) are rejected.
GraphCoords graph_coords_of(const Plane& target, const Chart& reference,
                            std::string base_id = "base",
                            std::string complement_id = "complement");

// The plane spanned by { b + P b } for the reference's base block.
Plane plane_from_graph(const Chart& reference, const Mat& p);

}  // namespace splitlab

#endif  // SPLITLAB_GRAPH_COORDS_HPP
