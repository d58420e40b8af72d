#pragma once

#include <cstddef>
#include <vector>

#include "healthgap/mask.hpp"

namespace healthgap {

/// One 8-connected component of mask 1-cells. Centroid and bounding box
/// are computed over member cell centers, in grid coordinates.
struct Cluster {
    int id = 0;
    std::size_t pixel_count = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    BoundingBox bbox;
};

/// Labels 8-connected components of 1-cells. Ids are assigned in
/// row-major discovery order starting at 1; member sums run in scan
/// order, so output is fully deterministic.
std::vector<Cluster> connected_components(const BoolMask& mask);

} // namespace healthgap
