#pragma once

#include "wrinkle/mesh.hpp"

namespace wrinkle {

// Unit-square grid of cols x rows quads in the z = 0 plane with UV = (x, y).
// The first `split_quads` quads (row-major) are split into two triangles.
Mesh make_grid(int cols, int rows, int split_quads = 0);

// Open cylinder around the z axis with `segments` quads per ring and `rings`
// quad rows, z in [0, height]. UVs wrap once around (u) and along z (v).
Mesh make_cylinder(int segments, int rings, double radius = 1.0, double height = 4.0);

// Scales each vertex's distance from the z axis by
// 1 - amount * exp(-((z - z_mid) / width)^2), pinching a waist at z_mid.
Mesh pinch_cylinder(const Mesh& cylinder, double amount, double z_mid, double width);

// Grid with 7,667 vertices and 7,414 polygons, the vertex/polygon count of
// a production face topology.
Mesh make_face_scale_grid();

}  // namespace wrinkle
