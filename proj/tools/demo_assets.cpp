// Writes the demo meshes shipped under data/:
//   cylinder_base.obj / cylinder_pinched.obj  open cylinder and a waist-pinched copy
//   face_scale.obj                              7,667-vertex / 7,414-polygon grid
#include <cstdio>
#include <filesystem>

#include "wrinkle/error.hpp"
#include "wrinkle/primitives.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  try {
    std::filesystem::create_directories(dir);
    const auto cylinder = wrinkle::make_cylinder(32, 24, 1.0, 4.0);
    wrinkle::save_mesh(cylinder, dir / "cylinder_base.obj");
    wrinkle::save_mesh(wrinkle::pinch_cylinder(cylinder, 0.3, 2.0, 0.6), dir / "cylinder_pinched.obj");
    wrinkle::save_mesh(wrinkle::make_face_scale_grid(), dir / "face_scale.obj");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "demo-assets: %s\n", e.what());
    return 1;
  }
  return 0;
}
