#pragma once

#include <string>

#include "gb/construction.hpp"

namespace gb {

struct RenderOptions {
    int stride = 1;              // draw lattice points with m, n divisible by stride
    double stroke_width = -1.0;  // cell outline width; < 0 picks 0.1 * tau * eps
    double point_radius = -1.0;  // < 0 picks 0.3 * tau * eps
    bool draw_outlines = true;
};

// Deformed-crystal picture: every lattice point of tau*eps*B is mapped by the
// affine deformation of the cell owning it and drawn as a circle; points in
// the cores are omitted. Byte-deterministic for a fixed field and options.
std::string render_svg(const StrainField& f, const RenderOptions& options);

}  // namespace gb
