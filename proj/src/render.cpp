#include "gb/render.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace gb {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int group_of(const RegionDescriptor& r) {
    switch (r.kind) {
        case RegionKind::SigmaMinusTheta: return 0;
        case RegionKind::SigmaTheta: return 3;
        default: return r.strip == 1 ? 1 : 2;
    }
}

}  // namespace

std::string render_svg(const StrainField& f, const RenderOptions& options) {
    const Params& p = f.params;
    const double te = p.tau_eps();
    const double radius = options.point_radius > 0.0 ? options.point_radius : 0.3 * te;
    const double stroke = options.stroke_width > 0.0 ? options.stroke_width : 0.1 * te;
    const int stride = std::max(1, options.stride);
    const CellLocator locator(f);

    // World y points up; SVG y points down, so y is negated everywhere.
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(-p.L) + " " + fmt(0.0) +
           " " + fmt(2.0 * p.L) + " " + fmt(2.0 * p.L) + "\">\n";

    if (options.draw_outlines) {
        svg += "<g id=\"cells\" fill=\"none\" stroke=\"#888888\" stroke-width=\"" + fmt(stroke) +
               "\">\n";
        for (const Cell& c : f.cells) {
            svg += "<polygon points=\"";
            bool first = true;
            for (const Vec2& v : c.polygon.vertices()) {
                if (!first) svg += " ";
                first = false;
                svg += fmt(v.x) + "," + fmt(-v.y);
            }
            svg += "\"/>\n";
        }
        svg += "</g>\n";
    }

    static const char* kGroupIds[4] = {"sigma-minus", "strip-1", "strip-2", "sigma-plus"};
    static const char* kGroupFill[4] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};
    std::string groups[4];

    const Lattice& lat = p.lattice;
    const double det = lat.b1.cross(lat.b2);
    for (long id = 0; id < static_cast<long>(f.cells.size()); ++id) {
        const Cell& c = f.cells[static_cast<std::size_t>(id)];
        if (c.region.kind == RegionKind::D0) continue;  // no deformation in the cores
        const Rect bb = c.polygon.bbox();
        // Integer coordinate box covering the cell under the generator matrix.
        long mlo = 0, mhi = 0, nlo = 0, nhi = 0;
        bool init = false;
        const Vec2 corners[4] = {bb.lo, {bb.hi.x, bb.lo.y}, bb.hi, {bb.lo.x, bb.hi.y}};
        for (const Vec2& q : corners) {
            const double m = (q.x * lat.b2.y - q.y * lat.b2.x) / det / te;
            const double n = (q.y * lat.b1.x - q.x * lat.b1.y) / det / te;
            const long ml = static_cast<long>(std::floor(m));
            const long nl = static_cast<long>(std::floor(n));
            if (!init) {
                mlo = mhi = ml;
                nlo = nhi = nl;
                init = true;
            }
            mlo = std::min(mlo, ml);
            mhi = std::max(mhi, ml + 1);
            nlo = std::min(nlo, nl);
            nhi = std::max(nhi, nl + 1);
        }
        std::string& out = groups[static_cast<std::size_t>(group_of(c.region))];
        for (long m = mlo; m <= mhi; ++m) {
            if (m % stride != 0) continue;
            for (long n = nlo; n <= nhi; ++n) {
                if (n % stride != 0) continue;
                const Vec2 x = lat.point(m, n) * te;
                if (!c.polygon.contains(x, p.tolerance())) continue;
                if (locator.locate(x) != id) continue;  // owned by an earlier cell
                const Vec2 y = c.affine ? (*c.affine)(x) : x;
                out += "<circle cx=\"" + fmt(y.x) + "\" cy=\"" + fmt(-y.y) + "\" r=\"" +
                       fmt(radius) + "\"/>\n";
            }
        }
    }

    for (int g = 0; g < 4; ++g) {
        svg += "<g id=\"";
        svg += kGroupIds[g];
        svg += "\" fill=\"";
        svg += kGroupFill[g];
        svg += "\">\n";
        svg += groups[g];
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace gb
