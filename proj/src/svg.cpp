#include "navflow/svg.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace navflow {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const PointPattern& pattern, const NavigationForest& forest,
                       const CrossingSurface* surface,
                       std::span<const std::int32_t> crossing_nodes,
                       std::span<const std::int32_t> trajectory_nodes) {
    if (pattern.domain.dim() != 2)
        throw error("unsupported render: only d=2 patterns can be drawn");

    Domain scaled = pattern.domain.scaled(pattern.scale);
    Point h = scaled.bbox_half_widths();
    double extent = 2.0 * std::max(h.x, h.y);
    double node_r = extent / 300.0;
    double stroke = extent / 500.0;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(-h.x) + " " + num(-h.y) +
           " " + num(2 * h.x) + " " + num(2 * h.y) + "\">\n";
    svg += "<style>\n";
    svg += ".node { fill: #20324c; stroke: none; }\n";
    svg += ".node.crossing { fill: #c4261d; }\n";
    svg += ".link { stroke: #7d8aa0; stroke-width: " + num(stroke) + "; }\n";
    svg += ".surface { stroke: #c4261d; stroke-width: " + num(2 * stroke) + "; fill: none; }\n";
    svg += ".trajectory { stroke: #1a6fc4; stroke-width: " + num(1.5 * stroke) +
           "; fill: none; }\n";
    svg += ".domain { stroke: #c2c9d4; stroke-width: " + num(stroke) + "; fill: none; }\n";
    svg += "</style>\n";

    if (pattern.domain.kind() == DomainKind::CenteredBox) {
        svg += "<rect class=\"domain\" x=\"" + num(-h.x) + "\" y=\"" + num(-h.y) + "\" width=\"" +
               num(2 * h.x) + "\" height=\"" + num(2 * h.y) + "\"/>\n";
    } else {
        double r = scaled.radius();
        svg += "<path class=\"domain\" d=\"M " + num(-r) + " 0 A " + num(r) + " " + num(r) +
               " 0 1 0 " + num(r) + " 0 A " + num(r) + " " + num(r) + " 0 1 0 " + num(-r) +
               " 0 Z\"/>\n";
    }

    const auto& pts = pattern.points;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        std::int32_t j = forest.successor[i];
        if (j == kDeadEnd) continue;
        Point b = j == kOriginSink ? Point{} : pts[j];
        svg += "<line class=\"link\" x1=\"" + num(pts[i].x) + "\" y1=\"" + num(pts[i].y) +
               "\" x2=\"" + num(b.x) + "\" y2=\"" + num(b.y) + "\"/>\n";
    }

    if (surface) {
        if (surface->mode() == SurfaceMode::Directed) {
            Point c = surface->center();
            double g = surface->window();
            svg += "<line class=\"surface\" x1=\"" + num(c.x) + "\" y1=\"" + num(c.y - g) +
                   "\" x2=\"" + num(c.x) + "\" y2=\"" + num(c.y + g) + "\"/>\n";
        } else {
            double R = surface->sphere_radius();
            double g = surface->window();
            Point c = surface->center();
            double mid = std::atan2(c.y, c.x);
            double alpha = std::isfinite(g) ? 2.0 * std::asin(std::min(1.0, g / (2.0 * R)))
                                            : 3.14159265358979323846;
            double a0 = mid - alpha, a1 = mid + alpha;
            Point p0{R * std::cos(a0), R * std::sin(a0)};
            Point p1{R * std::cos(a1), R * std::sin(a1)};
            svg += "<path class=\"surface\" d=\"M " + num(p0.x) + " " + num(p0.y) + " A " +
                   num(R) + " " + num(R) + " 0 " + (alpha > 1.5707963267948966 ? "1" : "0") +
                   " 1 " + num(p1.x) + " " + num(p1.y) + "\"/>\n";
        }
    }

    if (trajectory_nodes.size() >= 2) {
        svg += "<polyline class=\"trajectory\" points=\"";
        for (std::size_t k = 0; k < trajectory_nodes.size(); ++k) {
            Point p = pts[trajectory_nodes[k]];
            if (k) svg += ' ';
            svg += num(p.x) + "," + num(p.y);
        }
        svg += "\"/>\n";
    }

    std::unordered_set<std::int32_t> crossing(crossing_nodes.begin(), crossing_nodes.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool hot = crossing.count(static_cast<std::int32_t>(i)) > 0;
        svg += std::string("<circle class=\"node") + (hot ? " crossing" : "") + "\" cx=\"" +
               num(pts[i].x) + "\" cy=\"" + num(pts[i].y) + "\" r=\"" + num(node_r) + "\"/>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace navflow
