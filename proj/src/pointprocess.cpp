#include "navflow/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace navflow {

IntensityField IntensityField::constant(double c) {
    if (!(c >= 0)) throw error("intensity field: constant must be nonnegative");
    IntensityField f;
    f.kind_ = Kind::Constant;
    f.value_ = c;
    return f;
}

IntensityField IntensityField::affine(double offset, Point gradient) {
    IntensityField f;
    f.kind_ = Kind::Affine;
    f.offset_ = offset;
    f.gradient_ = gradient;
    return f;
}

IntensityField IntensityField::radial_profile(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw error("intensity field: radial profile needs knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].second >= 0)) throw error("intensity field: negative profile value");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            throw error("intensity field: profile radii must increase");
    }
    IntensityField f;
    f.kind_ = Kind::Radial;
    f.knots_ = std::move(knots);
    return f;
}

IntensityField IntensityField::grid(const Domain& domain, int nx, int ny, int nz,
                                    std::vector<double> values) {
    int dim = domain.dim();
    if (dim == 2) nz = 1;
    if (nx < 2 || ny < 2 || (dim == 3 && nz < 2))
        throw error("intensity field: grid needs at least 2 samples per axis");
    if (static_cast<long>(values.size()) != static_cast<long>(nx) * ny * nz)
        throw error("intensity field: grid value count mismatch");
    for (double v : values)
        if (!(v >= 0)) throw error("intensity field: negative grid value");
    IntensityField f;
    f.kind_ = Kind::Grid;
    f.dim_ = dim;
    f.nx_ = nx;
    f.ny_ = ny;
    f.nz_ = dim == 3 ? nz : 1;
    Point h = domain.bbox_half_widths();
    f.grid_lo_ = {-h.x, -h.y, dim == 3 ? -h.z : 0.0};
    f.grid_step_ = {2.0 * h.x / (nx - 1), 2.0 * h.y / (ny - 1),
                    dim == 3 ? 2.0 * h.z / (nz - 1) : 1.0};
    f.values_ = std::move(values);
    return f;
}

IntensityField IntensityField::grid_from_csv(const Domain& domain, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open grid raster: " + path);
    std::string line;
    if (!std::getline(in, line)) throw error("grid raster: missing header");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream hdr(line);
    int nx = 0, ny = 0, nz = 1;
    hdr >> nx >> ny;
    if (domain.dim() == 3 && !(hdr >> nz)) throw error("grid raster: header needs nx,ny,nz");
    std::vector<double> values;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double v;
        while (row >> v) values.push_back(v);
    }
    return grid(domain, nx, ny, nz, std::move(values));
}

namespace {

double interp_radial(const std::vector<std::pair<double, double>>& knots, double r) {
    if (r <= knots.front().first) return knots.front().second;
    if (r >= knots.back().first) return knots.back().second;
    auto it = std::upper_bound(knots.begin(), knots.end(), r,
                               [](double v, const auto& k) { return v < k.first; });
    auto lo = *(it - 1);
    auto hi = *it;
    double t = (r - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

}  // namespace

double IntensityField::operator()(Point p) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Affine:
            return std::max(0.0, offset_ + dot(gradient_, p));
        case Kind::Radial:
            return interp_radial(knots_, norm(p));
        case Kind::Grid: {
            auto cell = [](double v, double lo, double step, int n, int& i, double& t) {
                double u = (v - lo) / step;
                u = std::clamp(u, 0.0, static_cast<double>(n - 1));
                i = std::min(static_cast<int>(u), n - 2);
                t = u - i;
            };
            int ix, iy, iz = 0;
            double tx, ty, tz = 0;
            cell(p.x, grid_lo_.x, grid_step_.x, nx_, ix, tx);
            cell(p.y, grid_lo_.y, grid_step_.y, ny_, iy, ty);
            if (dim_ == 3) cell(p.z, grid_lo_.z, grid_step_.z, nz_, iz, tz);
            auto at = [&](int i, int j, int k) {
                return values_[(static_cast<long>(k) * ny_ + j) * nx_ + i];
            };
            auto bilin = [&](int k) {
                double v00 = at(ix, iy, k), v10 = at(ix + 1, iy, k);
                double v01 = at(ix, iy + 1, k), v11 = at(ix + 1, iy + 1, k);
                return (1 - ty) * ((1 - tx) * v00 + tx * v10) +
                       ty * ((1 - tx) * v01 + tx * v11);
            };
            if (dim_ == 2) return bilin(0);
            return (1 - tz) * bilin(iz) + tz * bilin(iz + 1);
        }
    }
    return 0.0;
}

double IntensityField::max_on(const Domain& domain) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Affine: {
            if (domain.kind() == DomainKind::CenteredBox) {
                Point h = domain.half_widths();
                double m = offset_ + std::abs(gradient_.x) * h.x + std::abs(gradient_.y) * h.y;
                if (domain.dim() == 3) m += std::abs(gradient_.z) * h.z;
                return std::max(0.0, m);
            }
            return std::max(0.0, offset_ + norm(gradient_) * domain.radius());
        }
        case Kind::Radial: {
            double rmax = domain.circumradius();
            double m = interp_radial(knots_, rmax);
            for (const auto& k : knots_)
                if (k.first <= rmax) m = std::max(m, k.second);
            return m;
        }
        case Kind::Grid: {
            // multilinear interpolation attains its maximum at lattice nodes
            return *std::max_element(values_.begin(), values_.end());
        }
    }
    return 0.0;
}

double IntensityField::lipschitz() const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Affine:
            return norm(gradient_);
        case Kind::Radial: {
            double L = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i) {
                L = std::max(L, std::abs(knots_[i].second - knots_[i - 1].second) /
                                    (knots_[i].first - knots_[i - 1].first));
            }
            return L;
        }
        case Kind::Grid: {
            double L = 0.0;
            auto at = [&](int i, int j, int k) {
                return values_[(static_cast<long>(k) * ny_ + j) * nx_ + i];
            };
            for (int k = 0; k < nz_; ++k)
                for (int j = 0; j < ny_; ++j)
                    for (int i = 0; i < nx_; ++i) {
                        if (i + 1 < nx_)
                            L = std::max(L, std::abs(at(i + 1, j, k) - at(i, j, k)) / grid_step_.x);
                        if (j + 1 < ny_)
                            L = std::max(L, std::abs(at(i, j + 1, k) - at(i, j, k)) / grid_step_.y);
                        if (k + 1 < nz_)
                            L = std::max(L, std::abs(at(i, j, k + 1) - at(i, j, k)) / grid_step_.z);
                    }
            return L;
        }
    }
    return 0.0;
}

MarkedPattern sample_marked(const Domain& domain, double s, double lambda_max, RngStream& rng) {
    if (!(lambda_max > 0)) throw config_error("sample_marked: lambda_max must be positive");
    if (!(s >= 1)) throw config_error("sample_marked: scale must be at least 1");
    Domain scaled = domain.scaled(s);
    long n = rng.poisson(lambda_max * scaled.volume());
    MarkedPattern m;
    m.domain = domain;
    m.scale = s;
    m.lambda_max = lambda_max;
    m.points.reserve(n);
    Point h = scaled.bbox_half_widths();
    int dim = domain.dim();
    for (long i = 0; i < n; ++i) {
        Point p;
        do {
            p.x = rng.uniform(-h.x, h.x);
            p.y = rng.uniform(-h.y, h.y);
            p.z = dim == 3 ? rng.uniform(-h.z, h.z) : 0.0;
        } while (!scaled.contains(p));
        m.points.push_back(p);
    }
    m.marks.reserve(n);
    for (long i = 0; i < n; ++i) m.marks.push_back(rng.uniform(0.0, lambda_max));
    return m;
}

PointPattern thin(const MarkedPattern& marked, const IntensityField& field) {
    PointPattern out;
    out.domain = marked.domain;
    out.scale = marked.scale;
    double s = marked.scale;
    for (std::size_t i = 0; i < marked.points.size(); ++i) {
        double lam = field((1.0 / s) * marked.points[i]);
        if (lam > marked.lambda_max)
            throw error("coupling violation: field exceeds lambda_max at a sampled point");
        if (marked.marks[i] <= lam) out.points.push_back(marked.points[i]);
    }
    assert_simple(out);
    return out;
}

double eval_scaled(const IntensityField& field, Point y, double s, const Domain& domain) {
    Point u = (1.0 / s) * y;
    if (!domain.contains_closed(u)) throw error("eval_scaled: point outside scaled domain");
    return field(u);
}

void assert_simple(const PointPattern& pattern) {
    const auto& pts = pattern.points;
    if (pts.size() < 2) return;
    std::vector<std::uint32_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return lex_less(pts[a], pts[b]);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (pts[order[k - 1]] == pts[order[k]])
            throw error("point pattern is not simple: duplicate point");
    }
}

}  // namespace navflow
