#pragma once

#include <string>
#include <vector>

#include "navflow/geometry.hpp"
#include "navflow/rng.hpp"

namespace navflow {

// Nonnegative bounded intensity profile on the unscaled domain D. The scaled
// process on sD uses lambda^(s)(y) = field(y/s).
class IntensityField {
  public:
    static IntensityField constant(double c);
    // max(0, offset + <gradient, x>)
    static IntensityField affine(double offset, Point gradient);
    // piecewise-linear profile of (|x|, value) knots, constant beyond the ends
    static IntensityField radial_profile(std::vector<std::pair<double, double>> knots);
    // regular lattice over the bounding box of D, multilinear interpolation;
    // values in row-major order (x fastest, then y, then z)
    static IntensityField grid(const Domain& domain, int nx, int ny, int nz,
                               std::vector<double> values);
    // CSV raster: header line "nx,ny" or "nx,ny,nz", then rows of samples
    static IntensityField grid_from_csv(const Domain& domain, const std::string& path);

    double operator()(Point p) const;
    double max_on(const Domain& domain) const;  // upper bound >= sup_D, exact for box domains
    double lipschitz() const;

  private:
    IntensityField() = default;
    enum class Kind { Constant, Affine, Radial, Grid } kind_ = Kind::Constant;
    double value_ = 0.0;
    double offset_ = 0.0;
    Point gradient_;
    std::vector<std::pair<double, double>> knots_;
    int nx_ = 0, ny_ = 0, nz_ = 1;
    int dim_ = 2;
    Point grid_lo_, grid_step_;
    std::vector<double> values_;
};

// Homogeneous Poisson pattern on sD with iid uniform marks in [0, lambda_max];
// the carrier of the thinning coupling.
struct MarkedPattern {
    std::vector<Point> points;
    std::vector<double> marks;
    Domain domain = Domain::box(2, 0.5, 0.5);
    double scale = 1.0;
    double lambda_max = 0.0;
};

struct PointPattern {
    std::vector<Point> points;
    Domain domain = Domain::box(2, 0.5, 0.5);
    double scale = 1.0;

    std::size_t size() const { return points.size(); }
};

MarkedPattern sample_marked(const Domain& domain, double s, double lambda_max, RngStream& rng);

// Keeps the points whose mark is at most lambda(point/s). Throws when the
// field exceeds the coupling bound at a sampled point.
PointPattern thin(const MarkedPattern& marked, const IntensityField& field);

double eval_scaled(const IntensityField& field, Point y, double s, const Domain& domain);

// No two identical points; probability-zero under continuous sampling but
// asserted as a hard invariant.
void assert_simple(const PointPattern& pattern);

}  // namespace navflow
