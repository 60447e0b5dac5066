#pragma once

#include <functional>
#include <span>

#include "navflow/flow.hpp"

namespace navflow {

// One (s, replicate) record of an experiment.
struct ReplicateStats {
    double s = 0.0;
    int replicate = 0;
    long n_crossings = 0;
    double traffic_sum = 0.0;
    double surface_measure = 0.0;
    bool event_pass = true;
    double max_dev = 0.0;
    double dead_end_frac = 0.0;
};

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

// Plug-in estimate of s^{-1} E[sum_Xi Delta]/E[#Xi] over the replicates of a
// single s, with a delta-method standard error.
Estimate lhs_ratio(std::span<const ReplicateStats> stats);

// mean crossing count divided by the surface measure.
Estimate link_density_hat(std::span<const ReplicateStats> stats, double surface_measure);

// Quadrature right-hand sides; the link-density factor is never included in
// either (callers close the formulas with link_density_hat from the same run).
double rhs_directed(Point x, const IntensityField& lambda, const IntensityField& mu,
                    const Domain& domain);
double rhs_radial(Point x, const IntensityField& lambda, const IntensityField& mu,
                  const Domain& domain);

struct PowerFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// OLS of log(dev) on log(s).
PowerFit fit_fluctuation_exponent(std::span<const double> s_values,
                                  std::span<const double> mean_max_dev);

// Fraction of nodes inside the eps-eroded scaled domain that are dead ends.
double dead_end_fraction(const NavigationForest& forest, const PointPattern& pattern, double eps);

struct SandwichReport {
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
    bool holds = true;
};

// Rate sums over the inner/outer sandwich regions against the traffic sum over
// the crossing set: cylinders left of sx in directed mode, cones beyond s|x|
// in radial mode. Callers restrict to event-passing replicates.
SandwichReport sandwich_report(const NavigationForest& forest, const PointPattern& pattern,
                               const IntensityField& mu, Point x, double g, double h, double eps);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Chi-square goodness-of-fit p-value of observed counts against Poisson(mean),
// binning so that every class has expected mass at least five.
double poisson_count_chi_square_p(std::span<const long> counts, double mean);

}  // namespace navflow
