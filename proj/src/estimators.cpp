#include "navflow/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace navflow {

namespace {

constexpr double kQuadTol = 1e-8;

double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double simpson_adaptive(const std::function<double(double)>& f, double a, double m, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(m - a, fa, flm, fm);
    double right = simpson(b - m, fm, frm, fb);
    double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= 50) return left + right + err;
    return simpson_adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

void check_replicates(std::span<const ReplicateStats> stats) {
    if (stats.size() < 2) throw error("insufficient data: need at least 2 replicates");
    for (const auto& r : stats) {
        if (r.s != stats.front().s) throw error("estimator: mixed scales in replicate set");
    }
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(b - a, fa, fm, fb);
    return simpson_adaptive(f, a, m, b, fa, fm, fb, whole, abs_tol, 0);
}

Estimate lhs_ratio(std::span<const ReplicateStats> stats) {
    check_replicates(stats);
    double s = stats.front().s;
    std::size_t m = stats.size();
    double tbar = 0.0, kbar = 0.0;
    for (const auto& r : stats) {
        tbar += r.traffic_sum;
        kbar += static_cast<double>(r.n_crossings);
    }
    tbar /= m;
    kbar /= m;
    if (!(kbar > 0)) throw error("insufficient data: zero mean crossing count");
    double ratio = tbar / kbar;
    double stt = 0.0, skk = 0.0, stk = 0.0;
    for (const auto& r : stats) {
        double dt = r.traffic_sum - tbar;
        double dk = static_cast<double>(r.n_crossings) - kbar;
        stt += dt * dt;
        skk += dk * dk;
        stk += dt * dk;
    }
    stt /= (m - 1);
    skk /= (m - 1);
    stk /= (m - 1);
    double var_ratio = (stt - 2.0 * ratio * stk + ratio * ratio * skk) / (m * kbar * kbar);
    return {ratio / s, std::sqrt(std::max(0.0, var_ratio)) / s};
}

Estimate link_density_hat(std::span<const ReplicateStats> stats, double surface_measure) {
    check_replicates(stats);
    if (!(surface_measure > 0)) throw error("link_density: surface measure must be positive");
    std::size_t m = stats.size();
    double kbar = 0.0;
    for (const auto& r : stats) kbar += static_cast<double>(r.n_crossings);
    kbar /= m;
    double sk = 0.0;
    for (const auto& r : stats) {
        double dk = static_cast<double>(r.n_crossings) - kbar;
        sk += dk * dk;
    }
    sk = std::sqrt(sk / (m - 1) / m);
    return {kbar / surface_measure, sk / surface_measure};
}

namespace {

double field_or_zero(const IntensityField& f, const Domain& d, Point p) {
    return d.contains_closed(p) ? f(p) : 0.0;
}

}  // namespace

double rhs_directed(Point x, const IntensityField& lambda, const IntensityField& mu,
                    const Domain& domain) {
    if (!domain.contains_closed(x)) throw error("rhs_directed: location outside domain");
    Point dir{-1.0, 0.0, 0.0};
    double reach = 2.0 * domain.circumradius() + 1.0;
    auto clip = clip_segment_to_domain(domain, x, x + reach * dir);
    if (!clip) return 0.0;
    double t1 = dist(clip->a, clip->b);
    if (t1 == 0.0) return 0.0;
    auto f = [&](double t) {
        Point p = x + t * dir;
        return field_or_zero(lambda, domain, p) * field_or_zero(mu, domain, p);
    };
    return adaptive_simpson(f, 0.0, t1, kQuadTol);
}

double rhs_radial(Point x, const IntensityField& lambda, const IntensityField& mu,
                  const Domain& domain) {
    if (!domain.contains_closed(x)) throw error("rhs_radial: location outside domain");
    double nx = norm(x);
    if (nx == 0) throw error("rhs_radial: singular location at the origin");
    Point dir = (1.0 / nx) * x;
    int d = domain.dim();
    double reach = 2.0 * domain.circumradius() + 1.0;
    auto clip = clip_segment_to_domain(domain, x, x + reach * dir);
    if (!clip) return 0.0;
    double upper = nx + dist(clip->a, clip->b);
    if (upper <= nx) return 0.0;
    auto f = [&](double r) {
        Point p = r * dir;
        return field_or_zero(lambda, domain, p) * field_or_zero(mu, domain, p) *
               std::pow(r, d - 1);
    };
    return std::pow(nx, -(d - 1)) * adaptive_simpson(f, nx, upper, kQuadTol);
}

PowerFit fit_fluctuation_exponent(std::span<const double> s_values,
                                  std::span<const double> mean_max_dev) {
    if (s_values.size() != mean_max_dev.size())
        throw error("fluctuation fit: size mismatch");
    std::vector<double> sv(s_values.begin(), s_values.end());
    std::sort(sv.begin(), sv.end());
    if (std::unique(sv.begin(), sv.end()) - sv.begin() < 3)
        throw error("fluctuation fit: need at least 3 distinct s values");
    std::size_t n = s_values.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mean_max_dev[i] > 0)) throw error("fluctuation fit: nonpositive deviation");
        lx[i] = std::log(s_values[i]);
        ly[i] = std::log(mean_max_dev[i]);
    }
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    PowerFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = fit.intercept + fit.exponent * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
    }
    fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

double dead_end_fraction(const NavigationForest& forest, const PointPattern& pat, double eps) {
    if (!(eps >= 0)) throw error("dead_end_fraction: eps must be nonnegative");
    double s = pat.scale;
    Domain scaled = pat.domain.scaled(s);
    if (eps * s >= scaled.inradius()) return 0.0;
    Domain eroded = scaled.eroded(eps * s);
    long inside = 0, dead = 0;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        if (!eroded.contains(pat.points[i])) continue;
        ++inside;
        if (forest.successor[i] == kDeadEnd) ++dead;
    }
    return inside > 0 ? static_cast<double>(dead) / inside : 0.0;
}

SandwichReport sandwich_report(const NavigationForest& forest, const PointPattern& pat,
                               const IntensityField& mu, Point x, double g, double h,
                               double eps) {
    double s = pat.scale;
    std::vector<double> rates(pat.size());
    for (std::size_t i = 0; i < pat.size(); ++i) rates[i] = mu((1.0 / s) * pat.points[i]);
    std::vector<double> delta = accumulate_traffic(forest, pat, rates);

    SurfaceMode mode =
        forest.mode == ForestMode::Directed ? SurfaceMode::Directed : SurfaceMode::Radial;
    CrossingSurface surface(mode, x, s, g, pat.domain);
    CrossingSet xi = crossing_set(forest, pat, surface);

    SandwichReport rep;
    for (const auto& [idx, pt] : xi.members) rep.middle += delta[idx];

    RegionSpec lower_region, upper_region;
    if (mode == SurfaceMode::Directed) {
        lower_region = LeftCylinderMinus{x, s, g, h, eps, pat.domain};
        upper_region = LeftCylinderPlus{x, s, g, h, pat.domain};
    } else {
        lower_region = ConeMinus{x, s, g, h, pat.domain};
        upper_region = ConePlus{x, s, g, h, pat.domain};
    }
    for (std::size_t i = 0; i < pat.size(); ++i) {
        if (region_contains(lower_region, pat.points[i])) rep.lower += rates[i];
        if (region_contains(upper_region, pat.points[i])) rep.upper += rates[i];
    }
    rep.holds = rep.lower <= rep.middle && rep.middle <= rep.upper;
    return rep;
}

namespace {

// series / continued-fraction evaluation of the regularized incomplete gamma
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0) || x < 0) throw error("gamma_q: invalid arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double poisson_count_chi_square_p(std::span<const long> counts, double mean) {
    if (counts.size() < 10) throw error("chi-square: too few replicates");
    if (!(mean > 0)) throw error("chi-square: mean must be positive");
    double n = static_cast<double>(counts.size());
    long kmax = static_cast<long>(mean + 12.0 * std::sqrt(mean) + 20.0);
    auto pmf = [&](long k) {
        return std::exp(k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
    };
    // classes [k_lo, k_hi] merged until expected >= 5; final class absorbs the tail
    struct Bin {
        double expected = 0.0;
        long observed = 0;
    };
    std::vector<std::pair<long, long>> classes;
    double acc = 0.0;
    long lo = 0;
    double cum = 0.0;
    for (long k = 0; k <= kmax; ++k) {
        double p = pmf(k);
        acc += p * n;
        cum += p;
        if (acc >= 5.0) {
            classes.emplace_back(lo, k);
            lo = k + 1;
            acc = 0.0;
        }
    }
    // tail class: everything above the last boundary
    classes.emplace_back(lo, std::numeric_limits<long>::max());
    std::vector<Bin> bins(classes.size());
    for (std::size_t b = 0; b < classes.size(); ++b) {
        auto [a, z] = classes[b];
        if (z == std::numeric_limits<long>::max()) {
            double below = 0.0;
            for (long k = 0; k < a; ++k) below += pmf(k);
            bins[b].expected = std::max(0.0, 1.0 - below) * n;
        } else {
            for (long k = a; k <= z; ++k) bins[b].expected += pmf(k) * n;
        }
    }
    if (bins.size() >= 2 && bins.back().expected < 5.0) {
        bins[bins.size() - 2].expected += bins.back().expected;
        classes[classes.size() - 2].second = std::numeric_limits<long>::max();
        bins.pop_back();
        classes.pop_back();
    }
    for (long c : counts) {
        for (std::size_t b = 0; b < classes.size(); ++b) {
            if (c >= classes[b].first && c <= classes[b].second) {
                ++bins[b].observed;
                break;
            }
        }
    }
    double stat = 0.0;
    for (const auto& b : bins) {
        double diff = b.observed - b.expected;
        stat += diff * diff / b.expected;
    }
    double df = static_cast<double>(bins.size()) - 1.0;
    if (df < 1.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * stat);
}

}  // namespace navflow
