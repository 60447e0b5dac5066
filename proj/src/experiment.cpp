#include "navflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "navflow/svg.hpp"

namespace navflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double scheme_window(double s, double exponent) { return std::pow(s, exponent); }

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    unsigned nw = std::min<std::size_t>(std::max(1u, threads), count);
    if (nw == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SimulatedReplicate simulate_replicate(const ExperimentConfig& cfg, double s, int replicate) {
    RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(replicate));
    double lambda_max = cfg.lambda.max_on(cfg.domain);
    MarkedPattern marked = sample_marked(cfg.domain, s, lambda_max, rng);
    SimulatedReplicate sim;
    sim.pattern = thin(marked, cfg.lambda);
    sim.forest = build_forest(sim.pattern, cfg.scheme);
    sim.rates.resize(sim.pattern.size());
    for (std::size_t i = 0; i < sim.pattern.size(); ++i)
        sim.rates[i] = cfg.mu((1.0 / s) * sim.pattern.points[i]);
    sim.delta = accumulate_traffic(sim.forest, sim.pattern, sim.rates);
    return sim;
}

ReplicateStats run_replicate(const ExperimentConfig& cfg, double s, int replicate) {
    SimulatedReplicate sim = simulate_replicate(cfg, s, replicate);
    double g = scheme_window(s, cfg.g_exponent);
    double h = scheme_window(s, cfg.h_exponent);

    CrossingSurface surface(cfg.mode, cfg.x, s, g, cfg.domain);
    CrossingSet xi = crossing_set(sim.forest, sim.pattern, surface);

    ReplicateStats st;
    st.s = s;
    st.replicate = replicate;
    st.n_crossings = static_cast<long>(xi.members.size());
    for (const auto& [idx, pt] : xi.members) st.traffic_sum += sim.delta[idx];
    st.surface_measure = surface_measure(surface);

    // the containment half of the event is exactly "no clipped deviation
    // exceeds h", so one deviation pass serves both statistics
    std::vector<double> devs = max_deviation_clipped(sim.forest, sim.pattern, cfg.eps);
    st.max_dev = devs.empty() ? 0.0 : *std::max_element(devs.begin(), devs.end());
    bool dead_ok = true;
    if (sim.forest.mode == ForestMode::Directed) {
        Domain scaled = sim.pattern.domain.scaled(s);
        if (cfg.eps * s < scaled.inradius()) {
            Domain eroded = scaled.eroded(cfg.eps * s);
            for (std::size_t i = 0; i < sim.forest.size() && dead_ok; ++i) {
                if (sim.forest.successor[i] == kDeadEnd && eroded.contains(sim.pattern.points[i]))
                    dead_ok = false;
            }
        }
    }
    st.event_pass = dead_ok && st.max_dev <= h;
    st.dead_end_frac = dead_end_fraction(sim.forest, sim.pattern, cfg.eps);
    return st;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    ExperimentResult res;
    res.rhs = cfg.mode == SurfaceMode::Directed
                  ? rhs_directed(cfg.x, cfg.lambda, cfg.mu, cfg.domain)
                  : rhs_radial(cfg.x, cfg.lambda, cfg.mu, cfg.domain);

    std::size_t m = static_cast<std::size_t>(cfg.replicates);
    for (double s : cfg.s_list) {
        std::vector<ReplicateStats> rows(m);
        parallel_for(m, threads,
                     [&](std::size_t i) { rows[i] = run_replicate(cfg, s, static_cast<int>(i)); });
        Estimate lhs = lhs_ratio(rows);
        Estimate lam = link_density_hat(rows, rows.front().surface_measure);
        SummaryRow sum;
        sum.s = s;
        sum.lhs = lhs.value;
        sum.lhs_se = lhs.se;
        sum.lambda_hat = lam.value;
        sum.lambda_hat_se = lam.se;
        sum.rhs = res.rhs;
        sum.rel_err = res.rhs != 0.0
                          ? std::abs(lhs.value * lam.value - res.rhs) / res.rhs
                          : std::numeric_limits<double>::quiet_NaN();
        long fails = 0;
        for (const auto& r : rows) fails += r.event_pass ? 0 : 1;
        sum.event_fail_freq = static_cast<double>(fails) / static_cast<double>(m);
        res.summary.push_back(sum);
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
    }

    if (cfg.s_list.size() >= 3) {
        std::vector<double> means;
        bool positive = true;
        for (std::size_t k = 0; k < cfg.s_list.size(); ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += res.rows[k * m + i].max_dev;
            acc /= static_cast<double>(m);
            means.push_back(acc);
            positive = positive && acc > 0;
        }
        if (positive) res.fit = fit_fluctuation_exponent(cfg.s_list, means);
    }
    return res;
}

std::vector<LinkDensityRow> run_linkdensity(const ExperimentConfig& cfg, unsigned threads) {
    std::vector<Point> locations = cfg.x_list.empty() ? std::vector<Point>{cfg.x} : cfg.x_list;
    std::vector<LinkDensityRow> out;
    std::size_t m = static_cast<std::size_t>(cfg.replicates);
    for (double s : cfg.s_list) {
        double g = scheme_window(s, cfg.g_exponent);
        std::vector<std::vector<long>> counts(locations.size(), std::vector<long>(m, 0));
        parallel_for(m, threads, [&](std::size_t i) {
            SimulatedReplicate sim = simulate_replicate(cfg, s, static_cast<int>(i));
            for (std::size_t k = 0; k < locations.size(); ++k) {
                CrossingSurface surface(cfg.mode, locations[k], s, g, cfg.domain);
                counts[k][i] =
                    static_cast<long>(crossing_set(sim.forest, sim.pattern, surface).members.size());
            }
        });
        for (std::size_t k = 0; k < locations.size(); ++k) {
            CrossingSurface surface(cfg.mode, locations[k], s, g, cfg.domain);
            std::vector<ReplicateStats> stats(m);
            for (std::size_t i = 0; i < m; ++i) {
                stats[i].s = s;
                stats[i].n_crossings = counts[k][i];
            }
            Estimate lam = link_density_hat(stats, surface_measure(surface));
            out.push_back({s, locations[k], lam.value, lam.se, cfg.lambda(locations[k])});
        }
    }
    return out;
}

std::vector<DeadEndRow> run_deadends(const ExperimentConfig& cfg, unsigned threads) {
    if (cfg.scheme.kind != SchemeKind::MinHopBoundedRadial)
        throw config_error("deadends: scheme.kind must be min_hop");
    if (cfg.rho_list.empty()) throw config_error("deadends: rho_list must not be empty");
    std::vector<DeadEndRow> out;
    std::size_t m = static_cast<std::size_t>(cfg.replicates);
    for (double s : cfg.s_list) {
        std::vector<std::vector<double>> fracs(cfg.rho_list.size(), std::vector<double>(m, 0.0));
        parallel_for(m, threads, [&](std::size_t i) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(i));
            MarkedPattern marked = sample_marked(cfg.domain, s, cfg.lambda.max_on(cfg.domain), rng);
            PointPattern pattern = thin(marked, cfg.lambda);
            for (std::size_t r = 0; r < cfg.rho_list.size(); ++r) {
                NavigationForest forest = min_hop_bounded_forest(pattern, cfg.rho_list[r]);
                fracs[r][i] = dead_end_fraction(forest, pattern, cfg.eps);
            }
        });
        for (std::size_t r = 0; r < cfg.rho_list.size(); ++r)
            for (std::size_t i = 0; i < m; ++i)
                out.push_back({cfg.rho_list[r], s, static_cast<int>(i), fracs[r][i]});
    }
    return out;
}

std::string render_experiment_svg(const ExperimentConfig& cfg) {
    double s = cfg.s_list.front();
    SimulatedReplicate sim = simulate_replicate(cfg, s, 0);
    double g = scheme_window(s, cfg.g_exponent);
    CrossingSurface surface(cfg.mode, cfg.x, s, g, cfg.domain);
    CrossingSet xi = crossing_set(sim.forest, sim.pattern, surface);
    std::vector<std::int32_t> crossing;
    for (const auto& [idx, pt] : xi.members) crossing.push_back(idx);
    std::vector<std::int32_t> highlight;
    if (!crossing.empty()) highlight = trajectory(crossing.front(), sim.forest);
    return render_svg(sim.pattern, sim.forest, &surface, crossing, highlight);
}

std::string replicates_csv(std::span<const ReplicateStats> rows) {
    std::string out = "s,replicate,n_crossings,traffic_sum,surface_measure,event_pass,max_dev,dead_end_frac\n";
    for (const auto& r : rows) {
        out += fmt(r.s);
        out += ',';
        out += std::to_string(r.replicate);
        out += ',';
        out += std::to_string(r.n_crossings);
        out += ',';
        out += fmt(r.traffic_sum);
        out += ',';
        out += fmt(r.surface_measure);
        out += ',';
        out += r.event_pass ? '1' : '0';
        out += ',';
        out += fmt(r.max_dev);
        out += ',';
        out += fmt(r.dead_end_frac);
        out += '\n';
    }
    return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
    std::string out = "s,lhs,lhs_se,lambda_hat,lambda_hat_se,rhs,rel_err,event_fail_freq\n";
    for (const auto& r : rows) {
        out += fmt(r.s);
        out += ',';
        out += fmt(r.lhs);
        out += ',';
        out += fmt(r.lhs_se);
        out += ',';
        out += fmt(r.lambda_hat);
        out += ',';
        out += fmt(r.lambda_hat_se);
        out += ',';
        out += fmt(r.rhs);
        out += ',';
        out += fmt(r.rel_err);
        out += ',';
        out += fmt(r.event_fail_freq);
        out += '\n';
    }
    return out;
}

std::string fit_csv(const PowerFit& fit) {
    return "exponent,intercept,r2\n" + fmt(fit.exponent) + "," + fmt(fit.intercept) + "," +
           fmt(fit.r2) + "\n";
}

std::string linkdensity_csv(std::span<const LinkDensityRow> rows) {
    std::string out = "s,x1,x2,x3,lambda_hat,lambda_hat_se,lambda_at_x\n";
    for (const auto& r : rows) {
        out += fmt(r.s);
        out += ',';
        out += fmt(r.x.x);
        out += ',';
        out += fmt(r.x.y);
        out += ',';
        out += fmt(r.x.z);
        out += ',';
        out += fmt(r.lambda_hat);
        out += ',';
        out += fmt(r.lambda_hat_se);
        out += ',';
        out += fmt(r.lambda_at_x);
        out += '\n';
    }
    return out;
}

std::string deadends_csv(std::span<const DeadEndRow> rows) {
    std::string out = "rho,s,replicate,dead_end_frac\n";
    for (const auto& r : rows) {
        out += fmt(r.rho);
        out += ',';
        out += fmt(r.s);
        out += ',';
        out += std::to_string(r.replicate);
        out += ',';
        out += fmt(r.dead_end_frac);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir);
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + p.string());
    out << text;
    if (!out) throw io_error("write failure: " + p.string());
}

void write_experiment_files(const ExperimentConfig& cfg, const ExperimentResult& result) {
    write_text_file(cfg.out_dir, "replicates.csv", replicates_csv(result.rows));
    write_text_file(cfg.out_dir, "summary.csv", summary_csv(result.summary));
    if (result.fit) write_text_file(cfg.out_dir, "fit.csv", fit_csv(*result.fit));
    if (cfg.render) write_text_file(cfg.out_dir, "pattern.svg", render_experiment_svg(cfg));
}

}  // namespace navflow
