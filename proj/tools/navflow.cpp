#include <cstdio>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "navflow/experiment.hpp"
#include "navflow/svg.hpp"

namespace {

using namespace navflow;

void print_summary(const ExperimentResult& res) {
    for (const auto& r : res.summary) {
        std::printf("s=%-8g lhs=%.6g (se %.2g)  lambda_hat=%.6g (se %.2g)  rhs=%.6g  "
                    "rel_err=%.4g  event_fail=%.3g\n",
                    r.s, r.lhs, r.lhs_se, r.lambda_hat, r.lambda_hat_se, r.rhs, r.rel_err,
                    r.event_fail_freq);
    }
    if (res.fit) {
        std::printf("fluctuation fit: exponent=%.4g intercept=%.4g r2=%.4g\n", res.fit->exponent,
                    res.fit->intercept, res.fit->r2);
    }
}

int dispatch(const std::string& cmd, const ExperimentConfig& cfg, unsigned threads) {
    if (cmd == "traffic") {
        ExperimentResult res = run_experiment(cfg, threads);
        write_experiment_files(cfg, res);
        print_summary(res);
        return 0;
    }
    if (cmd == "subball") {
        if (cfg.s_list.size() < 3)
            throw config_error("subball: s_list needs at least 3 scales for the exponent fit");
        ExperimentResult res = run_experiment(cfg, threads);
        write_experiment_files(cfg, res);
        print_summary(res);
        return 0;
    }
    if (cmd == "linkdensity") {
        auto rows = run_linkdensity(cfg, threads);
        write_text_file(cfg.out_dir, "linkdensity.csv", linkdensity_csv(rows));
        for (const auto& r : rows) {
            std::printf("s=%-8g x=(%g,%g,%g)  lambda_hat=%.6g (se %.2g)  lambda(x)=%.6g\n", r.s,
                        r.x.x, r.x.y, r.x.z, r.lambda_hat, r.lambda_hat_se, r.lambda_at_x);
        }
        return 0;
    }
    if (cmd == "deadends") {
        auto rows = run_deadends(cfg, threads);
        write_text_file(cfg.out_dir, "deadends.csv", deadends_csv(rows));
        std::printf("deadends: wrote %zu rows\n", rows.size());
        return 0;
    }
    if (cmd == "render") {
        write_text_file(cfg.out_dir, "pattern.svg", render_experiment_svg(cfg));
        std::printf("render: wrote pattern.svg\n");
        return 0;
    }
    throw config_error("unknown subcommand: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navflow: navigation forests and traffic-flow density experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    for (const char* name : {"traffic", "subball", "linkdensity", "deadends", "render"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--threads", threads, "worker threads (replicate-level)");
        sub->add_option("--out", out_override, "output directory override");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        return dispatch(app.get_subcommands().front()->get_name(), cfg, threads);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
