// Benchmark driver: runs experiment configs, sweeps seed ranges, and checks
// the built-in problem catalog with per-iteration invariant verification.
#include "visolve/bench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace visolve;
using namespace visolve::bench;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// "A..B" inclusive.
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos)
        throw std::runtime_error("--seeds expects a range A..B, got " + text);
    const std::uint64_t a = std::stoull(text.substr(0, pos));
    const std::uint64_t b = std::stoull(text.substr(pos + 2));
    if (b < a) throw std::runtime_error("--seeds range is empty: " + text);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
}

void apply_overrides(ExperimentConfig& cfg, const std::string& out_dir,
                     const std::string& mode, const std::string& seeds) {
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!seeds.empty()) cfg.problem.seeds = parse_seed_range(seeds);
    if (mode == "checked")
        cfg.mode = CheckMode::checked;
    else if (mode == "fast")
        cfg.mode = CheckMode::fast;
    else if (!mode.empty())
        throw ConfigError("mode", "expected \"checked\" or \"fast\"");
}

int execute(ExperimentConfig cfg) {
    const ExperimentResult result = run_experiment(cfg);
    std::cout << "problem: " << to_string(cfg.problem.family)
              << "  stop_rule: " << to_string(cfg.stop_rule) << "  tol: " << cfg.tol
              << "  mode: " << (cfg.mode == CheckMode::checked ? "checked" : "fast")
              << "\n";
    std::cout << render_table(result.rows, cfg.stop_rule);
    std::cout << "artifacts written to " << cfg.out_dir << "\n";
    return result.exit_code;
}

// Built-in configs for `check`: one per converging problem family, all
// methods where applicable, checked mode throughout.
const char* kCheckConfigs[] = {
    R"({
  "problem": {"family": "exponential", "seeds": [0]},
  "methods": [{"name": "alg1"}, {"name": "alg1_noinertia"}],
  "stop_rule": "norm_to_zero",
  "tol": 1e-6,
  "mode": "checked"
})",
    R"({
  "problem": {"family": "harker_pang", "m_dim": 10, "k_cons": 30, "seeds": [1, 2, 3]},
  "methods": [{"name": "alg1"}, {"name": "alg1_noinertia"}, {"name": "sem"}, {"name": "isem"}],
  "stop_rule": "norm_to_zero",
  "tol": 1e-3,
  "mode": "checked"
})",
    R"({
  "problem": {"family": "nash_cournot", "n_units": 10, "seeds": [1, 2, 3]},
  "methods": [{"name": "alg1"}],
  "stop_rule": "step_diff",
  "tol": 1e-2,
  "mode": "checked"
})",
};

int run_check(const std::string& out_dir, const std::string& mode) {
    int worst = exit_ok;
    int idx = 0;
    for (const char* text : kCheckConfigs) {
        ExperimentConfig cfg = parse_config(text);
        cfg.out_dir = (out_dir.empty() ? std::string("out") : out_dir) + "/check" +
                      std::to_string(idx);
        apply_overrides(cfg, "", mode, "");
        const int code = execute(cfg);
        std::cout << (code == exit_ok ? "[ok]" : "[FAILED]") << " built-in config "
                  << idx << " exit code " << code << "\n\n";
        worst = std::max(worst, code);
        ++idx;
    }
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational-inequality solver benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mode, seeds;

    CLI::App* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--mode", mode, "checked|fast override");

    CLI::App* sweep = app.add_subcommand("sweep", "run a config over a seed range");
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--seeds", seeds, "seed range A..B (inclusive)")->required();
    sweep->add_option("--out", out_dir, "output directory override");
    sweep->add_option("--mode", mode, "checked|fast override");

    CLI::App* check = app.add_subcommand(
        "check", "run the invariant suite on the built-in configs");
    check->add_option("--out", out_dir, "output directory");
    check->add_option("--mode", mode, "checked|fast override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(out_dir, mode);
        ExperimentConfig cfg = parse_config(read_file(config_path));
        apply_overrides(cfg, out_dir, mode, seeds);
        return execute(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}
