// chiraldyn_cli.cpp — command-line front end
//
// Verbs: isolated | run | figure <id> | sweep | oracle-compare | spectral dump.
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 oracle threshold
// exceeded, 5 oracle truncation invalid.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chiraldyn/config.hpp"
#include "chiraldyn/scenario.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_threshold = 4;
constexpr int exit_truncation = 5;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int report_config_errors(const std::vector<std::string>& errors) {
    for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
    return exit_config;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    double tol = 0.0; // 0: keep the config value
    unsigned threads = 1;
};

chiraldyn::ParsedConfig load(const CommonOpts& opts, std::string* raw_text = nullptr) {
    const std::string text = slurp(opts.config_path);
    if (raw_text) *raw_text = text;
    auto parsed = chiraldyn::parse_config(text);
    if (parsed.ok() && opts.tol > 0.0) parsed.config->rel_tol = opts.tol;
    return parsed;
}

int run_and_write(const chiraldyn::ScenarioConfig& cfg, const std::filesystem::path& out_path) {
    try {
        const auto res = chiraldyn::run_scenario(cfg);
        std::ostringstream buf;
        chiraldyn::write_scenario_csv(buf, cfg, res);
        chiraldyn::write_file_atomic(out_path, buf.str());
        std::cout << out_path.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chiraldyn — open two-level chiral molecule dynamics"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "scenario configuration file");
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    app.add_option("--tol", opts.tol, "quadrature relative tolerance override");
    app.add_option("--threads", opts.threads, "worker threads for sweeps/figures")
        ->capture_default_str();

    auto* cmd_isolated = app.add_subcommand("isolated", "closed-molecule time series");
    auto* cmd_run = app.add_subcommand("run", "scenario from the config file");
    auto* cmd_figure = app.add_subcommand("figure", "reproduce a published panel");
    std::string figure_id;
    cmd_figure->add_option("id", figure_id, "fig1a|fig1b|fig2a|fig2b|fig3a|fig3b|fig4a|fig4b")
        ->required();
    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep from the config file");
    auto* cmd_oracle = app.add_subcommand("oracle-compare",
                                          "perturbative vs discrete-bath evolution");
    std::size_t oracle_modes = 200;
    double oracle_wmax = 0.0, oracle_wmin = 0.0;
    cmd_oracle->add_option("--modes", oracle_modes, "number of bath modes")->capture_default_str();
    cmd_oracle->add_option("--omega-max", oracle_wmax, "mode grid ceiling (default 10 Lambda)");
    cmd_oracle->add_option("--omega-min", oracle_wmin, "mode grid floor (default Lambda/50)");
    auto* cmd_spectral = app.add_subcommand("spectral", "spectral density utilities");
    auto* cmd_dump = cmd_spectral->add_subcommand("dump", "tabulate J(omega) to a file");
    int dump_points = 200;
    double dump_wmax = 0.0;
    cmd_dump->add_option("--points", dump_points, "rows in the table")->capture_default_str();
    cmd_dump->add_option("--omega-max", dump_wmax, "table ceiling (default 10 Lambda)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(opts.out_dir);
        const std::filesystem::path out_dir(opts.out_dir);

        if (cmd_figure->parsed()) {
            try {
                const auto files = chiraldyn::reproduce_figure(figure_id, out_dir, opts.threads);
                for (const auto& f : files) std::cout << f.string() << "\n";
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return exit_config;
            }
            return exit_ok;
        }

        if (opts.config_path.empty()) {
            std::cerr << "config error: --config is required for this subcommand\n";
            return exit_config;
        }

        if (cmd_isolated->parsed() || cmd_run->parsed()) {
            auto parsed = load(opts);
            if (!parsed.ok()) return report_config_errors(parsed.errors);
            auto cfg = *parsed.config;
            if (cmd_isolated->parsed()) cfg.path = chiraldyn::EvalPath::isolated;
            if (cfg.two_level_warning)
                std::cerr << "warning: thermal energy reaches the two-level gap scale\n";
            const char* name = cmd_isolated->parsed() ? "isolated.csv" : "scenario.csv";
            return run_and_write(cfg, out_dir / name);
        }

        if (cmd_sweep->parsed()) {
            std::string text;
            auto parsed_sweep_probe = load(opts, &text); // config errors surface per point
            const auto sw = chiraldyn::parse_sweep(text);
            if (!sw.ok()) return report_config_errors(sw.errors);
            (void)parsed_sweep_probe;
            try {
                const auto outcome = chiraldyn::run_sweep_text(text, sw.sweep, opts.threads);
                const auto path = out_dir / "sweep.csv";
                chiraldyn::write_file_atomic(path, outcome.csv);
                std::cout << path.string() << "\n";
                for (const auto& row : outcome.rows)
                    if (!row.ok)
                        std::cerr << "sweep point " << row.value << " failed: " << row.error
                                  << "\n";
            } catch (const std::exception& e) {
                std::cerr << "numeric failure: " << e.what() << "\n";
                return exit_numeric;
            }
            return exit_ok;
        }

        if (cmd_oracle->parsed()) {
            auto parsed = load(opts);
            if (!parsed.ok()) return report_config_errors(parsed.errors);
            try {
                const auto cmp = chiraldyn::oracle_compare(*parsed.config, oracle_modes,
                                                           oracle_wmax, oracle_wmin);
                std::ostringstream buf;
                chiraldyn::write_oracle_report(buf, cmp);
                const auto path = out_dir / "oracle_compare.txt";
                chiraldyn::write_file_atomic(path, buf.str());
                std::cout << buf.str();
                if (!cmp.truncation_valid) return exit_truncation;
                if (!cmp.pass) return exit_threshold;
            } catch (const std::exception& e) {
                std::cerr << "numeric failure: " << e.what() << "\n";
                return exit_numeric;
            }
            return exit_ok;
        }

        if (cmd_dump->parsed()) {
            auto parsed = load(opts);
            if (!parsed.ok()) return report_config_errors(parsed.errors);
            const auto& bath = parsed.config->bath;
            const double wmax = dump_wmax > 0.0 ? dump_wmax : 10.0 * bath.cutoff();
            std::ostringstream buf;
            chiraldyn::write_tabulated_spectral_density(buf, bath, wmax, dump_points);
            const auto path = out_dir / "spectral.tsv";
            chiraldyn::write_file_atomic(path, buf.str());
            std::cout << path.string() << "\n";
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}
