// Command-line front end: expansion bits, exact statistics, parameter
// sweeps with theory/empirical CSV output, the sliding-trapezoid
// probability curve, and raw bit-stream export.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binexp/binexp.hpp"

namespace {

struct StatsArgs {
    std::string dist = "kind=uniform";
    int bits = 3;
    std::string csv_path;
};

struct SweepArgs {
    std::string family = "beta-symmetric";
    std::string grid;
    std::string dist_template;
    int bits = 3;
    std::uint64_t samples = 100000;
    std::uint64_t seed = binexp::kDefaultSeed;
    std::string out = "-";
    std::string theory_out;
    double equicorr_threshold = binexp::kEquicorrelationThreshold;
    std::string config_path;
};

struct Example1Args {
    std::string grid = "0:0.75:31";
    std::string out = "-";
};

struct SampleArgs {
    std::string dist = "kind=uniform";
    int bits = 3;
    std::uint64_t count = 10;
    std::uint64_t seed = binexp::kDefaultSeed;
    std::uint64_t stream = 0;
    std::string out = "-";
};

// Run `fn(stream)` against stdout when path is "-", else against the file.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path == "-" || path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw binexp::UsageError("cannot open output file '" + path + "'");
    fn(os);
}

void run_expand(double x, int n) {
    std::cout << binexp::expand(x, n).to_string() << "\n";
}

void run_stats(const StatsArgs& args) {
    const binexp::DistributionModel model = binexp::parse_model(args.dist);
    const binexp::BitStatistics stats = binexp::statistics(model, args.bits);

    std::printf("model: %s\n", model.describe().c_str());
    std::printf("bits:  %d (exact)\n\n", stats.n);
    std::printf("  i   Pr[B_i=1]\n");
    for (int i = 1; i <= stats.n; ++i) std::printf("%3d   %12.9f\n", i, stats.marginal(i));
    std::printf("\n  i   j   joint(1,1)     covariance     correlation\n");
    for (int i = 1; i <= stats.n; ++i)
        for (int j = i + 1; j <= stats.n; ++j) {
            if (stats.correlation_defined(i, j))
                std::printf("%3d %3d   %12.9f   %+12.9f   %+12.9f\n", i, j, stats.joint(i, j),
                            stats.covariance(i, j), stats.correlation(i, j));
            else
                std::printf("%3d %3d   %12.9f   %+12.9f      undefined\n", i, j,
                            stats.joint(i, j), stats.covariance(i, j));
        }

    if (!args.csv_path.empty()) {
        with_output(args.csv_path, [&](std::ostream& os) {
            os << "i,j,joint11,covariance,correlation\n";
            char buf[128];
            for (int i = 1; i <= stats.n; ++i)
                for (int j = i + 1; j <= stats.n; ++j) {
                    std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%.9g\n", i, j,
                                  stats.joint(i, j), stats.covariance(i, j),
                                  stats.correlation(i, j));
                    os << buf;
                }
        });
    }
}

// Flat key=value config support: each key names a long option of the
// subcommand, full-line # comments allowed.  Values apply only to options the
// user did not pass explicitly, so flags always win.  Applied by hand because
// the CLI library only consults config files attached to the top-level
// command, not to subcommands.
void apply_flat_config(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw binexp::UsageError("config: cannot open '" + path + "'");
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    const auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos || eq == 0)
            throw binexp::UsageError("config: " + where + ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!seen.insert(key).second)
            throw binexp::UsageError("config: " + where + ": duplicate key '" + key + "'");
        CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config" || key == "help")
            throw binexp::UsageError("config: " + where + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;  // set on the command line
        opt->add_result(value);
        opt->run_callback();
    }
}

// Maximal runs of consecutive grid points whose theoretical correlations
// stay within the threshold of each other.
void report_equicorrelation(const binexp::SweepResult& result, double threshold,
                            std::ostream& os) {
    os << "near-equicorrelation (spread < " << threshold << "):";
    bool any = false;
    std::size_t k = 0;
    while (k < result.points.size()) {
        if (binexp::correlation_spread(result.points[k]) < threshold) {
            std::size_t end = k;
            while (end + 1 < result.points.size() &&
                   binexp::correlation_spread(result.points[end + 1]) < threshold)
                ++end;
            os << (any ? ", " : " ") << "param in [" << result.points[k].param << ", "
               << result.points[end].param << "]";
            any = true;
            k = end + 1;
        } else {
            ++k;
        }
    }
    if (!any) os << " none";
    os << "\n";
}

void run_sweep_cmd(const SweepArgs& args) {
    binexp::SweepConfig config;
    config.family = binexp::sweep_family_from_name(args.family);
    config.custom_template = args.dist_template;
    if (!args.grid.empty()) config.grid = binexp::parse_grid(args.grid);
    config.bits = args.bits;
    config.samples = args.samples;
    config.seed = args.seed;

    const binexp::SweepResult result = binexp::run_sweep(config);
    with_output(args.out, [&](std::ostream& os) { binexp::write_sweep_csv(result, os); });
    if (!args.theory_out.empty())
        with_output(args.theory_out,
                    [&](std::ostream& os) { binexp::write_theory_csv(result, os); });

    // keep the summary off stdout when the CSV itself goes there
    std::ostream& info = (args.out == "-" || args.out.empty()) ? std::cerr : std::cout;
    report_equicorrelation(result, args.equicorr_threshold, info);
}

void run_example1_cmd(const Example1Args& args) {
    const std::vector<double> grid = binexp::parse_grid(args.grid);
    const auto points = binexp::run_example1(grid);
    with_output(args.out, [&](std::ostream& os) { binexp::write_example1_csv(points, os); });
}

void run_sample_cmd(const SampleArgs& args) {
    const binexp::DistributionModel model = binexp::parse_model(args.dist);
    const binexp::SampleRun run =
        binexp::draw_bits(model, args.bits, args.count, args.seed, args.stream);
    with_output(args.out, [&](std::ostream& os) { binexp::write_raw_bits(run, os); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlated Bernoulli bit streams via binary expansion of [0,1] draws"};
    app.require_subcommand(1);

    double expand_x = 0.0;
    int expand_n = 0;
    auto* expand_cmd =
        app.add_subcommand("expand", "print the first n binary-expansion bits of x");
    expand_cmd->add_option("x", expand_x, "value in [0, 1]")->required();
    expand_cmd->add_option("n", expand_n, "number of bits (1..52)")->required();
    expand_cmd->callback([&] { run_expand(expand_x, expand_n); });

    StatsArgs stats_args;
    auto* stats_cmd =
        app.add_subcommand("stats", "exact marginals, joints, and correlations of a model");
    stats_cmd->add_option("--dist", stats_args.dist,
                          "model spec, e.g. \"kind=beta alpha=2 beta=2\"");
    stats_cmd->add_option("--bits", stats_args.bits, "number of leading bits")
        ->check(CLI::Range(1, 52));
    stats_cmd->add_option("--csv", stats_args.csv_path, "also write the pair table as CSV");
    stats_cmd->callback([&] { run_stats(stats_args); });

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "theoretical vs sampled correlations over a parameter grid (CSV)");
    sweep_cmd
        ->add_option("--family", sweep_args.family,
                     "beta-symmetric | trapezoid-symmetric | trapezoid-C | custom")
        ->capture_default_str();
    sweep_cmd->add_option("--grid", sweep_args.grid,
                          "comma list or start:stop:count (default: family grid)");
    sweep_cmd->add_option("--dist", sweep_args.dist_template,
                          "model template with {param}, for --family custom");
    sweep_cmd->add_option("--bits", sweep_args.bits, "bits per draw")->capture_default_str();
    sweep_cmd->add_option("--samples", sweep_args.samples, "draws per grid point")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_args.seed, "base seed; point k uses stream k")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_args.out, "combined CSV path, - for stdout")
        ->capture_default_str();
    sweep_cmd->add_option("--theory-out", sweep_args.theory_out,
                          "optional seed-independent theory CSV path");
    sweep_cmd
        ->add_option("--equicorr-threshold", sweep_args.equicorr_threshold,
                     "spread threshold for the near-equicorrelation report")
        ->capture_default_str();
    sweep_cmd->add_option("--config", sweep_args.config_path,
                          "flat key=value config file (flags override it)");
    sweep_cmd->callback([&, sweep_cmd] {
        if (!sweep_args.config_path.empty())
            apply_flat_config(*sweep_cmd, sweep_args.config_path);
        run_sweep_cmd(sweep_args);
    });

    Example1Args example1_args;
    auto* example1_cmd = app.add_subcommand(
        "example1", "first- and second-bit probabilities of the sliding trapezoid");
    example1_cmd->add_option("--grid", example1_args.grid, "C grid spec")
        ->capture_default_str();
    example1_cmd->add_option("--out", example1_args.out, "CSV path, - for stdout")
        ->capture_default_str();
    example1_cmd->callback([&] { run_example1_cmd(example1_args); });

    SampleArgs sample_args;
    auto* sample_cmd =
        app.add_subcommand("sample", "draw bit vectors and print them as 0/1 lines");
    sample_cmd->add_option("--dist", sample_args.dist, "model spec")->capture_default_str();
    sample_cmd->add_option("--bits", sample_args.bits, "bits per draw")
        ->check(CLI::Range(1, 52))
        ->capture_default_str();
    sample_cmd->add_option("--count", sample_args.count, "number of draws")
        ->capture_default_str();
    sample_cmd->add_option("--seed", sample_args.seed, "seed")->capture_default_str();
    sample_cmd->add_option("--stream", sample_args.stream, "substream index")
        ->capture_default_str();
    sample_cmd->add_option("--out", sample_args.out, "output path, - for stdout")
        ->capture_default_str();
    sample_cmd->callback([&] { run_sample_cmd(sample_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    } catch (const binexp::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const binexp::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
