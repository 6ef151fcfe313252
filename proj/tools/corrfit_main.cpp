// corrfit: nearest low-rank correlation matrix solver.
//
// Subcommands:
//   solve      minimize the misfit to the targets under the rank bound
//   checkgrad  compare the analytic gradient against central differences
//   table      solve one fixture across several ranks, print IT/CPU/GN/ERR

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrfit/corrfit.hpp"

namespace {

using namespace corrfit;

constexpr const char* kBundleHelp =
    "Matrix files use the BUNDLE text format: each matrix is a block of\n"
    "rows, one row per line, entries separated by whitespace and/or commas;\n"
    "blocks are separated by blank lines; lines starting with '#' are\n"
    "comments. Target bundles hold one or more square matrices of equal\n"
    "dimension; angle files hold a single n x (k-1) block.";

int exit_code_for(Termination t) {
    switch (t) {
        case Termination::converged: return 0;
        case Termination::max_iter: return 2;
        case Termination::line_search_failed: return 3;
    }
    return 1;
}

ProblemInstance load_input(const std::string& input, const std::string& fixture, Index rank) {
    if (!fixture.empty())
        return load_fixture(fixture, rank);
    return validate_problem(read_bundle(input), rank);
}

void print_summary(Termination term, int iterations, double f, double grad_norm,
                   double rel_residual) {
    std::printf("%s %d %.10g %.10g %.10g\n", to_string(term), iterations, f, grad_norm,
                rel_residual);
}

struct SolveArgs {
    std::string input, fixture, init_path, out_path, trace_path;
    Index rank = 0;
    SolverConfig config;
    std::uint64_t seed = 1;
    bool seed_given = false;
    int multistart = 0;
};

int run_solve(const SolveArgs& args) {
    ProblemInstance instance = load_input(args.input, args.fixture, args.rank);
    SolverConfig config = args.config;
    config.seed = args.seed;

    if (!args.init_path.empty()) {
        config.init_angles = AngleMatrix(read_matrix(args.init_path));
    } else if (!args.seed_given && !args.fixture.empty()) {
        config.init_angles = fixture_initial_angles(args.fixture, args.rank);
    }

    SolveReport report;
    if (args.multistart > 0) {
        MultistartReport multi = multistart_solve(instance, config, args.multistart);
        for (const StartSummary& s : multi.starts)
            std::printf("start %d seed %llu: %s %d %.10g %.10g %.10g\n", s.index,
                        static_cast<unsigned long long>(s.seed), to_string(s.termination),
                        s.iterations, s.f, s.grad_norm, s.rel_residual);
        std::printf("best start %d\n", multi.best_index);
        report = std::move(multi.best);
    } else {
        report = solve(instance, config);
    }

    const TraceRecord& last = report.trace.back();
    print_summary(report.termination, report.iterations, last.f, last.grad_norm,
                  last.rel_residual);

    if (!args.out_path.empty())
        write_matrix(args.out_path, report.final_corr.entries());
    if (!args.trace_path.empty())
        write_trace_csv(args.trace_path, report.trace);
    return exit_code_for(report.termination);
}

struct CheckgradArgs {
    std::string input, fixture;
    Index rank = 0;
    int samples = 20;
    double h = 1e-6;
    std::uint64_t seed = 1;
    bool perturb = false;
};

int run_checkgrad(const CheckgradArgs& args) {
    ProblemInstance instance = load_input(args.input, args.fixture, args.rank);
    double worst = 0.0;
    for (int s = 0; s < args.samples; ++s) {
        AngleMatrix alpha =
            AngleMatrix::Random(instance.dim(), instance.rank_bound(),
                                args.seed + static_cast<std::uint64_t>(s));
        Matrix analytic = eval_gradient(instance, alpha);
        if (analytic.size() == 0) // rank bound 1: nothing to check
            continue;
        if (args.perturb)
            analytic(0, 0) += 1e-3 * (1.0 + std::abs(analytic(0, 0)));
        const Matrix fd = finite_difference_gradient(instance, alpha, args.h);
        const double abs_err = (analytic - fd).cwiseAbs().maxCoeff();
        if (abs_err <= 1e-10)
            continue;
        const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-10);
        worst = std::max(worst, abs_err / scale);
    }
    std::printf("checkgrad: %d samples, max relative error %.4g\n", args.samples, worst);
    return worst < 1e-6 ? 0 : 4;
}

struct TableArgs {
    std::string fixture, ranks_spec;
    SolverConfig config;
    std::uint64_t seed = 1;
};

std::vector<Index> parse_ranks(const std::string& spec) {
    std::vector<Index> ranks;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        if (!tok.empty()) ranks.push_back(static_cast<Index>(std::stol(tok)));
        pos = comma + 1;
    }
    return ranks;
}

int run_table(const TableArgs& args) {
    const std::vector<Index> ranks = parse_ranks(args.ranks_spec);
    if (ranks.empty()) {
        std::fprintf(stderr, "error: empty ranks list\n");
        return 1;
    }

    struct Row {
        Index rank;
        int it;
        double cpu, gn, err;
    };
    std::vector<Row> rows;
    for (Index k : ranks) {
        ProblemInstance instance = load_fixture(args.fixture, k);
        SolverConfig config = args.config;
        config.seed = args.seed;
        config.init_angles = fixture_initial_angles(args.fixture, k);
        SolveReport report = solve(instance, config);
        const TraceRecord& last = report.trace.back();
        rows.push_back(Row{k, report.iterations, report.wall_time, last.grad_norm,
                           relative_residual(instance, report.final_corr)});
    }

    std::printf("%-8s", "rank k");
    for (const Row& r : rows) std::printf(" %12lld", static_cast<long long>(r.rank));
    std::printf("\n%-8s", "IT");
    for (const Row& r : rows) std::printf(" %12d", r.it);
    std::printf("\n%-8s", "CPU(s)");
    for (const Row& r : rows) std::printf(" %12.4f", r.cpu);
    std::printf("\n%-8s", "GN");
    for (const Row& r : rows) std::printf(" %12.4e", r.gn);
    std::printf("\n%-8s", "ERR");
    for (const Row& r : rows) std::printf(" %12.4f", r.err);
    std::printf("\n");
    return 0;
}

void add_config_flags(CLI::App* cmd, SolverConfig& config) {
    cmd->add_option("--tol", config.tol, "Gradient-norm stopping threshold")
        ->capture_default_str();
    cmd->add_option("--max-iter", config.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--rho", config.rho, "Backtracking ratio in (0,1)")->capture_default_str();
    cmd->add_option("--delta", config.delta, "Sufficient-decrease constant in (0,0.5)")
        ->capture_default_str();
    cmd->add_option("--sigma", config.sigma, "Curvature constant in (delta,0.5)")
        ->capture_default_str();
    cmd->add_option("--max-backtrack", config.max_backtrack, "Cap on backtracking exponent")
        ->capture_default_str();
    cmd->add_option("--restart-period", config.restart_period,
                    "Restart to steepest descent every N iterations (0 = never)")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest low-rank correlation matrix solver"};
    app.footer(kBundleHelp);
    app.require_subcommand(1);
    // '--h' is the checkgrad step option, so keep help on '--help' only.
    app.set_help_flag("--help", "Print usage");

    SolveArgs solve_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one problem instance");
    auto* solve_input = solve_cmd->add_option("--input", solve_args.input,
                                              "Target bundle file (BUNDLE format)");
    auto* solve_fixture =
        solve_cmd->add_option("--fixture", solve_args.fixture, "Bundled example problem")
            ->check(CLI::IsMember(fixture_names()));
    solve_input->excludes(solve_fixture);
    solve_cmd->add_option("--rank", solve_args.rank, "Rank bound k")->required();
    add_config_flags(solve_cmd, solve_args.config);
    auto* init_opt = solve_cmd->add_option("--init", solve_args.init_path,
                                           "Starting angles file (single block, n x (k-1))");
    auto* seed_opt =
        solve_cmd->add_option("--seed", solve_args.seed,
                              "Seed for the random start (default: fixture start if bundled)");
    auto* multi_opt = solve_cmd->add_option("--multistart", solve_args.multistart,
                                            "Run N seeded starts, keep the best");
    init_opt->excludes(seed_opt)->excludes(multi_opt);
    solve_cmd->add_option("--out", solve_args.out_path, "Write the solution matrix here");
    solve_cmd->add_option("--trace", solve_args.trace_path, "Write the iteration trace CSV here");

    CheckgradArgs check_args;
    CLI::App* check_cmd =
        app.add_subcommand("checkgrad", "Compare analytic and finite-difference gradients");
    check_cmd->set_help_flag("--help", "Print usage");
    auto* check_input = check_cmd->add_option("--input", check_args.input, "Target bundle file");
    auto* check_fixture =
        check_cmd->add_option("--fixture", check_args.fixture, "Bundled example problem")
            ->check(CLI::IsMember(fixture_names()));
    check_input->excludes(check_fixture);
    check_cmd->add_option("--rank", check_args.rank, "Rank bound k")->required();
    check_cmd->add_option("--samples", check_args.samples, "Number of random angle matrices")
        ->capture_default_str();
    check_cmd->add_option("--h", check_args.h, "Central-difference step")->capture_default_str();
    check_cmd->add_option("--seed", check_args.seed, "Seed for the random draws")
        ->capture_default_str();
    check_cmd->add_flag("--perturb", check_args.perturb,
                        "Corrupt the analytic gradient (negative control)");

    TableArgs table_args;
    CLI::App* table_cmd =
        app.add_subcommand("table", "Solve a fixture across ranks and print IT/CPU/GN/ERR");
    table_cmd->add_option("--fixture", table_args.fixture, "Bundled example problem")
        ->check(CLI::IsMember(fixture_names()))
        ->required();
    table_cmd->add_option("--ranks", table_args.ranks_spec, "Comma-separated rank bounds")
        ->required();
    add_config_flags(table_cmd, table_args.config);
    table_cmd->add_option("--seed", table_args.seed,
                          "Seed for ranks without a bundled start")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            solve_args.seed_given = seed_opt->count() > 0;
            if (solve_args.input.empty() && solve_args.fixture.empty()) {
                std::fprintf(stderr, "error: need --input or --fixture\n");
                return 1;
            }
            return run_solve(solve_args);
        }
        if (check_cmd->parsed()) {
            if (check_args.input.empty() && check_args.fixture.empty()) {
                std::fprintf(stderr, "error: need --input or --fixture\n");
                return 1;
            }
            return run_checkgrad(check_args);
        }
        return run_table(table_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
