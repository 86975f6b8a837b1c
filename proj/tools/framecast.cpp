#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framecast/commands.hpp"

namespace {

using framecast::CommandOptions;
using framecast::CommandResult;

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

int emit(CommandResult res, const CommandOptions& opts, double wall_ms) {
    res.report["wall_time_ms"] = wall_ms;
    if (opts.json_output) {
        std::cout << res.report.dump(2) << "\n";
    } else {
        std::cout << res.human;
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"framecast: certified local-to-global frame bounds on finite truncations"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CommandOptions opts;
    opts.command_echo = join_args(argc, argv);
    app.add_option("--tol", opts.tol, "numerical tolerance")->capture_default_str();
    app.add_flag("--json", opts.json_output, "emit a JSON report");
    app.add_option("--seed", opts.seed, "seed echoed into reports")->capture_default_str();

    std::string spec_path;

    auto* bounds = app.add_subcommand("bounds", "optimal frame bounds of a vector system");
    bounds->add_option("spec", spec_path, "spec file (kind vector_system)")->required();

    auto* l2g = app.add_subcommand("l2g", "local-to-global certificate for a partitioned system");
    l2g->add_option("spec", spec_path, "spec file (kind local_system)")->required();

    framecast::DsOptions ds_opts;
    std::string gamma_variant = "l2";
    std::string convention;
    auto* ds = app.add_subcommand("ds", "dynamical-sampling frame certificate");
    ds->add_option("spec", spec_path, "spec file (kind ds_system)")->required();
    ds->add_option("--blocks", ds_opts.blocks, "truncation width in blocks (odd)")
        ->capture_default_str();
    ds->add_option("--gamma-variant", gamma_variant, "leakage variant: l2 or l1")
        ->check(CLI::IsMember({"l2", "l1"}))
        ->capture_default_str();
    ds->add_option("--convention", convention, "window convention override")
        ->check(CLI::IsMember({"disjoint", "paper_overlap"}));

    framecast::SweepOptions sweep_opts;
    std::string kernel_csv = "1,t,t^2";
    std::string sweep_convention = "disjoint";
    auto* sweep = app.add_subcommand("sweep", "tau sweep of the windowed iterate system");
    sweep->add_option("--tau-from", sweep_opts.tau_from, "first tau")->capture_default_str();
    sweep->add_option("--tau-to", sweep_opts.tau_to, "last tau")->capture_default_str();
    sweep->add_option("--tau-step", sweep_opts.tau_step, "tau increment")->capture_default_str();
    sweep->add_option("--out", sweep_opts.out_csv, "output CSV path")->required();
    sweep->add_option("--kernel", kernel_csv, "kernel entries as monomials in tau, comma separated")
        ->capture_default_str();
    sweep->add_option("--kernel-offset", sweep_opts.kernel_offset, "kernel support offset")
        ->capture_default_str();
    sweep->add_option("--window-len", sweep_opts.window_len, "window length N+1")
        ->capture_default_str();
    sweep->add_option("--omega", sweep_opts.omega, "sampling positions inside the window")
        ->capture_default_str();
    sweep->add_option("--iterations", sweep_opts.iterations, "highest power K")
        ->capture_default_str();
    sweep->add_option("--convention", sweep_convention, "window convention")
        ->check(CLI::IsMember({"disjoint", "paper_overlap"}))
        ->capture_default_str();

    framecast::FusionOptions fusion_opts;
    auto* fusion = app.add_subcommand("fusion", "fusion-frame checks for a projector family");
    fusion->add_option("spec", spec_path, "spec file (kind projector_family)")->required();
    fusion->add_option("--band", fusion_opts.band, "band width for the zero-product check")
        ->capture_default_str();
    fusion->add_flag("--emit-q", fusion_opts.emit_q, "construct and emit the disjointified family");

    CLI11_PARSE(app, argc, argv);

    const auto start = std::chrono::steady_clock::now();
    try {
        CommandResult res;
        if (bounds->parsed()) {
            res = framecast::cmd_bounds(framecast::load_spec(spec_path), opts);
        } else if (l2g->parsed()) {
            res = framecast::cmd_l2g(framecast::load_spec(spec_path), opts);
        } else if (ds->parsed()) {
            ds_opts.variant = gamma_variant == "l1" ? framecast::GammaVariant::L1
                                                    : framecast::GammaVariant::L2;
            if (!convention.empty()) {
                ds_opts.convention_override = convention == "disjoint"
                                                  ? framecast::WindowConvention::Disjoint
                                                  : framecast::WindowConvention::PaperOverlap;
            }
            res = framecast::cmd_ds(framecast::load_spec(spec_path), opts, ds_opts);
        } else if (sweep->parsed()) {
            std::stringstream ss(kernel_csv);
            sweep_opts.kernel_monomials.clear();
            for (std::string item; std::getline(ss, item, ',');) {
                sweep_opts.kernel_monomials.push_back(item);
            }
            sweep_opts.convention = sweep_convention == "paper_overlap"
                                        ? framecast::WindowConvention::PaperOverlap
                                        : framecast::WindowConvention::Disjoint;
            res = framecast::cmd_sweep(sweep_opts, opts);
        } else {
            res = framecast::cmd_fusion(framecast::load_spec(spec_path), opts, fusion_opts);
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        return emit(std::move(res), opts, wall_ms);
    } catch (const framecast::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
