#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framecast/specfile.hpp"

namespace framecast {

struct CommandOptions {
    double tol = 1e-10;
    bool json_output = false;
    std::uint64_t seed = 0;
    std::string command_echo;
};

/// Exit codes: 0 = certified / frame / true, 2 = checked-and-failed,
/// 1 = operational error (raised as exceptions, mapped by the front end).
struct CommandResult {
    int exit_code = 0;
    nlohmann::json report;
    std::string human;
};

CommandResult cmd_bounds(const SpecFile& spec, const CommandOptions& opts);

CommandResult cmd_l2g(const SpecFile& spec, const CommandOptions& opts);

struct DsOptions {
    std::size_t blocks = 9;
    GammaVariant variant = GammaVariant::L2;
    std::optional<WindowConvention> convention_override;
};

CommandResult cmd_ds(const SpecFile& spec, const CommandOptions& opts, const DsOptions& ds);

struct SweepOptions {
    double tau_from = 0.01;
    double tau_to = 0.5;
    double tau_step = 0.01;
    std::string out_csv;
    // kernel entries as monomials in tau: "1", "t", "t^2", "0.5*t^3", ...
    std::vector<std::string> kernel_monomials = {"1", "t", "t^2"};
    int kernel_offset = 0;
    std::size_t window_len = 3;
    std::vector<std::size_t> omega = {0};
    unsigned iterations = 2;
    WindowConvention convention = WindowConvention::Disjoint;
};

CommandResult cmd_sweep(const SweepOptions& sweep, const CommandOptions& opts);

struct FusionOptions {
    std::size_t band = 1;
    bool emit_q = false;
};

CommandResult cmd_fusion(const SpecFile& spec, const CommandOptions& opts,
                         const FusionOptions& fusion);

/// Monomial c * tau^p used for sweep kernels.
struct Monomial {
    double coeff = 0.0;
    unsigned power = 0;

    double eval(double tau) const;
};

Monomial parse_monomial(const std::string& text);

/// 17-significant-digit formatting (round-trip exact for doubles).
std::string format_g17(double x);

}  // namespace framecast
