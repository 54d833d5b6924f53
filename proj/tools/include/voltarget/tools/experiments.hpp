#pragma once

#include <string>
#include <string_view>

#include "voltarget/tools/config.hpp"
#include "voltarget/tools/csv.hpp"

namespace voltarget::tools {

enum class Command { kMultipliers, kDensity, kVolConvergence, kPriceConvergence, kVega, kLlnClt };

[[nodiscard]] Command parse_command(std::string_view name);
[[nodiscard]] std::string command_name(Command command);

/// lambda, U, U_lo, U_hi, V, V_lo, V_hi, U_err, V_err
[[nodiscard]] CsvTable cmd_multipliers(const ExperimentConfig& cfg);
/// lambda, N, x, kde, histogram, limit_density. One block per (lambda, N).
[[nodiscard]] CsvTable cmd_density(const ExperimentConfig& cfg);
/// lambda, N, paths, sample_std, std_stderr, target_std
[[nodiscard]] CsvTable cmd_vol_convergence(const ExperimentConfig& cfg);
/// lambda, N, paths, mc_price, mc_stderr, limit_price
[[nodiscard]] CsvTable cmd_price_convergence(const ExperimentConfig& cfg);
/// lambda, N, paths, mc_vega, mc_stderr, converted_vega
[[nodiscard]] CsvTable cmd_vega(const ExperimentConfig& cfg);
/// test, lambda, N, paths, statistic, estimate, stderr, target
[[nodiscard]] CsvTable cmd_lln_clt(const ExperimentConfig& cfg);

[[nodiscard]] CsvTable run_command(Command command, const ExperimentConfig& cfg);

}  // namespace voltarget::tools
