#ifndef AIMC_COMMANDS_HPP
#define AIMC_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "aimc/config.hpp"

namespace aimc {

// Analysis commands behind the CLI. Each writes its report to `out` and
// returns the process exit code (0 ok, 1 validation fail); config and
// parameter errors are thrown (ParseError / std::invalid_argument).
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_minbits(const RunConfig& cfg, std::ostream& out);
int cmd_surface(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

// Fixed output formatting: volts and dimensionless values at 9 significant
// digits, dB at 4 decimals with an explicit "inf" sentinel.
std::string fmt_g9(double v);
std::string fmt_db(double v);

/// Matplotlib stub that renders the CSV written by sweep/surface.
std::string plot_stub(const std::string& command, const std::string& csv_path);

}  // namespace aimc

#endif
