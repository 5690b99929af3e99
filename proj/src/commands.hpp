#pragma once

#include "ptscatter/app.hpp"

#include <iosfwd>
#include <string>

namespace ptscatter::app {

int cmd_cell(const SweepConfig& cfg, std::ostream& out);
int cmd_sweep(const SweepConfig& cfg, bool fig3, std::ostream& out);
int cmd_converge(const SweepConfig& cfg, std::ostream& out);
int cmd_general(const SweepConfig& cfg, std::ostream& out);
int cmd_oracle_check(const SweepConfig& cfg, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_real(double x);

} // namespace ptscatter::app
