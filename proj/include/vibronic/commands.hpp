#pragma once

// Command implementations behind the `vibronic` executable. Every command
// writes to a caller-supplied stream so tests can capture the exact bytes.

#include <ostream>
#include <string>

#include "vibronic/config.hpp"
#include "vibronic/verify.hpp"

namespace vibronic {

inline constexpr const char* kFormatHeader = "# vibronic-response v1";

/// Decimal text with 17 significant digits.
std::string format_number(double v);

/// One row per time tuple: t_1..t_M, Re/Im of R, of the FC part and of every
/// HT order 1..max. Tab separated, preceded by the format and column headers.
void cmd_respfn(const RunConfig& config, std::ostream& out);

/// Axis vectors, the complex amplitude matrix (Re, Im interleaved, row-major
/// over omega_1) and the peak list for a third-order pathway.
void cmd_spectrum(const RunConfig& config, std::ostream& out);

/// Runs the randomized oracle suite (plus the config's own system). Returns
/// the process exit status: 0 when every check is within tolerance.
int cmd_verify(const RunConfig* config, const VerifyOptions& options, std::ostream& out);

}  // namespace vibronic
