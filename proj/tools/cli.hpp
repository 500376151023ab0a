#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace haardigits::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

// Runs the haar_digits command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 12 significant digits, as printed in every CSV and JSON emission.
std::string format_number(double x);
double round_number(double x);

}  // namespace haardigits::cli
