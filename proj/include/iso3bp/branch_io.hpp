// Versioned line-oriented text format for branches (lossless for binary64)
// and CSV emission for trajectories.
#ifndef ISO3BP_BRANCH_IO_HPP
#define ISO3BP_BRANCH_IO_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "iso3bp/continuation.hpp"

namespace iso3bp {

std::string serialize_branch(const Branch& branch);
Branch parse_branch(std::istream& in);
Branch parse_branch_string(const std::string& text);

void write_branch_file(const Branch& branch, const std::string& path);
Branch read_branch_file(const std::string& path);

// CSV columns: t,F,R,Fdot,Rdot,Theta and, for 15-component rows, x6..x15.
struct StateSample {
    double t;
    std::vector<double> x; // 5 or 15 entries
};

void write_state_csv(std::ostream& out, const std::vector<StateSample>& samples);
std::vector<StateSample> read_state_csv(std::istream& in);

std::string format_g17(double v);

} // namespace iso3bp

#endif
