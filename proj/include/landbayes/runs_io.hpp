#ifndef LANDBAYES_RUNS_IO_HPP_
#define LANDBAYES_RUNS_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "landbayes/convergence.hpp"

namespace landbayes {

// Runs CSV: header "box_id,group,cycle,ppv,npv", one run per line, group in
// {A,B,C}. Malformed lines raise ParseError with the line number.
std::vector<RunRecord> read_runs(std::istream& in);
std::vector<RunRecord> read_runs(const std::filesystem::path& path);

void write_runs(std::span<const RunRecord> runs, std::ostream& out);

}  // namespace landbayes

#endif  // LANDBAYES_RUNS_IO_HPP_
