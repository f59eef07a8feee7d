#include "landbayes/runs_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "landbayes/format.hpp"
#include "landbayes/raster.hpp"

namespace landbayes {
namespace {

int parse_int(std::string_view token, std::size_t line, const char* field) {
  token = trim(token);
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("bad ") + field + " '" +
                               std::string(token) + "'");
  }
  return value;
}

double parse_probability(std::string_view token, std::size_t line,
                         const char* field) {
  const auto value = parse_real(token);
  if (!value || !(*value >= 0.0 && *value <= 1.0)) {
    throw ParseError(line, std::string("bad ") + field + " '" +
                               std::string(trim(token)) + "'");
  }
  return *value;
}

}  // namespace

std::vector<RunRecord> read_runs(std::istream& in) {
  std::vector<RunRecord> runs;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 5 && trim(fields[0]) == "box_id") continue;
    }
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 fields (box_id,group,cycle,ppv,npv)");
    }
    RunRecord run;
    run.box_id = parse_int(fields[0], line_no, "box_id");
    try {
      run.group = parse_pool(trim(fields[1]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    run.cycle = parse_int(fields[2], line_no, "cycle");
    run.ppv = parse_probability(fields[3], line_no, "ppv");
    run.npv = parse_probability(fields[4], line_no, "npv");
    runs.push_back(run);
  }
  return runs;
}

std::vector<RunRecord> read_runs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open runs file " + path.string());
  return read_runs(in);
}

void write_runs(std::span<const RunRecord> runs, std::ostream& out) {
  out << "box_id,group,cycle,ppv,npv\n";
  for (const RunRecord& run : runs) {
    out << run.box_id << ',' << pool_letter(run.group) << ',' << run.cycle
        << ',' << format_real(run.ppv) << ',' << format_real(run.npv) << '\n';
  }
}

}  // namespace landbayes
