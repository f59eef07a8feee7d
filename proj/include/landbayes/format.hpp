#ifndef LANDBAYES_FORMAT_HPP_
#define LANDBAYES_FORMAT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landbayes {

// All real-valued output goes through these so that files are byte-stable:
// six significant digits, shortest %g form, "inf"/"-inf" for infinities and
// "NA" for undefined quantities.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

// Parses a real with std::from_chars semantics; the whole token must match.
std::optional<double> parse_real(std::string_view token);

std::vector<std::string> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

// "0,0.25,0.5" -> {0, 0.25, 0.5}. Throws std::invalid_argument on bad tokens.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace landbayes

#endif  // LANDBAYES_FORMAT_HPP_
