#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ehl {

/// Error in a text input (scenario, config, CSV); carries a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Invalid device configuration (invariant violated, unknown key, bad unit).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_ws(const std::string& line);
std::vector<std::string> split_char(const std::string& line, char sep);
std::string strip(const std::string& s);
bool starts_with(const std::string& s, const std::string& prefix);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Formats a double with enough digits to round-trip exactly.
std::string fmt_double(double v);

} // namespace ehl
