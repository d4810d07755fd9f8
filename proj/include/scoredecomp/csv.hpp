#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scoredecomp/decomp_est.hpp"

// CSV and small file helpers. Numbers are written in the shortest decimal
// form that round-trips, so repeated runs produce byte-identical files.

namespace scoredecomp {

class csv_format_error : public std::runtime_error {
public:
    explicit csv_format_error(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trip decimal representation.
std::string format_double(double v);

double parse_double(const std::string& field, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a `score,outcome[,oracle_q]` file; malformed rows raise
/// csv_format_error naming the line.
ScoredSample read_score_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace scoredecomp
