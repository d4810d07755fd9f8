#include "scoredecomp/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace scoredecomp {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    double out = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw csv_format_error(context + ": not a number: '" + field + "'");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

ScoredSample read_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw csv_format_error("cannot open score file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw csv_format_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool with_oracle = false;
    if (line == "score,outcome")
        with_oracle = false;
    else if (line == "score,outcome,oracle_q")
        with_oracle = true;
    else
        throw csv_format_error(path + ":1: header must be 'score,outcome[,oracle_q]', got '" +
                               line + "'");

    std::vector<double> scores, oracle;
    std::vector<int> outcomes;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto fields = split_csv_line(line);
        if (fields.size() != (with_oracle ? 3u : 2u))
            throw csv_format_error(where + ": expected " + (with_oracle ? "3" : "2") +
                                   " fields, got " + std::to_string(fields.size()));
        const double s = parse_double(fields[0], where);
        if (!(s >= 0.0 && s <= 1.0))
            throw csv_format_error(where + ": score outside [0, 1]: " + fields[0]);
        const double y = parse_double(fields[1], where);
        if (y != 0.0 && y != 1.0)
            throw csv_format_error(where + ": outcome must be 0 or 1: " + fields[1]);
        scores.push_back(s);
        outcomes.push_back(static_cast<int>(y));
        if (with_oracle) {
            const double q = parse_double(fields[2], where);
            if (!(q >= 0.0 && q <= 1.0))
                throw csv_format_error(where + ": oracle_q outside [0, 1]: " + fields[2]);
            oracle.push_back(q);
        }
    }
    if (scores.empty()) throw csv_format_error(path + ": no data rows");
    return ScoredSample(std::move(scores), std::move(outcomes), std::move(oracle));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace scoredecomp
