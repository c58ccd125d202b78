#include "qv/io_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qv {

std::string format_sig(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string comment_block(const MetaBlock& meta) {
    std::string out;
    for (const auto& [k, v] : meta.entries) {
        out += "# ";
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

bool csv_skippable(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;  // blank
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

namespace {

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        if (pos != s.size()) throw MalformedFileError("trailing junk in numeric field");
        if (!std::isfinite(v)) throw MalformedFileError("non-finite numeric field");
        return v;
    } catch (const MalformedFileError&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedFileError("unparsable numeric field: " + s);
    }
}

long long parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        if (pos != s.size()) throw MalformedFileError("trailing junk in integer field");
        return v;
    } catch (const MalformedFileError&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedFileError("unparsable integer field: " + s);
    }
}

}  // namespace

void write_density_csv(std::ostream& os, const ComplexMatrix& m, const MetaBlock* meta) {
    if (meta != nullptr) os << comment_block(*meta);
    os << "row,col,re,im\n";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            os << i << "," << j << "," << format_sig(m(i, j).real()) << ","
               << format_sig(m(i, j).imag()) << "\n";
}

ComplexMatrix read_density_csv(std::istream& is) {
    std::string line;
    struct Entry {
        int r, c;
        Complex v;
    };
    std::vector<Entry> entries;
    int max_r = -1, max_c = -1;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (csv_skippable(line)) continue;
        const auto f = split_csv(line);
        if (!header_seen && !f.empty() && f[0] == "row") {
            header_seen = true;
            continue;
        }
        if (f.size() != 4) throw MalformedFileError("expected row,col,re,im");
        const int r = static_cast<int>(parse_int(f[0]));
        const int c = static_cast<int>(parse_int(f[1]));
        if (r < 0 || c < 0) throw MalformedFileError("negative matrix index");
        entries.push_back({r, c, Complex{parse_double(f[2]), parse_double(f[3])}});
        max_r = std::max(max_r, r);
        max_c = std::max(max_c, c);
    }
    if (entries.empty()) throw MalformedFileError("empty matrix file");
    const int n = std::max(max_r, max_c) + 1;
    ComplexMatrix m(n, n);
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (const Entry& e : entries) {
        const std::size_t idx = static_cast<std::size_t>(e.r) * n + e.c;
        if (seen[idx]) throw MalformedFileError("duplicate matrix entry");
        seen[idx] = true;
        m(e.r, e.c) = e.v;
    }
    for (bool s : seen)
        if (!s) throw MalformedFileError("matrix file does not cover every entry");
    return m;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedFileError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedFileError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw MalformedFileError("short write to " + path);
}

}  // namespace qv
