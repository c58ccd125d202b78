#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qv/complex_matrix.hpp"

namespace qv {

// 12 significant digits, negative zero normalized away. Used by every text
// writer so identical numbers serialize to identical bytes.
std::string format_sig(double x);

// key=value pairs emitted as '#' comment lines at the top of text outputs.
struct MetaBlock {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(std::string key, std::string value) {
        entries.emplace_back(std::move(key), std::move(value));
    }
};

std::string comment_block(const MetaBlock& meta);

// Dense complex matrix as row,col,re,im rows.
void write_density_csv(std::ostream& os, const ComplexMatrix& m, const MetaBlock* meta = nullptr);
ComplexMatrix read_density_csv(std::istream& is);

// Shared CSV helpers: '#' lines and blank lines are skipped by readers.
bool csv_skippable(const std::string& line);
std::vector<std::string> split_csv(const std::string& line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qv
