#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sfw/tensor.hpp"

namespace sfw::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

/// Plain text: a `shape: n1 ... nt` header line, then one value per line in
/// canonical (first index fastest) order.
DenseTensor read_text_tensor(const std::filesystem::path &path);
void write_text_tensor(const std::filesystem::path &path, const DenseTensor &t);

/// Flat CSV, one value per line, with the shape in a `<stem>.json` sidecar
/// holding `{"shape": [n1, ..., nt]}`.
DenseTensor read_csv_tensor(const std::filesystem::path &path);
void write_csv_tensor(const std::filesystem::path &path, const DenseTensor &t);
std::filesystem::path csv_sidecar(const std::filesystem::path &csv);

/// Dispatches on the extension: `.csv` uses the CSV form, anything else text.
DenseTensor read_tensor(const std::filesystem::path &path);
void write_tensor(const std::filesystem::path &path, const DenseTensor &t);

/// Newline-separated flat indices; blank lines and `#` comments are skipped.
std::vector<std::size_t> read_mask_indices(const std::filesystem::path &path);
void write_mask_indices(const std::filesystem::path &path, const std::vector<std::size_t> &indices);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, const std::string &contents);

} // namespace sfw::io
