#include "sfw/tensor_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sfw/errors.hpp"

namespace sfw::io {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void malformed(const std::filesystem::path &path, std::size_t line, const std::string &what) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": " + what);
}

Vector read_values(std::istream &in, const std::filesystem::path &path, std::size_t &line_no) {
    Vector values;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        try {
            values.push_back(parse_double(t));
        } catch (const std::invalid_argument &) {
            malformed(path, line_no, "expected a number, got '" + t + "'");
        }
    }
    return values;
}

DenseTensor checked_tensor(const std::filesystem::path &path, Shape shape, Vector values) {
    try {
        return DenseTensor(std::move(shape), std::move(values));
    } catch (const ShapeError &e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

DenseTensor read_text_tensor(const std::filesystem::path &path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    Shape shape;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t.rfind("shape:", 0) != 0)
            malformed(path, line_no, "expected 'shape:' header");
        std::istringstream dims(t.substr(6));
        std::string tok;
        while (dims >> tok) {
            std::size_t n = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || n == 0)
                malformed(path, line_no, "invalid extent '" + tok + "'");
            shape.push_back(n);
        }
        if (shape.empty())
            malformed(path, line_no, "shape header lists no extents");
        break;
    }
    if (shape.empty())
        malformed(path, line_no, "missing 'shape:' header");
    return checked_tensor(path, std::move(shape), read_values(in, path, line_no));
}

void write_text_tensor(const std::filesystem::path &path, const DenseTensor &t) {
    std::string out = "shape:";
    for (auto n : t.shape())
        out += " " + std::to_string(n);
    out += "\n";
    for (double x : t.data()) {
        out += format_double(x);
        out += '\n';
    }
    write_file(path, out);
}

std::filesystem::path csv_sidecar(const std::filesystem::path &csv) {
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

DenseTensor read_csv_tensor(const std::filesystem::path &path) {
    const auto sidecar = csv_sidecar(path);
    Shape shape;
    try {
        const auto j = nlohmann::json::parse(read_file(sidecar));
        shape = j.at("shape").get<Shape>();
    } catch (const nlohmann::json::exception &e) {
        throw IoError(sidecar.string() + ": " + e.what());
    }
    std::istringstream in(read_file(path));
    std::size_t line_no = 0;
    return checked_tensor(path, std::move(shape), read_values(in, path, line_no));
}

void write_csv_tensor(const std::filesystem::path &path, const DenseTensor &t) {
    std::string out;
    for (double x : t.data()) {
        out += format_double(x);
        out += '\n';
    }
    write_file(path, out);
    write_file(csv_sidecar(path), nlohmann::json{{"shape", t.shape()}}.dump() + "\n");
}

DenseTensor read_tensor(const std::filesystem::path &path) {
    return path.extension() == ".csv" ? read_csv_tensor(path) : read_text_tensor(path);
}

void write_tensor(const std::filesystem::path &path, const DenseTensor &t) {
    if (path.extension() == ".csv")
        write_csv_tensor(path, t);
    else
        write_text_tensor(path, t);
}

std::vector<std::size_t> read_mask_indices(const std::filesystem::path &path) {
    std::istringstream in(read_file(path));
    std::vector<std::size_t> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty())
            continue;
        std::size_t idx = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), idx);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size())
            malformed(path, line_no, "expected a nonnegative integer index, got '" + t + "'");
        out.push_back(idx);
    }
    return out;
}

void write_mask_indices(const std::filesystem::path &path, const std::vector<std::size_t> &indices) {
    std::string out;
    for (auto i : indices)
        out += std::to_string(i) + "\n";
    write_file(path, out);
}

} // namespace sfw::io
