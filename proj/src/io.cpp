#include "graphreg/io.hpp"

#include "graphreg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace graphreg {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void write_pgm16(const Image& image, const fs::path& path) {
    if (image.size() != image.width * image.height || image.size() == 0) {
        throw DimensionError("write_pgm16: malformed image");
    }
    std::string data = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n65535\n";
    data.reserve(data.size() + 2 * image.size());
    for (double x : image.values) {
        const double c = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(c * 65535.0));
        data.push_back(static_cast<char>((q >> 8) & 0xFF));
        data.push_back(static_cast<char>(q & 0xFF));
    }
    write_text_file(path, data);
}

Image read_pgm16(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    auto next_token = [&]() {
        std::string tok;
        char c = 0;
        while (in.get(c)) {
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(c);
        }
        return tok;
    };
    if (next_token() != "P5") {
        throw IoError(path.string() + ": not a binary PGM");
    }
    std::size_t w = 0, h = 0, maxval = 0;
    try {
        w = std::stoul(next_token());
        h = std::stoul(next_token());
        maxval = std::stoul(next_token());
    } catch (const std::exception&) {
        throw IoError(path.string() + ": malformed PGM header");
    }
    if (w == 0 || h == 0 || maxval == 0 || maxval > 65535) {
        throw IoError(path.string() + ": unsupported PGM dimensions or maxval");
    }
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(w * h * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw IoError(path.string() + ": truncated PGM data");
    }
    Image img(w, h);
    for (std::size_t i = 0; i < w * h; ++i) {
        const unsigned q = bytes == 2 ? (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
        img.values[i] = static_cast<double>(q) / static_cast<double>(maxval);
    }
    return img;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_sinogram_csv(const Sinogram& s, const fs::path& path) {
    std::string out;
    out.reserve(s.size() * 24);
    for (std::size_t r = 0; r < s.n_rows; ++r) {
        for (std::size_t c = 0; c < s.n_cols; ++c) {
            if (c) out.push_back(',');
            out += format_double(s.values[r * s.n_cols + c]);
        }
        out.push_back('\n');
    }
    write_text_file(path, out);
}

Sinogram read_sinogram_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<double> values;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t n = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError(path.string() + ": bad number '" + cell + "'");
            }
            ++n;
        }
        if (rows == 0) {
            cols = n;
        } else if (n != cols) {
            throw IoError(path.string() + ": ragged rows");
        }
        ++rows;
    }
    if (rows == 0) {
        throw IoError(path.string() + ": empty sinogram");
    }
    return Sinogram(rows, cols, std::move(values));
}

}  // namespace graphreg
