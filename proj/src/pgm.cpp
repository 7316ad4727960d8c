#include "spcam/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

namespace spcam {

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

std::size_t parse_size(const std::string& tok, const char* what) {
    if (tok.empty())
        throw Error(std::string("pgm header missing ") + what);
    std::size_t v = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw Error(std::string("pgm header bad ") + what + ": " + tok);
        v = v * 10 + static_cast<std::size_t>(ch - '0');
    }
    return v;
}

}  // namespace

SceneImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open image: " + path);
    const std::string magic = next_token(in);
    if (magic != "P5" && magic != "P2")
        throw Error("unsupported graymap magic '" + magic + "' in " + path);
    const std::size_t cols = parse_size(next_token(in), "width");
    const std::size_t rows = parse_size(next_token(in), "height");
    const std::size_t maxval = parse_size(next_token(in), "maxval");
    if (cols == 0 || rows == 0 || maxval == 0 || maxval > 65535)
        throw Error("bad pgm header in " + path);

    SceneImage img(rows, cols);
    const double scale = 1.0 / static_cast<double>(maxval);
    if (magic == "P2") {
        for (double& px : img.pixels)
            px = std::min(1.0, scale * double(parse_size(next_token(in), "sample")));
        return img;
    }
    // P5: single whitespace after maxval already consumed by tokenization;
    // samples follow immediately.
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(img.size() * static_cast<std::size_t>(bytes));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw Error("truncated pgm payload in " + path);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const std::size_t v = bytes == 1
                                  ? raw[i]
                                  : (std::size_t(raw[2 * i]) << 8) | raw[2 * i + 1];
        img.pixels[i] = std::min(1.0, scale * double(v));
    }
    return img;
}

void write_pgm(const std::string& path, const SceneImage& image, int bits) {
    if (bits != 8 && bits != 16)
        throw Error("pgm depth must be 8 or 16 bits");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    const std::size_t maxval = bits == 8 ? 255 : 65535;
    out << "P5\n" << image.cols << " " << image.rows << "\n" << maxval << "\n";
    for (double px : image.pixels) {
        const double clamped = std::clamp(px, 0.0, 1.0);
        const std::size_t v =
            static_cast<std::size_t>(std::lround(clamped * double(maxval)));
        if (bits == 8) {
            const unsigned char b = static_cast<unsigned char>(v);
            out.write(reinterpret_cast<const char*>(&b), 1);
        } else {
            const unsigned char b[2] = {static_cast<unsigned char>(v >> 8),
                                        static_cast<unsigned char>(v & 0xff)};
            out.write(reinterpret_cast<const char*>(b), 2);
        }
    }
    if (!out)
        throw Error("pgm write failed: " + path);
}

SceneImage center_crop_pow2(const SceneImage& image) {
    const std::size_t r = std::bit_floor(image.rows);
    const std::size_t c = std::bit_floor(image.cols);
    if (r == image.rows && c == image.cols)
        return image;
    SceneImage out(r, c);
    const std::size_t r0 = (image.rows - r) / 2;
    const std::size_t c0 = (image.cols - c) / 2;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            out.at(i, j) = image.at(r0 + i, c0 + j);
    return out;
}

}  // namespace spcam
