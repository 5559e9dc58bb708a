#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mbow {

/// 8-bit grayscale image, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int u, int v) const {
        return pixels[static_cast<std::size_t>(v) * width + u];
    }
    std::uint8_t& at(int u, int v) {
        return pixels[static_cast<std::size_t>(v) * width + u];
    }

    bool operator==(const Image&) const = default;
};

/// Binary PGM (P5, maxval <= 255).
Image load_pgm(const std::filesystem::path& path);
void save_pgm(const Image& image, const std::filesystem::path& path);

}  // namespace mbow
