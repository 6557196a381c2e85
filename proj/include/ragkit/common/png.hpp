#pragma once
// Tiny raster support: an RGB canvas, a PNG encoder for it, and a header
// sniffer that recovers format and pixel dimensions from PNG/JPEG bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "ragkit/common/error.hpp"
#include "ragkit/common/flate.hpp"

namespace ragkit::util {

// Row-major 8-bit RGB image with the handful of drawing primitives the page
// rasterizer needs.
struct Canvas {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Canvas(int w, int h, std::uint8_t shade = 0xff)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, shade) {}

    void fill_rect(int x, int y, int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        int x1 = x + w < width ? x + w : width;
        int y1 = y + h < height ? y + h : height;
        for (int py = y > 0 ? y : 0; py < y1; ++py) {
            for (int px = x > 0 ? x : 0; px < x1; ++px) {
                std::size_t at = (static_cast<std::size_t>(py) * width + px) * 3;
                rgb[at] = r;
                rgb[at + 1] = g;
                rgb[at + 2] = b;
            }
        }
    }
};

namespace detail {

inline void png_put_u32be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v >> 24 & 0xff));
    out.push_back(static_cast<char>(v >> 16 & 0xff));
    out.push_back(static_cast<char>(v >> 8 & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

inline std::uint32_t png_u32be(std::string_view s, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[at])) << 24 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 1])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 2])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 3]));
}

inline void png_chunk(std::string& out, std::string_view type, std::string_view data) {
    png_put_u32be(out, static_cast<std::uint32_t>(data.size()));
    std::size_t crc_from = out.size();
    out += type;
    out += data;
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(out.data() + crc_from),
              static_cast<uInt>(out.size() - crc_from)));
    png_put_u32be(out, crc);
}

}  // namespace detail

// Encodes an RGB canvas as an 8-bit truecolor PNG (filter 0 on every row).
inline std::string png_encode(const Canvas& canvas) {
    if (canvas.width <= 0 || canvas.height <= 0) {
        raise(ErrorCode::InvalidConfig, "png_encode: empty canvas");
    }
    std::string out("\x89PNG\r\n\x1a\n", 8);

    std::string ihdr;
    detail::png_put_u32be(ihdr, static_cast<std::uint32_t>(canvas.width));
    detail::png_put_u32be(ihdr, static_cast<std::uint32_t>(canvas.height));
    ihdr += '\x08';  // bit depth
    ihdr += '\x02';  // color type: truecolor
    ihdr += '\0';    // compression
    ihdr += '\0';    // filter
    ihdr += '\0';    // interlace
    detail::png_chunk(out, "IHDR", ihdr);

    std::string raw;
    raw.reserve(static_cast<std::size_t>(canvas.height) * (canvas.width * 3 + 1));
    for (int y = 0; y < canvas.height; ++y) {
        raw += '\0';  // per-row filter byte: none
        const char* row =
            reinterpret_cast<const char*>(canvas.rgb.data()) +
            static_cast<std::size_t>(y) * canvas.width * 3;
        raw.append(row, static_cast<std::size_t>(canvas.width) * 3);
    }
    detail::png_chunk(out, "IDAT", flate_compress(raw));
    detail::png_chunk(out, "IEND", "");
    return out;
}

struct ImageInfo {
    std::string format;  // "png" or "jpg"
    int width = 0;
    int height = 0;
};

// Reads just enough of the header to identify PNG or JPEG bytes and pull the
// pixel dimensions. Anything else comes back empty.
inline std::optional<ImageInfo> sniff_image(std::string_view bytes) {
    static constexpr std::string_view kPngSig = "\x89PNG\r\n\x1a\n";
    if (bytes.size() >= 24 && bytes.substr(0, 8) == kPngSig &&
        bytes.substr(12, 4) == "IHDR") {
        ImageInfo info;
        info.format = "png";
        info.width = static_cast<int>(detail::png_u32be(bytes, 16));
        info.height = static_cast<int>(detail::png_u32be(bytes, 20));
        if (info.width <= 0 || info.height <= 0) return std::nullopt;
        return info;
    }

    if (bytes.size() >= 4 && static_cast<unsigned char>(bytes[0]) == 0xff &&
        static_cast<unsigned char>(bytes[1]) == 0xd8) {
        std::size_t at = 2;
        while (at + 4 <= bytes.size()) {
            if (static_cast<unsigned char>(bytes[at]) != 0xff) return std::nullopt;
            unsigned char marker = static_cast<unsigned char>(bytes[at + 1]);
            if (marker == 0xff) {  // fill byte
                ++at;
                continue;
            }
            if (marker == 0xd8 || (marker >= 0xd0 && marker <= 0xd7) || marker == 0x01) {
                at += 2;
                continue;
            }
            if (at + 4 > bytes.size()) return std::nullopt;
            std::size_t seg_len = static_cast<std::size_t>(
                static_cast<unsigned char>(bytes[at + 2]) << 8 |
                static_cast<unsigned char>(bytes[at + 3]));
            bool is_sof = marker >= 0xc0 && marker <= 0xcf && marker != 0xc4 &&
                          marker != 0xc8 && marker != 0xcc;
            if (is_sof) {
                if (at + 9 > bytes.size()) return std::nullopt;
                ImageInfo info;
                info.format = "jpg";
                info.height = static_cast<unsigned char>(bytes[at + 5]) << 8 |
                              static_cast<unsigned char>(bytes[at + 6]);
                info.width = static_cast<unsigned char>(bytes[at + 7]) << 8 |
                             static_cast<unsigned char>(bytes[at + 8]);
                if (info.width <= 0 || info.height <= 0) return std::nullopt;
                return info;
            }
            if (marker == 0xd9 || marker == 0xda) return std::nullopt;  // hit data, no SOF
            at += 2 + seg_len;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

inline std::optional<ImageInfo> sniff_image(const std::vector<std::uint8_t>& bytes) {
    return sniff_image(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace ragkit::util
