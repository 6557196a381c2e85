#pragma once
// Thin wrappers around zlib's deflate/inflate. `raw` selects the headerless
// deflate stream used inside ZIP archives; the default zlib wrapper is what
// PDF FlateDecode and PNG IDAT chunks use.

#include <string>
#include <string_view>

#include <zlib.h>

#include "ragkit/common/error.hpp"

namespace ragkit::util {

inline std::string flate_compress(std::string_view data, bool raw = false) {
    z_stream zs{};
    int window_bits = raw ? -MAX_WBITS : MAX_WBITS;
    if (deflateInit2(&zs, 6, Z_DEFLATED, window_bits, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        raise(ErrorCode::IoError, "deflateInit2 failed");
    }
    std::string out;
    out.resize(deflateBound(&zs, static_cast<uLong>(data.size())));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) raise(ErrorCode::IoError, "deflate did not finish");
    out.resize(zs.total_out);
    return out;
}

inline std::string flate_decompress(std::string_view data, bool raw = false) {
    z_stream zs{};
    int window_bits = raw ? -MAX_WBITS : MAX_WBITS;
    if (inflateInit2(&zs, window_bits) != Z_OK) {
        raise(ErrorCode::IoError, "inflateInit2 failed");
    }
    std::string out;
    std::string chunk(1 << 15, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            raise(ErrorCode::CorruptFile, "bad deflate stream");
        }
        out.append(chunk.data(), chunk.size() - zs.avail_out);
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

}  // namespace ragkit::util
