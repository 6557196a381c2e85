#pragma once
// Minimal ZIP archive reader/writer: enough for the OOXML containers we
// ingest (store + deflate methods, no zip64, no encryption). The writer
// pins timestamps so archives built from the same entries are byte-equal.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "ragkit/common/error.hpp"
#include "ragkit/common/flate.hpp"

namespace ragkit::util {

struct ZipEntry {
    std::string name;
    std::string bytes;
};

namespace detail {

inline std::uint16_t zip_u16(std::string_view s, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(s[at]) |
                                      static_cast<unsigned char>(s[at + 1]) << 8);
}

inline std::uint32_t zip_u32(std::string_view s, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 3])) << 24;
}

inline void zip_put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8 & 0xff));
}

inline void zip_put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8 & 0xff));
    out.push_back(static_cast<char>(v >> 16 & 0xff));
    out.push_back(static_cast<char>(v >> 24 & 0xff));
}

}  // namespace detail

// Parses a ZIP archive from memory. Raises CorruptFile on anything that is
// not a well-formed store/deflate archive.
inline std::vector<ZipEntry> zip_read(std::string_view bytes) {
    using detail::zip_u16;
    using detail::zip_u32;
    constexpr std::uint32_t kEocdSig = 0x06054b50;
    constexpr std::uint32_t kCentralSig = 0x02014b50;
    constexpr std::uint32_t kLocalSig = 0x04034b50;

    if (bytes.size() < 22) raise(ErrorCode::CorruptFile, "zip too small");
    // End-of-central-directory record: scan backwards past a possible comment.
    std::size_t eocd = std::string_view::npos;
    std::size_t lowest = bytes.size() >= 22 + 0xffff ? bytes.size() - 22 - 0xffff : 0;
    for (std::size_t at = bytes.size() - 22; ; --at) {
        if (zip_u32(bytes, at) == kEocdSig) {
            eocd = at;
            break;
        }
        if (at == lowest) break;
    }
    if (eocd == std::string_view::npos) raise(ErrorCode::CorruptFile, "zip: no end record");

    std::uint16_t entry_count = zip_u16(bytes, eocd + 10);
    std::uint32_t central_at = zip_u32(bytes, eocd + 16);
    if (central_at >= bytes.size()) raise(ErrorCode::CorruptFile, "zip: bad directory offset");

    std::vector<ZipEntry> entries;
    entries.reserve(entry_count);
    std::size_t at = central_at;
    for (int i = 0; i < entry_count; ++i) {
        if (at + 46 > bytes.size() || zip_u32(bytes, at) != kCentralSig) {
            raise(ErrorCode::CorruptFile, "zip: bad central directory entry");
        }
        std::uint16_t method = zip_u16(bytes, at + 10);
        std::uint32_t compressed_size = zip_u32(bytes, at + 20);
        std::uint32_t plain_size = zip_u32(bytes, at + 24);
        std::uint16_t name_len = zip_u16(bytes, at + 28);
        std::uint16_t extra_len = zip_u16(bytes, at + 30);
        std::uint16_t comment_len = zip_u16(bytes, at + 32);
        std::uint32_t local_at = zip_u32(bytes, at + 42);
        if (at + 46 + name_len > bytes.size()) raise(ErrorCode::CorruptFile, "zip: truncated name");
        std::string name(bytes.substr(at + 46, name_len));
        at += 46 + name_len + extra_len + comment_len;

        if (local_at + 30 > bytes.size() || zip_u32(bytes, local_at) != kLocalSig) {
            raise(ErrorCode::CorruptFile, "zip: bad local header for " + name);
        }
        std::uint16_t local_name_len = zip_u16(bytes, local_at + 26);
        std::uint16_t local_extra_len = zip_u16(bytes, local_at + 28);
        std::size_t data_at = local_at + 30 + local_name_len + local_extra_len;
        if (data_at + compressed_size > bytes.size()) {
            raise(ErrorCode::CorruptFile, "zip: truncated data for " + name);
        }
        std::string_view payload = bytes.substr(data_at, compressed_size);

        ZipEntry entry;
        entry.name = std::move(name);
        if (method == 0) {
            entry.bytes = std::string(payload);
        } else if (method == 8) {
            entry.bytes = flate_decompress(payload, /*raw=*/true);
        } else {
            raise(ErrorCode::CorruptFile, "zip: unsupported method for " + entry.name);
        }
        if (entry.bytes.size() != plain_size) {
            raise(ErrorCode::CorruptFile, "zip: size mismatch for " + entry.name);
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

// Serializes entries in the order given. Entries larger than a handful of
// bytes are deflated; timestamps are fixed so output is reproducible.
inline std::string zip_write(const std::vector<ZipEntry>& entries) {
    using detail::zip_put_u16;
    using detail::zip_put_u32;

    std::string out;
    struct Central {
        std::string name;
        std::uint16_t method;
        std::uint32_t crc;
        std::uint32_t compressed_size;
        std::uint32_t plain_size;
        std::uint32_t local_at;
    };
    std::vector<Central> directory;
    directory.reserve(entries.size());

    for (const auto& entry : entries) {
        std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(0, reinterpret_cast<const Bytef*>(entry.bytes.data()),
                  static_cast<uInt>(entry.bytes.size())));
        std::string packed = flate_compress(entry.bytes, /*raw=*/true);
        std::uint16_t method = packed.size() < entry.bytes.size() ? 8 : 0;
        if (method == 0) packed = entry.bytes;

        Central c{entry.name, method, crc, static_cast<std::uint32_t>(packed.size()),
                  static_cast<std::uint32_t>(entry.bytes.size()),
                  static_cast<std::uint32_t>(out.size())};
        zip_put_u32(out, 0x04034b50);
        zip_put_u16(out, 20);      // version needed
        zip_put_u16(out, 0);       // flags
        zip_put_u16(out, method);
        zip_put_u16(out, 0);       // mod time (fixed)
        zip_put_u16(out, 0x21);    // mod date (fixed: 1980-01-01)
        zip_put_u32(out, crc);
        zip_put_u32(out, c.compressed_size);
        zip_put_u32(out, c.plain_size);
        zip_put_u16(out, static_cast<std::uint16_t>(entry.name.size()));
        zip_put_u16(out, 0);       // extra
        out += entry.name;
        out += packed;
        directory.push_back(std::move(c));
    }

    std::size_t central_at = out.size();
    for (const auto& c : directory) {
        zip_put_u32(out, 0x02014b50);
        zip_put_u16(out, 20);      // version made by
        zip_put_u16(out, 20);      // version needed
        zip_put_u16(out, 0);       // flags
        zip_put_u16(out, c.method);
        zip_put_u16(out, 0);       // mod time
        zip_put_u16(out, 0x21);    // mod date
        zip_put_u32(out, c.crc);
        zip_put_u32(out, c.compressed_size);
        zip_put_u32(out, c.plain_size);
        zip_put_u16(out, static_cast<std::uint16_t>(c.name.size()));
        zip_put_u16(out, 0);       // extra
        zip_put_u16(out, 0);       // comment
        zip_put_u16(out, 0);       // disk
        zip_put_u16(out, 0);       // internal attrs
        zip_put_u32(out, 0);       // external attrs
        zip_put_u32(out, c.local_at);
        out += c.name;
    }
    std::size_t central_size = out.size() - central_at;

    zip_put_u32(out, 0x06054b50);
    zip_put_u16(out, 0);  // disk
    zip_put_u16(out, 0);  // central directory disk
    zip_put_u16(out, static_cast<std::uint16_t>(directory.size()));
    zip_put_u16(out, static_cast<std::uint16_t>(directory.size()));
    zip_put_u32(out, static_cast<std::uint32_t>(central_size));
    zip_put_u32(out, static_cast<std::uint32_t>(central_at));
    zip_put_u16(out, 0);  // comment length
    return out;
}

// First entry with the given name, or nullptr.
inline const ZipEntry* zip_find(const std::vector<ZipEntry>& entries, std::string_view name) {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

}  // namespace ragkit::util
