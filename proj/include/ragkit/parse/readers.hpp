#pragma once
// Format dispatch for the native document readers.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "ragkit/common/error.hpp"
#include "ragkit/common/strutil.hpp"
#include "ragkit/parse/ooxml_reader.hpp"
#include "ragkit/parse/pdf_reader.hpp"

namespace ragkit::parse {

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

inline std::optional<DocFormat> format_from_path(std::string_view path) {
    std::size_t dot = path.rfind('.');
    if (dot == std::string_view::npos) return std::nullopt;
    std::string ext = util::to_lower(path.substr(dot + 1));
    if (ext == "pdf") return DocFormat::Pdf;
    if (ext == "docx") return DocFormat::Docx;
    if (ext == "pptx") return DocFormat::Pptx;
    return std::nullopt;
}

// Decodes the source file to pages of native text/tables/images. The declared
// format drives dispatch; mismatched magic bytes surface as CorruptFile.
inline NativeDocument read_native(const DocumentSource& source) {
    std::string bytes = read_file_bytes(source.origin_path);
    switch (source.format) {
        case DocFormat::Pdf: return read_pdf(bytes, source.doc_id);
        case DocFormat::Docx: return read_docx(bytes, source.doc_id);
        case DocFormat::Pptx: return read_pptx(bytes, source.doc_id);
    }
    raise(ErrorCode::UnsupportedFormat, "unknown format for " + source.origin_path);
}

}  // namespace ragkit::parse
