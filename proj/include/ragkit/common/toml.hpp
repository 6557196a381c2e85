#pragma once
// Minimal TOML reader covering the subset the config file uses: [section]
// headers, bare keys, basic strings, integers, floats, booleans, and
// single-line arrays of strings. Keys are addressed as "section.key"
// ("key" alone for the top-level table). Anything outside the subset is an
// InvalidConfig error with a line number, never a silent misparse.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ragkit/common/error.hpp"
#include "ragkit/common/strutil.hpp"

namespace ragkit::util {

class TomlFile {
public:
    static TomlFile parse_text(const std::string& text) {
        TomlFile file;
        std::string section;
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string line = strip_comment(raw, line_no);
            auto t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(line_no, "unterminated section header");
                section = std::string(trim(t.substr(1, t.size() - 2)));
                if (section.empty() || !valid_key(section)) {
                    fail(line_no, "bad section name");
                }
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected key = value");
            std::string key(trim(t.substr(0, eq)));
            if (!valid_key(key)) fail(line_no, "bad key '" + key + "'");
            std::string full = section.empty() ? key : section + "." + key;
            if (file.values_.count(full)) fail(line_no, "duplicate key '" + full + "'");
            file.values_[full] = parse_value(std::string(trim(t.substr(eq + 1))), line_no);
        }
        return file;
    }

    static TomlFile load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) raise(ErrorCode::IoError, "cannot read config " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback = "") const {
        auto v = find(key);
        if (!v) return fallback;
        if (v->kind != Kind::String) type_error(key, "a string");
        return v->str;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback = 0) const {
        auto v = find(key);
        if (!v) return fallback;
        if (v->kind != Kind::Int) type_error(key, "an integer");
        return v->integer;
    }

    double get_double(const std::string& key, double fallback = 0.0) const {
        auto v = find(key);
        if (!v) return fallback;
        if (v->kind == Kind::Int) return double(v->integer);
        if (v->kind != Kind::Float) type_error(key, "a number");
        return v->real;
    }

    bool get_bool(const std::string& key, bool fallback = false) const {
        auto v = find(key);
        if (!v) return fallback;
        if (v->kind != Kind::Bool) type_error(key, "a boolean");
        return v->boolean;
    }

    std::vector<std::string> get_string_array(const std::string& key) const {
        auto v = find(key);
        if (!v) return {};
        if (v->kind != Kind::Array) type_error(key, "an array of strings");
        return v->array;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        out.reserve(values_.size());
        for (const auto& [k, v] : values_) out.push_back(k);
        return out;
    }

private:
    enum class Kind { String, Int, Float, Bool, Array };

    struct Value {
        Kind kind = Kind::String;
        std::string str;
        std::int64_t integer = 0;
        double real = 0.0;
        bool boolean = false;
        std::vector<std::string> array;
    };

    [[noreturn]] static void fail(int line_no, const std::string& what) {
        raise(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": " + what);
    }

    [[noreturn]] static void type_error(const std::string& key, const std::string& expected) {
        raise(ErrorCode::InvalidConfig, "config key '" + key + "' is not " + expected);
    }

    static bool valid_key(const std::string& key) {
        if (key.empty()) return false;
        for (char c : key) {
            bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
            if (!ok) return false;
        }
        return true;
    }

    // Cuts a trailing # comment, respecting quoted strings.
    static std::string strip_comment(const std::string& line, int line_no) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (in_string) {
                if (c == '\\') {
                    if (i + 1 >= line.size()) fail(line_no, "dangling escape");
                    ++i;
                } else if (c == '"') {
                    in_string = false;
                }
            } else if (c == '"') {
                in_string = true;
            } else if (c == '#') {
                return line.substr(0, i);
            }
        }
        if (in_string) fail(line_no, "unterminated string");
        return line;
    }

    // `text` holds a complete basic string starting at `at` (a '"').
    // Returns the decoded value and leaves `at` one past the closing quote.
    static std::string read_string(const std::string& text, std::size_t& at, int line_no) {
        std::string out;
        ++at;  // opening quote
        while (at < text.size() && text[at] != '"') {
            char c = text[at];
            if (c == '\\') {
                ++at;
                if (at >= text.size()) fail(line_no, "dangling escape");
                switch (text[at]) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    default: fail(line_no, "unsupported escape sequence");
                }
            } else {
                out += c;
            }
            ++at;
        }
        if (at >= text.size()) fail(line_no, "unterminated string");
        ++at;  // closing quote
        return out;
    }

    static Value parse_value(const std::string& text, int line_no) {
        if (text.empty()) fail(line_no, "missing value");
        Value v;
        if (text.front() == '"') {
            std::size_t at = 0;
            v.kind = Kind::String;
            v.str = read_string(text, at, line_no);
            if (!trim(text.substr(at)).empty()) fail(line_no, "trailing text after string");
            return v;
        }
        if (text.front() == '[') {
            if (text.back() != ']') fail(line_no, "unterminated array");
            v.kind = Kind::Array;
            std::size_t at = 1;
            while (at < text.size() - 1) {
                while (at < text.size() - 1 && (text[at] == ' ' || text[at] == '\t' ||
                                                text[at] == ',')) {
                    ++at;
                }
                if (at >= text.size() - 1) break;
                if (text[at] != '"') fail(line_no, "arrays may only hold strings");
                v.array.push_back(read_string(text, at, line_no));
            }
            return v;
        }
        if (text == "true" || text == "false") {
            v.kind = Kind::Bool;
            v.boolean = text == "true";
            return v;
        }
        // numbers; underscores between digits are tolerated
        std::string digits;
        bool is_float = false;
        for (char c : text) {
            if (c == '_') continue;
            if (c == '.' || c == 'e' || c == 'E') is_float = true;
            digits += c;
        }
        try {
            std::size_t used = 0;
            if (is_float) {
                v.kind = Kind::Float;
                v.real = std::stod(digits, &used);
            } else {
                v.kind = Kind::Int;
                v.integer = std::stoll(digits, &used);
            }
            if (used != digits.size()) fail(line_no, "bad value '" + text + "'");
        } catch (const std::exception&) {
            fail(line_no, "bad value '" + text + "'");
        }
        return v;
    }

    const Value* find(const std::string& key) const {
        auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    std::map<std::string, Value> values_;
};

}  // namespace ragkit::util
