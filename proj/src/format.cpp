#include "stopdur/format.hpp"

#include <cmath>
#include <cstdio>

#include "stopdur/numerics.hpp"

namespace stopdur {

std::string format_significant(double v) {
    if (!std::isfinite(v))
        throw numerical_error("format_significant: value is not finite");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void report::put(const std::string& key, double v) {
    items_.emplace_back(key, v);
}

void report::put(const std::string& key, long long v) {
    items_.emplace_back(key, v);
}

void report::put(const std::string& key, std::uint64_t v) {
    items_.emplace_back(key, v);
}

void report::put(const std::string& key, int v) {
    put(key, static_cast<long long>(v));
}

void report::put(const std::string& key, bool v) { items_.emplace_back(key, v); }

void report::put(const std::string& key, const char* v) {
    items_.emplace_back(key, std::string(v));
}

void report::put(const std::string& key, const std::string& v) {
    items_.emplace_back(key, v);
}

void report::put(const std::string& key, const std::vector<double>& v) {
    items_.emplace_back(key, v);
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string json_scalar(const std::variant<double, long long, std::uint64_t,
                                           bool, std::string,
                                           std::vector<double>>& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_significant(*d);
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&v))
        return std::to_string(*u);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(v);
    return '"' + json_escape(s) + '"';
}

} // namespace

std::string report::to_json() const {
    std::string out = "{\n";
    bool first = true;
    for (const auto& [key, value] : items_) {
        if (!first) out += ",\n";
        first = false;
        out += "  \"" + json_escape(key) + "\": ";
        if (const auto* vec = std::get_if<std::vector<double>>(&value)) {
            out += '[';
            for (std::size_t i = 0; i < vec->size(); ++i) {
                if (i) out += ", ";
                out += format_significant((*vec)[i]);
            }
            out += ']';
        } else {
            out += json_scalar(value);
        }
    }
    out += "\n}\n";
    return out;
}

std::string report::to_csv() const {
    std::string out = "parameter,value\n";
    for (const auto& [key, value] : items_) {
        if (const auto* vec = std::get_if<std::vector<double>>(&value)) {
            for (std::size_t i = 0; i < vec->size(); ++i) {
                out += csv_escape(key + '_' + std::to_string(i + 1));
                out += ',';
                out += csv_escape(format_significant((*vec)[i]));
                out += '\n';
            }
        } else if (const auto* s = std::get_if<std::string>(&value)) {
            out += csv_escape(key) + ',' + csv_escape(*s) + '\n';
        } else {
            out += csv_escape(key) + ',' + json_scalar(value) + '\n';
        }
    }
    return out;
}

} // namespace stopdur
