#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nestspec::cli {

/// Minimal JSON document builder. Exists so every floating-point value is
/// serialized with 17 significant digits (round-trip exact for doubles) and
/// object keys keep insertion order; the report files are diffable and
/// reproducible across tools.
class JsonValue {
public:
    JsonValue() : value_(nullptr) {}
    JsonValue(std::nullptr_t) : value_(nullptr) {}
    JsonValue(bool b) : value_(b) {}
    JsonValue(double d) : value_(d) {}
    JsonValue(int i) : value_(static_cast<long long>(i)) {}
    JsonValue(long long i) : value_(i) {}
    JsonValue(std::size_t i) : value_(static_cast<long long>(i)) {}
    JsonValue(const char* s) : value_(std::string(s)) {}
    JsonValue(std::string s) : value_(std::move(s)) {}

    static JsonValue array() {
        JsonValue v;
        v.value_ = Array{};
        return v;
    }
    static JsonValue object() {
        JsonValue v;
        v.value_ = Object{};
        return v;
    }
    static JsonValue array_of(const std::vector<double>& xs) {
        JsonValue v = array();
        for (double x : xs) v.push_back(JsonValue(x));
        return v;
    }

    void push_back(JsonValue v) { std::get<Array>(value_).items.push_back(std::move(v)); }

    JsonValue& set(const std::string& key, JsonValue v) {
        auto& fields = std::get<Object>(value_).fields;
        fields.emplace_back(key, std::move(v));
        return *this;
    }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        out.push_back('\n');
        return out;
    }

    /// Leaf paths and rendered values, for the flat field,value CSV reports.
    /// Numeric rendering is identical to dump(), so both formats of a report
    /// carry the same numbers.
    std::vector<std::pair<std::string, std::string>> flatten() const {
        std::vector<std::pair<std::string, std::string>> out;
        flatten_into("", out);
        return out;
    }

private:
    struct Array {
        std::vector<JsonValue> items;
    };
    struct Object {
        std::vector<std::pair<std::string, JsonValue>> fields;
    };

    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> value_;

    static std::string format_double(double d) {
        if (!std::isfinite(d)) return "null";  // JSON has no NaN/inf
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        return buf;
    }

    void flatten_into(const std::string& path,
                      std::vector<std::pair<std::string, std::string>>& out) const {
        if (const auto* a = std::get_if<Array>(&value_)) {
            for (std::size_t i = 0; i < a->items.size(); ++i)
                a->items[i].flatten_into(path + "[" + std::to_string(i) + "]", out);
            return;
        }
        if (const auto* o = std::get_if<Object>(&value_)) {
            for (const auto& [key, value] : o->fields)
                value.flatten_into(path.empty() ? key : path + "." + key, out);
            return;
        }
        std::string rendered;
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            rendered = "null";
        } else if (const auto* b = std::get_if<bool>(&value_)) {
            rendered = *b ? "true" : "false";
        } else if (const auto* i = std::get_if<long long>(&value_)) {
            rendered = std::to_string(*i);
        } else if (const auto* d = std::get_if<double>(&value_)) {
            rendered = format_double(*d);
        } else {
            rendered = std::get<std::string>(value_);
        }
        out.emplace_back(path, rendered);
    }

    static void escape_into(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        const std::string closing_pad(static_cast<std::size_t>(indent) * depth, ' ');
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const auto* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const auto* i = std::get_if<long long>(&value_)) {
            out += std::to_string(*i);
        } else if (const auto* d = std::get_if<double>(&value_)) {
            out += format_double(*d);
        } else if (const auto* s = std::get_if<std::string>(&value_)) {
            escape_into(out, *s);
        } else if (const auto* a = std::get_if<Array>(&value_)) {
            if (a->items.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            for (std::size_t k = 0; k < a->items.size(); ++k) {
                out += k ? ",\n" : "\n";
                out += pad;
                a->items[k].write(out, indent, depth + 1);
            }
            out += "\n" + closing_pad + "]";
        } else {
            const auto& fields = std::get<Object>(value_).fields;
            if (fields.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            for (std::size_t k = 0; k < fields.size(); ++k) {
                out += k ? ",\n" : "\n";
                out += pad;
                escape_into(out, fields[k].first);
                out += ": ";
                fields[k].second.write(out, indent, depth + 1);
            }
            out += "\n" + closing_pad + "}";
        }
    }
};

/// %.17g rendering shared with the CSV writers.
inline std::string format_number(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

}  // namespace nestspec::cli
