#ifndef CANNINGS_TOML_HPP
#define CANNINGS_TOML_HPP

#include <map>
#include <string>
#include <vector>

namespace cannings {

// Minimal TOML-style value tree: tables, arrays of tables, dotted keys,
// strings, numbers, booleans, arrays (nestable), inline tables.
struct TomlValue {
    enum class Type { None, Bool, Int, Float, String, Array, Table };

    Type type = Type::None;
    bool b = false;
    long long i = 0;
    double f = 0.0;
    std::string s;
    std::vector<TomlValue> array;
    std::map<std::string, TomlValue> table;
    int line = 0;

    bool is_table() const { return type == Type::Table; }
    bool is_array() const { return type == Type::Array; }
    bool is_number() const { return type == Type::Int || type == Type::Float; }
    bool is_string() const { return type == Type::String; }
    bool is_bool() const { return type == Type::Bool; }

    double as_double() const { return type == Type::Int ? static_cast<double>(i) : f; }

    const TomlValue* find(const std::string& key) const {
        auto it = table.find(key);
        return it == table.end() ? nullptr : &it->second;
    }
};

// throws ValidationError with a line reference on malformed input
TomlValue parse_toml(const std::string& text);

}  // namespace cannings

#endif
