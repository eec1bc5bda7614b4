#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stopdur {

// double rendered with 12 significant digits; throws numerical_error on a
// non-finite input (the CLI maps that to its numerical-failure exit code)
std::string format_significant(double v);

// flat ordered record emitted by the CLI, one scalar or numeric array per key
class report {
  public:
    void put(const std::string& key, double v);
    void put(const std::string& key, long long v);
    void put(const std::string& key, std::uint64_t v);
    void put(const std::string& key, int v);
    void put(const std::string& key, bool v);
    void put(const std::string& key, const char* v);
    void put(const std::string& key, const std::string& v);
    void put(const std::string& key, const std::vector<double>& v);

    // single JSON object, keys in insertion order, UTF-8
    std::string to_json() const;

    // RFC-4180 with a "parameter,value" header row; an array under `key`
    // becomes rows key_1 .. key_n
    std::string to_csv() const;

  private:
    using entry_value = std::variant<double, long long, std::uint64_t, bool,
                                     std::string, std::vector<double>>;
    std::vector<std::pair<std::string, entry_value>> items_;
};

} // namespace stopdur
