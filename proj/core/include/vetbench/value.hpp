#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vetbench {

/// A device value: either an enumerated symbol (ON, OPEN, ...) or an integer
/// reading (temperatures and other bounded ranges).
class Value {
 public:
  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t v) : data_(v) {}  // NOLINT(google-explicit-constructor)
  Value(int v) : data_(std::int64_t{v}) {}  // NOLINT(google-explicit-constructor)
  Value(std::string symbol) : data_(std::move(symbol)) {}  // NOLINT
  Value(const char* symbol) : data_(std::string(symbol)) {}  // NOLINT

  bool is_integer() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_symbol() const { return std::holds_alternative<std::string>(data_); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(data_); }
  const std::string& as_symbol() const { return std::get<std::string>(data_); }

  std::string to_string() const;

  /// Integers parse as integers, identifiers as symbols.
  static std::optional<Value> parse(std::string_view text);

  friend bool operator==(const Value&, const Value&) = default;
  friend bool operator<(const Value& a, const Value& b) { return a.data_ < b.data_; }

 private:
  std::variant<std::int64_t, std::string> data_;
};

/// Finite ordered set of values a device may take.
class Domain {
 public:
  static Domain symbols(std::vector<std::string> names);
  static Domain range(std::int64_t lo, std::int64_t hi);

  bool is_integer() const { return integer_; }
  bool contains(const Value& v) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// Value at position `i` in domain order.
  Value at(std::size_t i) const;
  std::vector<Value> values() const;

  const std::vector<std::string>& symbol_names() const { return symbols_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  bool integer_ = false;
  std::vector<std::string> symbols_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = -1;
};

}  // namespace vetbench
