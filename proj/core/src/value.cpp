#include "vetbench/value.hpp"

#include <cctype>
#include <charconv>

#include "vetbench/error.hpp"

namespace vetbench {

std::string Value::to_string() const {
  if (is_integer()) return std::to_string(as_integer());
  return as_symbol();
}

std::optional<Value> Value::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const char first = text.front();
  if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '+') {
    if (first == '+') text.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return Value(v);
  }
  if (!std::isalpha(static_cast<unsigned char>(first)) && first != '_') return std::nullopt;
  for (char c : text) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return std::nullopt;
  }
  return Value(std::string(text));
}

Domain Domain::symbols(std::vector<std::string> names) {
  Domain d;
  d.integer_ = false;
  d.symbols_ = std::move(names);
  return d;
}

Domain Domain::range(std::int64_t lo, std::int64_t hi) {
  Domain d;
  d.integer_ = true;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

bool Domain::contains(const Value& v) const {
  if (integer_) return v.is_integer() && v.as_integer() >= lo_ && v.as_integer() <= hi_;
  if (!v.is_symbol()) return false;
  for (const auto& s : symbols_) {
    if (s == v.as_symbol()) return true;
  }
  return false;
}

std::size_t Domain::size() const {
  if (integer_) return hi_ < lo_ ? 0 : static_cast<std::size_t>(hi_ - lo_ + 1);
  return symbols_.size();
}

Value Domain::at(std::size_t i) const {
  if (i >= size()) throw Error("domain index out of range");
  if (integer_) return Value(lo_ + static_cast<std::int64_t>(i));
  return Value(symbols_[i]);
}

std::vector<Value> Domain::values() const {
  std::vector<Value> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
  return out;
}

}  // namespace vetbench
