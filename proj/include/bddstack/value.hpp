#ifndef BDDSTACK_VALUE_HPP
#define BDDSTACK_VALUE_HPP

#include <bddstack/error.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bddstack {

struct Null {
  friend bool operator==(Null, Null) = default;
};

/// Immutable data carried by step parameters, matcher operands and double
/// call arguments.
///
/// Equality is structural. Floats compare by bit pattern, except that every
/// NaN equals every other NaN, so equality stays an equivalence relation and
/// agrees exactly with canonical_encode.
class Value {
public:
  using Seq = std::vector<Value>;
  using Map = std::vector<std::pair<std::string, Value>>;
  using Storage = std::variant<Null, bool, std::int64_t, double, std::string, Seq, Map>;

  enum class Kind : std::uint8_t { Null, Bool, Int, Float, Text, Seq, Map };

  Value() = default;
  Value(Null) {}
  Value(bool b) : data_(b) {}
  Value(int i) : data_(std::int64_t{i}) {}
  Value(long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(long long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(double d) : data_(d) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(std::string_view s) : data_(std::string(s)) {}
  Value(Seq items) : data_(std::move(items)) {}

  static Value seq(std::initializer_list<Value> items) { return Value(Seq(items)); }

  /// Builds a Map, rejecting duplicate keys with a ConfigError.
  static Value map(Map entries) {
    for (std::size_t i = 0; i < entries.size(); ++i)
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].first == entries[j].first)
          fail_config("duplicate map key '" + entries[i].first + "'");
    Value v;
    v.data_ = std::move(entries);
    return v;
  }

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }

  bool is_null() const noexcept { return kind() == Kind::Null; }
  bool is_bool() const noexcept { return kind() == Kind::Bool; }
  bool is_int() const noexcept { return kind() == Kind::Int; }
  bool is_float() const noexcept { return kind() == Kind::Float; }
  bool is_text() const noexcept { return kind() == Kind::Text; }
  bool is_seq() const noexcept { return kind() == Kind::Seq; }
  bool is_map() const noexcept { return kind() == Kind::Map; }

  const bool* if_bool() const noexcept { return std::get_if<bool>(&data_); }
  const std::int64_t* if_int() const noexcept { return std::get_if<std::int64_t>(&data_); }
  const double* if_float() const noexcept { return std::get_if<double>(&data_); }
  const std::string* if_text() const noexcept { return std::get_if<std::string>(&data_); }
  const Seq* if_seq() const noexcept { return std::get_if<Seq>(&data_); }
  const Map* if_map() const noexcept { return std::get_if<Map>(&data_); }

  const Storage& storage() const noexcept { return data_; }

  friend bool operator==(const Value& a, const Value& b);

private:
  Storage data_;
};

namespace detail {

inline bool float_eq(double a, double b) noexcept {
  if (std::isnan(a) || std::isnan(b))
    return std::isnan(a) && std::isnan(b);
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace detail

inline bool operator==(const Value& a, const Value& b) {
  if (a.kind() != b.kind())
    return false;
  switch (a.kind()) {
    case Value::Kind::Null: return true;
    case Value::Kind::Bool: return *a.if_bool() == *b.if_bool();
    case Value::Kind::Int: return *a.if_int() == *b.if_int();
    case Value::Kind::Float: return detail::float_eq(*a.if_float(), *b.if_float());
    case Value::Kind::Text: return *a.if_text() == *b.if_text();
    case Value::Kind::Seq: return *a.if_seq() == *b.if_seq();
    case Value::Kind::Map: return *a.if_map() == *b.if_map();
  }
  return false;
}

inline bool value_eq(const Value& a, const Value& b) { return a == b; }

/// Format version of canonical_encode, stored in the high nibble of every
/// tag byte.
inline constexpr std::uint8_t canonical_encoding_version = 1;

namespace detail {

inline void put_u64(std::string& out, std::uint64_t x) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>((x >> shift) & 0xff));
}

inline void put_tag(std::string& out, Value::Kind kind) {
  out.push_back(static_cast<char>((canonical_encoding_version << 4) |
                                  static_cast<std::uint8_t>(kind)));
}

inline void encode_into(std::string& out, const Value& v) {
  put_tag(out, v.kind());
  switch (v.kind()) {
    case Value::Kind::Null:
      break;
    case Value::Kind::Bool:
      out.push_back(*v.if_bool() ? 1 : 0);
      break;
    case Value::Kind::Int:
      put_u64(out, static_cast<std::uint64_t>(*v.if_int()));
      break;
    case Value::Kind::Float: {
      double d = *v.if_float();
      put_u64(out, std::isnan(d) ? std::uint64_t{0x7ff8000000000000}
                                 : std::bit_cast<std::uint64_t>(d));
      break;
    }
    case Value::Kind::Text:
      put_u64(out, v.if_text()->size());
      out += *v.if_text();
      break;
    case Value::Kind::Seq:
      put_u64(out, v.if_seq()->size());
      for (const auto& item : *v.if_seq())
        encode_into(out, item);
      break;
    case Value::Kind::Map:
      put_u64(out, v.if_map()->size());
      for (const auto& [key, item] : *v.if_map()) {
        put_u64(out, key.size());
        out += key;
        encode_into(out, item);
      }
      break;
  }
}

}  // namespace detail

/// Deterministic, injective byte encoding: equal bytes iff equal Values.
///
/// Layout: one tag byte (version << 4 | kind), then a big-endian payload.
/// Text, Seq and Map payloads are length-prefixed with a 64-bit count.
/// The bytes never leave the process.
inline std::string canonical_encode(const Value& v) {
  std::string out;
  detail::encode_into(out, v);
  return out;
}

inline std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static constexpr char hex[] = "0123456789abcdef";
          out += "\\u00";
          out.push_back(hex[(c >> 4) & 0xf]);
          out.push_back(hex[c & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

inline std::string render_float(double d) {
  if (std::isnan(d))
    return "nan";
  if (std::isinf(d))
    return d < 0 ? "-inf" : "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos)
    out += ".0";
  return out;
}

/// Canonical human-readable rendering used in failure messages and reports.
///
/// Ints print as decimals, Floats always carry a '.' or exponent, Text is
/// double-quoted with escapes, Seq as `[a, b]` and Map as `{"k": v}`.
inline std::string render(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return "null";
    case Value::Kind::Bool: return *v.if_bool() ? "true" : "false";
    case Value::Kind::Int: return std::to_string(*v.if_int());
    case Value::Kind::Float: return render_float(*v.if_float());
    case Value::Kind::Text: return quote(*v.if_text());
    case Value::Kind::Seq: {
      std::string out = "[";
      bool first = true;
      for (const auto& item : *v.if_seq()) {
        if (!first)
          out += ", ";
        first = false;
        out += render(item);
      }
      return out + "]";
    }
    case Value::Kind::Map: {
      std::string out = "{";
      bool first = true;
      for (const auto& [key, item] : *v.if_map()) {
        if (!first)
          out += ", ";
        first = false;
        out += quote(key) + ": " + render(item);
      }
      return out + "}";
    }
  }
  return {};
}

/// Numeric view of Int and Float values, for matchers that compare numbers.
inline std::optional<double> as_number(const Value& v) {
  if (auto i = v.if_int())
    return static_cast<double>(*i);
  if (auto d = v.if_float())
    return *d;
  return std::nullopt;
}

inline std::string render_args(const std::vector<Value>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i)
      out += ", ";
    out += render(args[i]);
  }
  return out;
}

}  // namespace bddstack

#endif  // BDDSTACK_VALUE_HPP
