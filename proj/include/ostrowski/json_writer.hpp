#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace ostrowski::jsonio {

// Minimal JSON emitter with a fixed number format: every double is written
// with 17 significant digits so values round-trip through binary64 and the
// serialized report is byte-stable across runs and thread counts.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  std::string take() { return std::move(out_); }
  const std::string& str() const { return out_; }

  Writer& begin_object() {
    element();
    out_ += '{';
    fresh_.push_back(true);
    return *this;
  }
  Writer& end_object() {
    out_ += '}';
    fresh_.pop_back();
    return *this;
  }
  Writer& begin_array() {
    element();
    out_ += '[';
    fresh_.push_back(true);
    return *this;
  }
  Writer& end_array() {
    out_ += ']';
    fresh_.pop_back();
    return *this;
  }

  Writer& key(std::string_view k) {
    element();
    append_string(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }

  Writer& value(double v) {
    element();
    out_ += format_double(v);
    return *this;
  }
  Writer& value(long long v) {
    element();
    out_ += std::to_string(v);
    return *this;
  }
  Writer& value(unsigned long long v) {
    element();
    out_ += std::to_string(v);
    return *this;
  }
  Writer& value(int v) { return value(static_cast<long long>(v)); }
  Writer& value(long v) { return value(static_cast<long long>(v)); }
  Writer& value(unsigned v) { return value(static_cast<unsigned long long>(v)); }
  Writer& value(bool v) {
    element();
    out_ += v ? "true" : "false";
    return *this;
  }
  Writer& value(std::string_view s) {
    element();
    append_string(s);
    return *this;
  }
  Writer& value(const char* s) { return value(std::string_view(s)); }
  Writer& null() {
    element();
    out_ += "null";
    return *this;
  }

 private:
  std::string out_;
  std::vector<bool> fresh_;
  bool pending_value_ = false;

  void element() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_.empty()) {
      if (!fresh_.back()) out_ += ',';
      fresh_.back() = false;
    }
  }

  void append_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }
};

}  // namespace ostrowski::jsonio
