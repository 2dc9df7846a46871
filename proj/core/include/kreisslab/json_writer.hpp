#pragma once

#include <string>
#include <vector>

namespace kreisslab {

/// Minimal streaming JSON writer. Numbers are emitted with the shortest
/// decimal representation that round-trips (std::to_chars), keys in the exact
/// order they are written, no whitespace variation -- two runs that write the
/// same values produce byte-identical output.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(std::size_t v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null_value();

  JsonWriter& kv(const std::string& k, double v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, long long v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, int v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, bool v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const std::string& v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const char* v) { return key(k).value(v); }

  const std::string& str() const { return out_; }

  /// Shortest round-trip decimal form of a double (helper shared with CSV).
  static std::string number(double v);

private:
  void comma();
  std::string out_;
  std::vector<bool> need_comma_;
};

} // namespace kreisslab
