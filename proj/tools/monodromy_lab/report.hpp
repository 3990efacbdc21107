#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace monodromy::lab {

// 17-significant-digit decimal rendering; round-trips every finite double.
std::string format_double(double v);

// JSON string literal with escaping.
std::string json_quote(const std::string& s);

// Minimal streaming JSON writer with deterministic layout: objects and
// arrays are emitted inline in insertion order, numbers via format_double.
class JsonWriter {
public:
  std::string take() { return std::move(out_); }

  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& name);
  void value(double v);
  void value_int(long long v);
  void value(const std::string& s);
  void value(const char* s) { value(std::string(s)); }
  void value_bool(bool b);

private:
  void separate();
  std::string out_;
  std::vector<bool> has_item_; // per open container
  bool pending_key_ = false;
};

// Writes content to path via a temporary file in the same directory and an
// atomic rename; creates parent directories as needed.
void atomic_write(const std::filesystem::path& path,
                  const std::string& content);

} // namespace monodromy::lab
