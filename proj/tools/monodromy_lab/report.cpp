#include "monodromy_lab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace monodromy::lab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
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
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_item_.empty()) {
    if (has_item_.back()) out_ += ',';
    has_item_.back() = true;
  }
}

void JsonWriter::begin_object() {
  separate();
  out_ += '{';
  has_item_.push_back(false);
}

void JsonWriter::end_object() {
  out_ += '}';
  has_item_.pop_back();
}

void JsonWriter::begin_array() {
  separate();
  out_ += '[';
  has_item_.push_back(false);
}

void JsonWriter::end_array() {
  out_ += ']';
  has_item_.pop_back();
}

void JsonWriter::key(const std::string& name) {
  if (has_item_.back()) out_ += ',';
  has_item_.back() = true;
  out_ += json_quote(name);
  out_ += ':';
  pending_key_ = true;
}

void JsonWriter::value(double v) {
  separate();
  out_ += format_double(v);
}

void JsonWriter::value_int(long long v) {
  separate();
  out_ += std::to_string(v);
}

void JsonWriter::value(const std::string& s) {
  separate();
  out_ += json_quote(s);
}

void JsonWriter::value_bool(bool b) {
  separate();
  out_ += b ? "true" : "false";
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f.write(content.data(),
            static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

} // namespace monodromy::lab
