#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stj/error.hpp"
#include "stj/io.hpp"

namespace stj::io {

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) x = 0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

void emit(const json& j, std::ostringstream& os, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        emit(it.value(), os, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& x : j) flat = flat && x.is_primitive();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(j[i], os, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        emit(j[i], os, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      if (std::isfinite(x)) os << fmt12(x);
      else os << '"' << fmt12(x) << '"';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_stable(const json& j) {
  std::ostringstream os;
  emit(j, os, 0);
  os << "\n";
  return os.str();
}

std::string dump_exact(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path);
  out << text;
  if (!out) fail(Errc::IoError, "write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) fail(Errc::InvalidArgument, "csv header and column count differ");
  std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& c : columns)
    if (c.size() != rows) fail(Errc::InvalidArgument, "csv columns differ in length");
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << fmt12(columns[i][r]);
    os << "\n";
  }
  write_text(path, os.str());
}

}  // namespace stj::io
