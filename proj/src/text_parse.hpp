#pragma once

// Line/token helpers shared by the text readers.

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "salscp/errors.hpp"

namespace salscp::detail {

class LineReader {
public:
  LineReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  /// Next non-blank, non-comment line split on whitespace. False at EOF.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      tokens.clear();
      std::size_t pos = 0;
      while (pos < line_.size()) {
        while (pos < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos]))) ++pos;
        if (pos > start) tokens.emplace_back(line_.data() + start, pos - start);
      }
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(what_ + " line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t parse_size(std::string_view tok) const {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected a non-negative integer, got '" + std::string(tok) + "'");
    return v;
  }

  double parse_double(std::string_view tok) const {
    double v = 0.0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      fail("expected a finite real, got '" + std::string(tok) + "'");
    }
    return v;
  }

private:
  std::istream& in_;
  std::string what_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace salscp::detail
