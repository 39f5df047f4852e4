// Copyright 2026 The qroof Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reader for the TOML subset used by hardware description files: comments,
// `key = value` pairs, [table] headers, inline tables, arrays, basic strings,
// integers, floats and booleans. Produces the equivalent JSON value.

#include <cctype>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "qroof/error.hpp"

namespace qroof::toml_lite {

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  nlohmann::json parse_document() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        nlohmann::json* t = &root;
        while (true) {
          const auto key = parse_key();
          auto& next = (*t)[key];
          if (next.is_null()) next = nlohmann::json::object();
          if (!next.is_object()) fail(fmt::format("'{}' is not a table", key));
          t = &next;
          skip_ws();
          if (peek() == '.') {
            ++pos_;
            skip_ws();
            continue;
          }
          break;
        }
        expect(']');
        table = t;
      } else {
        parse_pair(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n';
    throw ParseError(fmt::format("{}: line {}: {}", source_, line, what));
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }

  // Whitespace, comments and newlines (allowed inside arrays).
  void skip_all() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void skip_blank_lines() { skip_all(); }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!eof() && peek() != '\n') fail(fmt::format("unexpected '{}'", peek()));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::string parse_key() {
    if (peek() == '"') return parse_string();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                      peek() == '-')) {
      key += text_[pos_++];
    }
    if (key.empty()) fail("expected key");
    return key;
  }

  void parse_pair(nlohmann::json& table) {
    const auto key = parse_key();
    expect('=');
    skip_ws();
    if (table.contains(key)) fail(fmt::format("duplicate key '{}'", key));
    table[key] = parse_value();
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: fail(fmt::format("unsupported escape '\\{}'", e));
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  nlohmann::json parse_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == '_')) {
      if (peek() != '_') tok += peek();
      ++pos_;
    }
    if (tok.empty()) fail("expected value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos &&
                          tok.rfind("0x", 0) != 0;
    std::size_t used = 0;
    try {
      if (is_float) {
        const double d = std::stod(tok, &used);
        if (used == tok.size()) return d;
      } else {
        const long long i = std::stoll(tok, &used, 10);
        if (used == tok.size()) return i;
      }
    } catch (const std::exception&) {
    }
    fail(fmt::format("invalid value '{}'", tok));
  }

  nlohmann::json parse_value() {
    skip_ws();
    const char c = peek();
    if (c == '"') return parse_string();
    if (c == '[') {
      ++pos_;
      nlohmann::json arr = nlohmann::json::array();
      skip_all();
      while (peek() != ']') {
        arr.push_back(parse_value());
        skip_all();
        if (peek() == ',') {
          ++pos_;
          skip_all();
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      ++pos_;
      return arr;
    }
    if (c == '{') {
      ++pos_;
      nlohmann::json obj = nlohmann::json::object();
      skip_ws();
      while (peek() != '}') {
        parse_pair(obj);
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          skip_ws();
        } else if (peek() != '}') {
          fail("expected ',' or '}' in inline table");
        }
      }
      ++pos_;
      return obj;
    }
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline nlohmann::json parse(std::string_view text, std::string_view source = "toml") {
  return detail::Parser(text, source).parse_document();
}

}  // namespace qroof::toml_lite
