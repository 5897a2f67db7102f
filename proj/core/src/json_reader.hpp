#pragma once

#include <algorithm>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "bimnav/error.hpp"
#include "bimnav/geometry.hpp"

namespace bimnav::detail
{

inline nlohmann::json parse_document(std::string_view text, const std::string & what)
{
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte ? byte - 1 : 0), '\n');
    throw ParseError(what + " line " + std::to_string(line), e.what());
  }
}

/// A JSON value that remembers where it came from, for error messages.
class Field
{
public:
  Field(const nlohmann::json & j, std::string path)
  : j_(&j), path_(std::move(path)) {}

  const std::string & path() const {return path_;}
  const nlohmann::json & raw() const {return *j_;}

  bool has(const char * key) const {return j_->is_object() && j_->contains(key);}

  bool is_null() const {return j_->is_null();}

  Field operator[](const char * key) const
  {
    if (!j_->is_object()) {
      fail("expected an object");
    }
    auto it = j_->find(key);
    if (it == j_->end()) {
      throw ParseError(path_, std::string("missing field '") + key + "'");
    }
    return Field(*it, path_ + "." + key);
  }

  Field operator[](std::size_t i) const
  {
    if (!j_->is_array() || i >= j_->size()) {
      fail("missing element " + std::to_string(i));
    }
    return Field((*j_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  Field operator[](int i) const {return (*this)[static_cast<std::size_t>(i)];}

  std::size_t size() const
  {
    if (!j_->is_array()) {
      fail("expected an array");
    }
    return j_->size();
  }

  double number() const
  {
    if (!j_->is_number()) {
      fail("expected a number");
    }
    return j_->get<double>();
  }

  long integer() const
  {
    if (!j_->is_number_integer()) {
      fail("expected an integer");
    }
    return j_->get<long>();
  }

  std::string string() const
  {
    if (!j_->is_string()) {
      fail("expected a string");
    }
    return j_->get<std::string>();
  }

  bool boolean() const
  {
    if (!j_->is_boolean()) {
      fail("expected a boolean");
    }
    return j_->get<bool>();
  }

  /// [x, y] or {"x":..,"y":..}
  Point2 point2() const
  {
    if (j_->is_array()) {
      if (j_->size() != 2) {
        fail("expected [x, y]");
      }
      return {(*this)[0].number(), (*this)[1].number()};
    }
    return {(*this)["x"].number(), (*this)["y"].number()};
  }

  /// [x, y, z] or {"x":..,"y":..,"z":..}
  Point3 point3() const
  {
    if (j_->is_array()) {
      if (j_->size() != 3) {
        fail("expected [x, y, z]");
      }
      return {(*this)[0].number(), (*this)[1].number(), (*this)[2].number()};
    }
    return {(*this)["x"].number(), (*this)["y"].number(), (*this)["z"].number()};
  }

  [[noreturn]] void fail(const std::string & what) const {throw ParseError(path_, what);}

private:
  const nlohmann::json * j_;
  std::string path_;
};

}  // namespace bimnav::detail
