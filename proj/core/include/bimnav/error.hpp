#pragma once

#include <stdexcept>
#include <string>

namespace bimnav
{

/// Base class for every error raised by the navigation stack.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `where` is a line number or a field path.
class ParseError : public Error
{
public:
  ParseError(const std::string & where, const std::string & what)
  : Error(where + ": " + what), where_(where) {}

  const std::string & where() const {return where_;}

private:
  std::string where_;
};

/// A reference to an id that does not exist.
class ReferenceError : public Error
{
public:
  explicit ReferenceError(std::string id, const std::string & context)
  : Error(context + ": unknown id '" + id + "'"), id_(std::move(id)) {}

  const std::string & id() const {return id_;}

private:
  std::string id_;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// No route exists between two places (semantic or metric).
class NoPathError : public Error
{
public:
  using Error::Error;
};

}  // namespace bimnav
