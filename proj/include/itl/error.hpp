#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itl {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a 0-based byte offset into the input.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A formula uses F (or g) where only the F-free language is allowed.
class LanguageError : public Error {
public:
  explicit LanguageError(const std::string& message) : Error(message) {}
  LanguageError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_ = 0;
};

/// Unknown moment, unknown leaf, or a leaf whose history misses the moment.
class InvalidPoint : public Error {
public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured bound.
class BoundError : public Error {
public:
  using Error::Error;
};

/// A point map that is partial, inconsistent, or names foreign points.
class MapError : public Error {
public:
  using Error::Error;
};

/// A JSON document that does not follow the documented schema.
class DocumentError : public Error {
public:
  using Error::Error;
};

}  // namespace itl
