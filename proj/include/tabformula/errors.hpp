#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tabformula {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AddressParseError : public Error {
 public:
  using Error::Error;
};

class NotANumber : public Error {
 public:
  using Error::Error;
};

class NotADataCell : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t begin, std::size_t end)
      : Error(what + " at [" + std::to_string(begin) + ", " + std::to_string(end) + ")"),
        begin_(begin),
        end_(end) {}

  std::size_t begin() const { return begin_; }
  std::size_t end() const { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

class DanglingReference : public Error {
 public:
  using Error::Error;
};

class MissingHeader : public Error {
 public:
  using Error::Error;
};

class UnreachableReference : public Error {
 public:
  using Error::Error;
};

class TextTooLong : public Error {
 public:
  using Error::Error;
};

class GoldParseError : public Error {
 public:
  using Error::Error;
};

class EmptyEvalSet : public Error {
 public:
  using Error::Error;
};

class VocabError : public Error {
 public:
  using Error::Error;
};

/// Input document does not match the table schema. `pointer` is a JSON pointer
/// into the offending document.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, std::string pointer, const std::string& message)
      : Error(path + ":" + pointer + ": " + message),
        path_(std::move(path)),
        pointer_(std::move(pointer)) {}

  const std::string& path() const { return path_; }
  const std::string& pointer() const { return pointer_; }

 private:
  std::string path_;
  std::string pointer_;
};

}  // namespace tabformula
