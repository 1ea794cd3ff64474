#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dia {

// Base for every domain error the toolkit raises. The CLI maps these to
// exit status 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

// Records from more than one recording were handed to a per-recording op.
class RecordingMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class MissingActivity : public Error {
 public:
  using Error::Error;
};

// Scoring a non-empty hypothesis against an empty reference.
class UndefinedDer : public Error {
 public:
  using Error::Error;
};

// Line-oriented text parse failure (RTTM, proposal lines).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string text, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        text_(std::move(text)),
        reason_(std::move(reason)) {}

  std::size_t line() const { return line_; }
  const std::string &text() const { return text_; }
  const std::string &reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string text_;
  std::string reason_;
};

class EmbeddingFormatError : public Error {
 public:
  enum class Kind {
    kBadMagic,
    kUnsupportedVersion,
    kTruncated,
    kTrailingData,
    kZeroDim,
    kBadValue,
  };

  EmbeddingFormatError(Kind kind, const std::string &what)
      : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace dia
