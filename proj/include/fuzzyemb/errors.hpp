#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyemb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (points vs. centers, rows vs. labels, ...).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Arguments outside their documented domain (m <= 1, c < 2, N < c, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed input text: embedding or similarity files.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// All centers coincide, so the Xie-Beni separation term is zero.
class DegenerateSeparation : public Error {
public:
    using Error::Error;
};

/// A solver could not continue (non-finite objective, persistent fallback).
class SolverAbort : public Error {
public:
    using Error::Error;
};

/// No requested word was found in the embedding table.
class EmptyIntersection : public Error {
public:
    using Error::Error;
};

class UnknownWord : public Error {
public:
    explicit UnknownWord(std::string word)
        : Error("unknown word '" + word + "'"), word_(std::move(word)) {}

    const std::string& word() const noexcept { return word_; }

private:
    std::string word_;
};

}  // namespace fuzzyemb
