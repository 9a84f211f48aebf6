#pragma once

#include <stdexcept>
#include <string>

namespace esnd {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed sequence descriptor or input file.
class ParseError : public Error {
public:
  using Error::Error;
};

// A precondition on an argument was violated (out of table range, k < 2, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Two descriptors could not be told apart.
class IdenticalSequences : public Error {
public:
  using Error::Error;
};

// Requested size exceeds the configured memory budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

} // namespace esnd
