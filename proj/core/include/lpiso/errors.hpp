#pragma once

#include <stdexcept>
#include <string>

namespace lpiso {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map kinds onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// The exponent could not be certified different from 2.
class PEqualsTwoError : public Error {
public:
    using Error::Error;
};

class NegativeInputError : public Error {
public:
    using Error::Error;
};

// A search ran out of budget. This is never a refutation.
class BudgetExhaustedError : public Error {
public:
    using Error::Error;
};

class SimplicityViolationError : public Error {
public:
    using Error::Error;
};

class DomainShapeError : public Error {
public:
    using Error::Error;
};

class ZeroNormError : public Error {
public:
    using Error::Error;
};

class RootNormError : public Error {
public:
    using Error::Error;
};

class ChainViolationError : public Error {
public:
    using Error::Error;
};

class ModulusViolationError : public Error {
public:
    using Error::Error;
};

class IsoCertificationError : public Error {
public:
    using Error::Error;
};

class ExponentMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace lpiso
