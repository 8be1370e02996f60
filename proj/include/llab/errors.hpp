#pragma once

#include <stdexcept>
#include <string>

namespace llab {

// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad indices, shape mismatches, unparsable files.
class MalformedInput : public Error {
public:
    using Error::Error;
};

// A size cap or recursion budget would be exceeded. Never silently truncated.
class ResourceError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its domain (e.g. non-realizable input to
// conservative SOA, a randomized learner handed to a forcing adversary).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace llab
