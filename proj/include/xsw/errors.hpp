#pragma once

#include <stdexcept>
#include <string>

namespace xsw {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// xml-core
class WellFormednessError : public Error {
public:
    using Error::Error;
};

/// DTDs, processing instructions, external/undefined entities. These are
/// rejected outright instead of being skipped or expanded.
class UnsupportedConstruct : public Error {
public:
    using Error::Error;
};

class CanonicalizationError : public Error {
public:
    using Error::Error;
};

/// Zero or more than one node carries the requested ID value.
class AmbiguityError : public Error {
public:
    enum class Kind { ZeroMatches, MultipleMatches };

    AmbiguityError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// fastxpath
class SubsetViolation : public Error {
public:
    using Error::Error;
};

class AmbiguityUnresolvable : public Error {
public:
    using Error::Error;
};

// structure-guard
class UnknownProfile : public Error {
public:
    using Error::Error;
};

class ProfileParseError : public Error {
public:
    using Error::Error;
};

// xmldsig
class PolicyViolation : public Error {
public:
    using Error::Error;
};

class CryptoError : public Error {
public:
    using Error::Error;
};

class NotAccepted : public Error {
public:
    using Error::Error;
};

// attack-forge
class TargetNotFound : public Error {
public:
    using Error::Error;
};

class AlreadyAttacked : public Error {
public:
    using Error::Error;
};

}  // namespace xsw
