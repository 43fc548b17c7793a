#pragma once

#include <stdexcept>
#include <string>

namespace isoforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
    public:
        using Error::Error;
};

/// A curve or sextic failed its nonsingularity condition.
class DegenerateCurve : public Error
{
    public:
        using Error::Error;
};

class SingularCurve : public Error
{
    public:
        using Error::Error;
};

/// The requested prime divides a discriminant (or coefficient) that must be a unit.
class BadPrime : public Error
{
    public:
        using Error::Error;
};

class UnsupportedPrime : public Error
{
    public:
        using Error::Error;
};

class InsufficientPrimes : public Error
{
    public:
        using Error::Error;
};

class BudgetExceeded : public Error
{
    public:
        using Error::Error;
};

class InvalidConfiguration : public Error
{
    public:
        using Error::Error;
};

} // namespace isoforge
