#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfo
{

// Base of every exception thrown by the library.
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

class ParseError : public Error
{
    std::size_t _position;

public:
    ParseError( const std::string& what, std::size_t position )
        : Error( what + " at position " + std::to_string( position ) ), _position{ position } {}

    [[nodiscard]] std::size_t position() const { return _position; }
};

// A memo table or state space would exceed the configured cap.
class ResourceError : public Error
{
    std::size_t _cap;

public:
    ResourceError( const std::string& what, std::size_t cap )
        : Error( what + " (cap: --max-positions=" + std::to_string( cap ) + ")" ), _cap{ cap } {}

    [[nodiscard]] std::size_t cap() const { return _cap; }
};

class ArithmeticOverflow : public Error
{
public:
    using Error::Error;
};

} // namespace cfo
