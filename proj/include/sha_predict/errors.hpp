#pragma once

#include <stdexcept>
#include <string>

namespace sha_predict {

// Malformed or out-of-domain input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A bounded search ran out of room (conductor search, unit powers,
// class-number size limit, Pell period scan).
class SearchExhausted : public std::runtime_error {
public:
    SearchExhausted(const std::string& what, long long bound)
        : std::runtime_error(what + " (bound " + std::to_string(bound) + ")"), bound_(bound) {}

    long long bound() const noexcept { return bound_; }

private:
    long long bound_;
};

// Network or transport failure talking to the curve database.
class FetchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A response or cache document did not have the expected shape.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sha_predict
