#ifndef BOSEDYN_ERRORS_HPP
#define BOSEDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bosedyn {

// integration produced non-finite values or tripped the blow-up guard
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double last_finite_time, bool possible_blowup)
        : std::runtime_error(what),
          last_finite_time(last_finite_time),
          possible_blowup(possible_blowup) {}
    double last_finite_time;
    bool possible_blowup;
};

// a configured size/dimension cap would be exceeded
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::string suggestion = {})
        : std::runtime_error(what), suggestion(std::move(suggestion)) {}
    std::string suggestion;
};

// sector-truncation tail criterion unmet
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int suggested_m)
        : std::runtime_error(what), suggested_m(suggested_m) {}
    int suggested_m;
};

}  // namespace bosedyn

#endif
