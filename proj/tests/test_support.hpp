#pragma once

#include <cmath>
#include <string>

#include "doctest.h"

namespace lipext::test {

/// |a - b| <= rel * max(|a|, |b|, 1).
inline bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
}

/// Runs `fn` and returns the what() of the exception of type E it throws.
template <class E, class Fn>
std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "<no exception>";
}

} // namespace lipext::test
