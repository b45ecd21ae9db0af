#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace minop {

/// Exact rational scalar. All arithmetic in the engine is exact; no floating
/// point appears anywhere. Values are kept in lowest terms with positive
/// denominator (GMP canonical form).
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degree/window violations: data requested outside a declared truncation.
struct WindowError : Error {
    using Error::Error;
};

/// Structural axiom failures (non-chain-map, d^2 != 0, operad axiom breach).
struct ValidationError : Error {
    using Error::Error;
};

/// Caller broke a documented precondition (not connected, not tame, ...).
struct PreconditionError : Error {
    using Error::Error;
};

/// Malformed serialized input.
struct SchemaError : Error {
    using Error::Error;
};

/// Parse "p/q" or "p" into a canonical rational.
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(s), Int(1));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw SchemaError("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw SchemaError("malformed rational: " + s);
    }
}

inline std::string rat_str(const Rat& r) { return r.str(); }

}  // namespace minop
