#pragma once

#include <stdexcept>
#include <string>

namespace pcss {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape disagreement between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid argument values (counts out of range, missing seed, bad config).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Numerically rank-deficient input where full rank is required, or a
// request for more independent columns than the data supports.
class RankError : public Error {
public:
    using Error::Error;
};

// A factorization backend failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// An empty Voronoi set reached an operation that cannot repair it.
class DegenerateSetError : public Error {
public:
    using Error::Error;
};

// Malformed input file; message carries line/offset context.
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input carrying inadmissible values (NaN/Inf entries).
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace pcss
