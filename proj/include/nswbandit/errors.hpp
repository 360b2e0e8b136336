#pragma once

#include <stdexcept>
#include <string>

namespace nswbandit {

// Shapes of two operands disagree (policy length vs. reward matrix columns, ...).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A scalar parameter is outside its documented domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Runtime contract violated by a caller (reward outside [0,1], round past horizon, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An internal guarantee could not be met; indicates a bug, not bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nswbandit
