#pragma once

#include <stdexcept>
#include <string>

namespace urbancool {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct AlignmentError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};
struct DuplicateError : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};
struct DegenerateX : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct NearLimitError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace urbancool
