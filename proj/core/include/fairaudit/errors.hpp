#pragma once

#include <stdexcept>
#include <string>

namespace fairaudit {

/// Base class for every error raised by the audit engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Missing header, unknown column, malformed record or an invalid schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Label or prediction columns that cannot be read as a binary outcome.
class LabelError : public Error {
public:
    using Error::Error;
};

/// No usable rows survived ingestion.
class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

/// Unknown or duplicate metric identifiers.
class RegistryError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration files or values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reference to a dataset or group id that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Arguments that violate an operation's precondition.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace fairaudit
