#pragma once

#include <stdexcept>
#include <string>

namespace nlsearch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContractViolation : Error {
    using Error::Error;
};

struct SchemaConfigError : Error {
    using Error::Error;
};

struct DuplicateFieldError : SchemaConfigError {
    using SchemaConfigError::SchemaConfigError;
};

struct UnknownFieldError : Error {
    using Error::Error;
};

struct EmptyQueryError : Error {
    using Error::Error;
};

struct BackendUnavailable : Error {
    explicit BackendUnavailable(const std::string& what, bool retryable = false)
        : Error(what), retryable(retryable) {}
    bool retryable;
};

struct AuthError : Error {
    using Error::Error;
};

struct CompileContractError : Error {
    using Error::Error;
};

struct EmbeddingError : Error {
    using Error::Error;
};

struct DatasetError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace nlsearch
