#pragma once

#include <stdexcept>
#include <string>

namespace finray {

class InvalidArgument : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Incompatible tensor/feature shapes. Message carries both shapes.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing/corrupt files, bad manifests, unwritable output paths.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace finray
