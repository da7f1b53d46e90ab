#pragma once

#include <stdexcept>
#include <string>

namespace chemotaxis {

// Invalid or inconsistent configuration (CLI exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File read/write or persistence-format failure (CLI exit status 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite loss/parameters or a diverging episode (CLI exit status 4).
class TrainingFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chemotaxis
