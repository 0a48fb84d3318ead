#pragma once

#include <stdexcept>
#include <string>

namespace skucast {

/// Malformed or inconsistent input data (CSV rows, calendars, shapes).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid run configuration (bad flag values, unreadable config file).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace skucast
