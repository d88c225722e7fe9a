#pragma once
#include <stdexcept>
#include <string>

namespace uqp {

// config_error -> exit 2, data_error -> exit 3, divergence_error -> exit 4 in the cli
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct divergence_error : std::runtime_error {
    explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace uqp
