#pragma once

#include <stdexcept>
#include <string>

namespace ganet {

// Failure categories map 1:1 onto CLI exit codes: input 2, config 3, compute 4.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 4; }
};

// Problems with user-supplied data: unreadable files, malformed CSV cells,
// zero-signal samples, unknown labels.
class input_error : public error {
public:
    explicit input_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 2; }
};

// Invalid parameter values or combinations.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 3; }
};

// Failures while computing: non-convergence, incompatible model/data shapes.
class compute_error : public error {
public:
    explicit compute_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 4; }
};

} // namespace ganet
