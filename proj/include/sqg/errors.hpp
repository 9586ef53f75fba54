#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

// Bad or inconsistent configuration (file parse, field validation, grid
// mismatch). Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A trace certificate diverges for the requested noise parameters.
class DivergentTraceError : public ConfigError {
  public:
    explicit DivergentTraceError(const std::string& what) : ConfigError(what) {}
};

// Runtime failure of a simulation (non-finite coefficients or the H^1
// ceiling exceeded). Maps to CLI exit code 2.
class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(const std::string& what, double t, double h1)
        : std::runtime_error(what), time(t), h1_norm(h1) {}
    double time;
    double h1_norm;
};

// A delayed-velocity evaluation was requested outside the buffered window.
class InsufficientHistoryError : public std::runtime_error {
  public:
    InsufficientHistoryError(const std::string& what, double required_from,
                             double required_to)
        : std::runtime_error(what), from(required_from), to(required_to) {}
    double from;
    double to;
};

// Hypothesis (E2) fails: a mode inside the projection ball has zero noise.
class DegenerateModeError : public std::runtime_error {
  public:
    DegenerateModeError(const std::string& what, int k1_, int k2_)
        : std::runtime_error(what), k1(k1_), k2(k2_) {}
    int k1;
    int k2;
};

}  // namespace sqg
