#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace champagne {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a function or a precondition fails.
class DomainError : public Error {
public:
    using Error::Error;
};

// An integer quantity (tower value, intermediate-ball offset) does not fit 64 bits.
class OverflowError : public Error {
public:
    using Error::Error;
};

class UnderflowRadius : public Error {
public:
    UnderflowRadius(long shell, double log_radius)
        : Error("bubble radius underflows double precision at shell k=" + std::to_string(shell) +
                " (log r = " + std::to_string(log_radius) + ")"),
          shell_(shell), log_radius_(log_radius) {}
    long shell() const noexcept { return shell_; }
    double log_radius() const noexcept { return log_radius_; }

private:
    long shell_;
    double log_radius_;
};

class HorizonExceeded : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class NetTooLarge : public Error {
public:
    NetTooLarge(std::uint64_t required, std::uint64_t cap)
        : Error("net needs about " + std::to_string(required) + " points, cap is " + std::to_string(cap)),
          required_(required) {}
    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

class DisjointnessViolation : public Error {
public:
    using Error::Error;
};

class InsideObstacle : public Error {
public:
    using Error::Error;
};

}  // namespace champagne
