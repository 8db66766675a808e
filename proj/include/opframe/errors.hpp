#pragma once

#include <stdexcept>
#include <string>

namespace opframe {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NotPSD : public Error {
public:
    using Error::Error;
};

/// The quadratic-form matrix of a frame middle term failed its Hermiticity gate.
class NonHermitianMiddle : public Error {
public:
    NonHermitianMiddle(const std::string& msg, double defect)
        : Error(msg + " (hermitian defect " + std::to_string(defect) + ")"), defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_ = 0.0;
};

class NotPositive : public Error {
public:
    using Error::Error;
};

class NonCommutingControllers : public Error {
public:
    NonCommutingControllers(const std::string& msg, double defect)
        : Error(msg + " (symmetry defect " + std::to_string(defect) + ")"), defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_ = 0.0;
};

/// Factorization target lies outside the reachable range; carries the residual.
class NoSolution : public Error {
public:
    NoSolution(const std::string& msg, double residual)
        : Error(msg + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_ = 0.0;
};

class TooManyVectors : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

/// A checker landed inside the tolerance band where neither verdict is sound.
class Inconclusive : public Error {
public:
    using Error::Error;
};

class DegenerateK : public Error {
public:
    using Error::Error;
};

class NotPositiveInvertible : public Error {
public:
    using Error::Error;
};

class InfeasibleSpec : public Error {
public:
    using Error::Error;
};

/// Malformed input document; message carries the JSON path of the offending field.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace opframe
