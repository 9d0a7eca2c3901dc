// Error types raised by the numerical kernels.
#ifndef ISO3BP_ERRORS_HPP
#define ISO3BP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace iso3bp {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// R or S fell below the collision floor; t_reached is where integration gave up.
class CollisionError : public Error {
public:
    CollisionError(const std::string& what, double t_reached)
        : Error(what), t_reached(t_reached) {}
    double t_reached;
};

// Step control asked for a step below min_step (approach to a singularity).
class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(const std::string& what, double t_reached)
        : Error(what), t_reached(t_reached) {}
    double t_reached;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

class ZeroTangent : public Error {
public:
    using Error::Error;
};

class NoInteriorMinimum : public Error {
public:
    using Error::Error;
};

class TargetOutOfRange : public Error {
public:
    using Error::Error;
};

} // namespace iso3bp

#endif
