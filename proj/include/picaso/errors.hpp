#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace picaso {

/// Base for every error raised by the simulator and the models.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AddressOverflow : public Error {
public:
    using Error::Error;
};

class OverlapError : public Error {
public:
    using Error::Error;
};

class ValueOverflow : public Error {
public:
    using Error::Error;
};

class InvalidQ : public Error {
public:
    using Error::Error;
};

/// More register-file accesses in one control word than the dual-port model allows.
class PortConflict : public Error {
public:
    using Error::Error;
};

/// A row was read too soon after it was written for the active pipeline.
class HazardViolation : public Error {
public:
    HazardViolation(std::int64_t cycle, std::uint16_t row, const std::string& what)
        : Error(what), cycle_(cycle), row_(row) {}

    std::int64_t cycle() const noexcept { return cycle_; }
    std::uint16_t row() const noexcept { return row_; }

private:
    std::int64_t cycle_;
    std::uint16_t row_;
};

class UnschedulableHazard : public Error {
public:
    using Error::Error;
};

class ReservationExceedsDepth : public Error {
public:
    using Error::Error;
};

class UnknownDevice : public Error {
public:
    using Error::Error;
};

class UnknownKind : public Error {
public:
    using Error::Error;
};

}  // namespace picaso
