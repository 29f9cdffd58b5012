// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace jamloc {

enum class ErrorKind {
    Domain,            // input outside the mathematical domain of an operation
    SingularGeometry,  // localization system is rank deficient
    Config,            // invalid configuration or precondition on user input
    EmptyReport,       // aggregation over zero successful trials
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct SingularGeometryError : Error {
    explicit SingularGeometryError(const std::string& what) : Error(ErrorKind::SingularGeometry, what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct EmptyReportError : Error {
    explicit EmptyReportError(const std::string& what) : Error(ErrorKind::EmptyReport, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace jamloc
