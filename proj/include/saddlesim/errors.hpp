#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace saddlesim {

/// Base for every error the library throws. `kind()` is a short
/// machine-readable tag used by the CLI's one-line error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, int line, const std::string &why)
        : Error("config", format(key, line, why)), key_(std::move(key)), line_(line) {}

    const std::string &key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string &key, int line, const std::string &why) {
        std::ostringstream os;
        os << "key '" << key << "'";
        if (line > 0) os << " (line " << line << ")";
        os << ": " << why;
        return os.str();
    }

    std::string key_;
    int line_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string &what) : Error("parameter", what) {}
};

class OutOfDomainError : public Error {
public:
    OutOfDomainError(double r, double z)
        : Error("out_of_domain", format(r, z)), r_(r), z_(z) {}
    OutOfDomainError(double r, double z, const std::string &context)
        : Error("out_of_domain", context + ": " + format(r, z)), r_(r), z_(z) {}

    double r() const noexcept { return r_; }
    double z() const noexcept { return z_; }

private:
    static std::string format(double r, double z) {
        std::ostringstream os;
        os.precision(17);
        os << "point (r=" << r << ", z=" << z << ") lies outside the meridian domain";
        return os.str();
    }

    double r_, z_;
};

/// Linear solve did not reach the requested relative residual.
class StepFailure : public Error {
public:
    StepFailure(long step, std::vector<double> residuals, const std::string &what)
        : Error("step_failure", what), step_(step), residuals_(std::move(residuals)) {}

    long step() const noexcept { return step_; }
    const std::vector<double> &residuals() const noexcept { return residuals_; }

private:
    long step_;
    std::vector<double> residuals_;
};

class DivergenceError : public Error {
public:
    DivergenceError(double t, long step)
        : Error("divergence", format(t, step)), t_(t), step_(step) {}

    double time() const noexcept { return t_; }
    long step() const noexcept { return step_; }

private:
    static std::string format(double t, long step) {
        std::ostringstream os;
        os.precision(9);
        os << "non-finite values at t=" << t << " (step " << step << ")";
        return os.str();
    }

    double t_;
    long step_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string &what) : Error("io", what) {}
};

} // namespace saddlesim
