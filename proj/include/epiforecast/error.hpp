#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epiforecast {

enum class ErrorKind {
	InvalidArgument,
	InsufficientData,
	StateMismatch,
	DegenerateScale,
	IoError,
	FormatError,
	CellError,
	NotFound,
	OutOfRange,
	ConvergenceError,
	NoViableModel,
	InvalidParams,
	PositivityError,
	ShapeError,
	DivergenceError,
	SingularSystem,
	InsufficientResiduals,
	EmptyInput,
	ZeroActual,
	InvalidInterval,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI, the
/// benchmark harness) can map it to an exit code or an error cell.
class Error : public std::runtime_error {
public:
	Error(ErrorKind kind, const std::string &message)
	    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

	ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

/// Optimizer gave up; `best` holds the best parameter vector it found.
class ConvergenceError : public Error {
public:
	ConvergenceError(const std::string &message, std::vector<double> best, double best_value)
	    : Error(ErrorKind::ConvergenceError, message), best_(std::move(best)), best_value_(best_value) {}

	const std::vector<double> &best() const noexcept { return best_; }
	double best_value() const noexcept { return best_value_; }

private:
	std::vector<double> best_;
	double best_value_;
};

} // namespace epiforecast
