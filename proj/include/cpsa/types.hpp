#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace cpsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Error category, used by the CLI to map exceptions to exit codes.
enum class ErrorKind {
    Dimension,       // inconsistent matrix sizes or index ranges
    Analysis,        // a precondition of an analysis operation fails
    Numeric,         // singular factor, unstable step, ...
    Data,            // missing or malformed input files
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(ErrorKind::Dimension, what) {}
};
struct NotRegularError : Error {
    explicit NotRegularError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct NotIndexOneError : Error {
    explicit NotIndexOneError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct SingularAtSError : Error {
    explicit SingularAtSError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};
struct NotLeftInvertibleError : Error {
    explicit NotLeftInvertibleError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct NoWitnessError : Error {
    explicit NoWitnessError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct TrivialNullSpaceError : Error {
    explicit TrivialNullSpaceError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct DegeneratePencilError : Error {
    explicit DegeneratePencilError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct ModelShapeError : Error {
    explicit ModelShapeError(const std::string& what) : Error(ErrorKind::Analysis, what) {}
};
struct StepUnstableError : Error {
    explicit StepUnstableError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};
struct DataFileError : Error {
    explicit DataFileError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpsa
