#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mssg {

enum class ErrorCode {
    DuplicateId,
    DanglingEdgeEndpoint,
    SelfLoopEdge,
    DuplicateEdge,
    NegativeTimestamp,
    InvalidNode,
    InvalidPose,
    InvalidEdge,
    KindViolation,
    InvalidTimeline,
    InvalidConfig,
    MissingPose,
    MultiplePatients,
    EmptyTimeline,
    InvalidMatrix,
    InstanceTooLarge,
    IndexOutOfRange,
    SchemaVersionMismatch,
    MalformedRecord,
    UnmappedJoint,
    UnmappedLabel,
    MissingCameraMetadata,
    EmptyScript,
    WarpCoverageError,
    InvalidWeights,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported as an Error carrying one code and
/// the single offending element (node id, joint name, line number, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string element, std::string detail = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& element() const noexcept { return element_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Source line (1-based) when the error came from a document.
    std::optional<std::size_t> line() const noexcept { return line_; }

    /// Same error with document context attached.
    Error with_line(std::size_t line) const;
    Error with_context(const std::string& context) const;

private:
    ErrorCode code_;
    std::string element_;
    std::string detail_;
    std::optional<std::size_t> line_;
};

}  // namespace mssg
