#include "mssg/error.hpp"

namespace mssg {

namespace {

std::string compose(ErrorCode code, const std::string& element, const std::string& detail) {
    std::string msg{to_string(code)};
    msg += "(" + element + ")";
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::DanglingEdgeEndpoint: return "DanglingEdgeEndpoint";
        case ErrorCode::SelfLoopEdge: return "SelfLoopEdge";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::NegativeTimestamp: return "NegativeTimestamp";
        case ErrorCode::InvalidNode: return "InvalidNode";
        case ErrorCode::InvalidPose: return "InvalidPose";
        case ErrorCode::InvalidEdge: return "InvalidEdge";
        case ErrorCode::KindViolation: return "KindViolation";
        case ErrorCode::InvalidTimeline: return "InvalidTimeline";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MissingPose: return "MissingPose";
        case ErrorCode::MultiplePatients: return "MultiplePatients";
        case ErrorCode::EmptyTimeline: return "EmptyTimeline";
        case ErrorCode::InvalidMatrix: return "InvalidMatrix";
        case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::UnmappedJoint: return "UnmappedJoint";
        case ErrorCode::UnmappedLabel: return "UnmappedLabel";
        case ErrorCode::MissingCameraMetadata: return "MissingCameraMetadata";
        case ErrorCode::EmptyScript: return "EmptyScript";
        case ErrorCode::WarpCoverageError: return "WarpCoverageError";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string element, std::string detail)
    : std::runtime_error(compose(code, element, detail)),
      code_(code),
      element_(std::move(element)),
      detail_(std::move(detail)) {}

Error Error::with_line(std::size_t line) const {
    Error e(code_, element_, "line " + std::to_string(line) + (detail_.empty() ? "" : ": " + detail_));
    e.line_ = line;
    return e;
}

Error Error::with_context(const std::string& context) const {
    Error e(code_, element_, context + (detail_.empty() ? "" : ": " + detail_));
    e.line_ = line_;
    return e;
}

}  // namespace mssg
