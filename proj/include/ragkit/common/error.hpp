#pragma once
// Error codes shared across the pipeline. Every failure surfaced to a
// caller carries one of these, so the CLI can map them to exit codes and
// tests can assert on the exact failure kind.

#include <stdexcept>
#include <string>
#include <string_view>

namespace ragkit {

enum class ErrorCode {
    // graph
    UnknownNode,
    IllegalChildOrigin,
    GraphInvariantViolation,
    // input documents
    UnsupportedFormat,
    CorruptFile,
    MalformedMarkdown,
    NonContiguousPages,
    // backends and agents
    BackendUnavailable,
    BackendRejectedInput,
    UndecodableImage,
    AgentUnavailable,
    AgentMalformedOutput,
    JudgeUnavailable,
    UnparseableVerdict,
    // node contracts
    WrongNodeKind,
    MissingContextualization,
    MissingDescription,
    // index
    InputTooLong,
    DimensionMismatch,
    MetadataTooLarge,
    EmptyIndex,
    UnknownDocument,
    // evaluation
    EmptyContexts,
    MissingExpectedAnswer,
    // plumbing
    InvalidConfig,
    IoError,
};

inline std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::IllegalChildOrigin: return "IllegalChildOrigin";
        case ErrorCode::GraphInvariantViolation: return "GraphInvariantViolation";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::CorruptFile: return "CorruptFile";
        case ErrorCode::MalformedMarkdown: return "MalformedMarkdown";
        case ErrorCode::NonContiguousPages: return "NonContiguousPages";
        case ErrorCode::BackendUnavailable: return "BackendUnavailable";
        case ErrorCode::BackendRejectedInput: return "BackendRejectedInput";
        case ErrorCode::UndecodableImage: return "UndecodableImage";
        case ErrorCode::AgentUnavailable: return "AgentUnavailable";
        case ErrorCode::AgentMalformedOutput: return "AgentMalformedOutput";
        case ErrorCode::JudgeUnavailable: return "JudgeUnavailable";
        case ErrorCode::UnparseableVerdict: return "UnparseableVerdict";
        case ErrorCode::WrongNodeKind: return "WrongNodeKind";
        case ErrorCode::MissingContextualization: return "MissingContextualization";
        case ErrorCode::MissingDescription: return "MissingDescription";
        case ErrorCode::InputTooLong: return "InputTooLong";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MetadataTooLarge: return "MetadataTooLarge";
        case ErrorCode::EmptyIndex: return "EmptyIndex";
        case ErrorCode::UnknownDocument: return "UnknownDocument";
        case ErrorCode::EmptyContexts: return "EmptyContexts";
        case ErrorCode::MissingExpectedAnswer: return "MissingExpectedAnswer";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace ragkit
