#pragma once

#include <stdexcept>
#include <string>

namespace gqm {

// Every failure mode raised by the library. The CLI maps these onto exit
// codes, tests assert on them directly.
enum class ErrorCode {
    SizeOutOfRange,
    GroundTruthLengthMismatch,
    SyntaxError,
    DuplicateLabel,
    ScoreOutOfRange,
    EmptyInput,
    LabelSetMismatch,
    MissingRanking,
    MissingScores,
    LengthMismatch,
    GroupTooSmall,
    RewardOutOfDeclaredRange,
    EmptyBatch,
    EmptySequence,
    InvalidBufferConfig,
    MissingGroundTruth,
    InvalidSubsampleSize,
    PoolTooSmall,
    EmptyDataset,
    InvalidWindow,
    JsonSyntax,
    SchemaViolation,
    MissingPair,
    ConfigError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : std::move(message)),
          code_(code),
          line_(line) {}

    ErrorCode code() const { return code_; }

    // 1-based input line for stream decoding errors, 0 otherwise.
    int line() const { return line_; }

private:
    ErrorCode code_;
    int line_;
};

const char* error_code_name(ErrorCode code);

}  // namespace gqm
