#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsurf {

/// Every failure the library reports, one value per documented error case.
enum class Errc {
  // geometry
  FewerThanTwoPoints,
  DegenerateChord,
  InvalidCoordinate,
  // ingest
  MalformedXml,
  NoTrackPoints,
  InvalidTimestamp,
  MissingHeader,
  RowParseError,
  TooShort,
  GapTooLarge,
  UnknownLabel,
  DuplicateId,
  // segmentation / features
  ZeroLengthTrack,
  InvalidSegment,
  SingularFit,
  NonMonotonicU,
  TooFewValidSegments,
  // ml
  BadK,
  EmptyDataset,
  DimMismatch,
  SingleClass,
  CorruptModel,
  // eval
  TooFewPerClass,
  IdMismatch,
  SingleClassTruth,
  NonpositiveWeight,
  BadRatio,
  // synth
  SpecInvalid,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying an error kind and, where meaningful, the offending
/// line, row or point index.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> location = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> location() const noexcept { return location_; }
  /// The message without the leading error-kind name.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
  std::optional<std::size_t> location_;
};

}  // namespace tsurf
