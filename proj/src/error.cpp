#include "tsurf/error.hpp"

namespace tsurf {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::FewerThanTwoPoints: return "FewerThanTwoPoints";
    case Errc::DegenerateChord: return "DegenerateChord";
    case Errc::InvalidCoordinate: return "InvalidCoordinate";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::NoTrackPoints: return "NoTrackPoints";
    case Errc::InvalidTimestamp: return "InvalidTimestamp";
    case Errc::MissingHeader: return "MissingHeader";
    case Errc::RowParseError: return "RowParseError";
    case Errc::TooShort: return "TooShort";
    case Errc::GapTooLarge: return "GapTooLarge";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::ZeroLengthTrack: return "ZeroLengthTrack";
    case Errc::InvalidSegment: return "InvalidSegment";
    case Errc::SingularFit: return "SingularFit";
    case Errc::NonMonotonicU: return "NonMonotonicU";
    case Errc::TooFewValidSegments: return "TooFewValidSegments";
    case Errc::BadK: return "BadK";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::SingleClass: return "SingleClass";
    case Errc::CorruptModel: return "CorruptModel";
    case Errc::TooFewPerClass: return "TooFewPerClass";
    case Errc::IdMismatch: return "IdMismatch";
    case Errc::SingleClassTruth: return "SingleClassTruth";
    case Errc::NonpositiveWeight: return "NonpositiveWeight";
    case Errc::BadRatio: return "BadRatio";
    case Errc::SpecInvalid: return "SpecInvalid";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message,
             std::optional<std::size_t> location)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message),
      location_(location) {}

}  // namespace tsurf
