#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsurf/geo.hpp"
#include "tsurf/track.hpp"

namespace tsurf {

/// Parameters of a synthetic ride: a straight centreline, optionally with a
/// lateral sine, sampled at fixed spacing and perturbed by isotropic Gaussian
/// noise in the planar frame before projecting back to lat/lon.
struct SynthSpec {
  Label kind = Label::Straight;
  double length = 5000.0;      ///< centreline length, m
  double spacing = 2.0;        ///< m between samples along the centreline
  double amplitude = 10.0;     ///< lateral sine amplitude (squiggly only), m
  double wavelength = 50.0;    ///< m, must exceed twice the spacing
  double noise_sigma = 0.0;    ///< per-axis standard deviation, m
  double heading_deg = 0.0;    ///< compass bearing of the centreline
  GeoPoint origin{40.015, -105.27, std::nullopt, std::nullopt};
  std::uint64_t seed = 0;
};

/// Throws Errc::SpecInvalid.
void validate(const SynthSpec& spec);

/// The noise-free planar polyline in the origin's local frame (x east,
/// y north), before noise. Useful as a geometric oracle.
std::vector<PlanarPoint> synth_centreline(const SynthSpec& spec);

LabeledTrack generate(const SynthSpec& spec, std::string id = "synthetic");

/// One piece of a piecewise ride: `kind` over `length` meters of centreline.
struct SynthSection {
  Label kind = Label::Straight;
  double length = 0.0;
};

/// Concatenates sections along one heading. Each squiggly section starts at
/// sine phase zero so the path is continuous. Amplitude, wavelength, spacing,
/// noise, heading, origin and seed come from `base`.
Track generate_sections(const SynthSpec& base, std::span<const SynthSection> sections,
                        std::string id = "synthetic");

/// n_per_class straight rides followed by n_per_class squiggly rides, each
/// with its own heading, origin jitter (within 0.25 degrees) and noise seed
/// derived from `seed`. Ids are straight_NNN / squiggly_NNN.
std::vector<LabeledTrack> generate_corpus(std::size_t n_per_class, const SynthSpec& base,
                                          std::uint64_t seed);

}  // namespace tsurf
