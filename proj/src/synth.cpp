#include "tsurf/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "tsurf/error.hpp"
#include "tsurf/random.hpp"

namespace tsurf {
namespace {

constexpr double kStartTime = 1'700'000'000.0;
constexpr double kRideSpeed = 5.0;  // m/s, only used for timestamps

struct Frame {
  double ex, ey;  // unit vector along the heading
  double nx, ny;  // unit vector to the left of the heading
};

Frame heading_frame(double heading_deg) {
  const double h = heading_deg * std::numbers::pi / 180.0;
  const double ex = std::sin(h);
  const double ey = std::cos(h);
  return {ex, ey, -ey, ex};
}

std::vector<PlanarPoint> centreline(const SynthSpec& base,
                                    std::span<const SynthSection> sections) {
  const Frame f = heading_frame(base.heading_deg);
  std::vector<PlanarPoint> out;
  double offset = 0.0;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const auto& sec = sections[k];
    const auto steps = static_cast<std::size_t>(std::floor(sec.length / base.spacing + 1e-9));
    // later sections skip their first sample, which equals the previous end
    for (std::size_t i = (k == 0 ? 0 : 1); i <= steps; ++i) {
      const double local = static_cast<double>(i) * base.spacing;
      const double along = offset + local;
      const double lateral =
          sec.kind == Label::Squiggly
              ? base.amplitude * std::sin(2.0 * std::numbers::pi * local / base.wavelength)
              : 0.0;
      out.push_back({along * f.ex + lateral * f.nx, along * f.ey + lateral * f.ny, 0.0});
    }
    offset += static_cast<double>(steps) * base.spacing;
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i].s = out[i - 1].s + std::hypot(out[i].x - out[i - 1].x, out[i].y - out[i - 1].y);
  }
  return out;
}

Track render(const SynthSpec& base, std::span<const SynthSection> sections, std::string id) {
  validate(base);
  for (const auto& sec : sections) {
    if (!(sec.length > 0.0) || !std::isfinite(sec.length)) {
      throw Error(Errc::SpecInvalid, "section length must be positive");
    }
  }
  const auto line = centreline(base, sections);
  const LocalFrame frame(base.origin.lat, base.origin.lon);
  Rng rng(base.seed);
  Track track{std::move(id), {}, TrackSource::Synthetic};
  track.points.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    double x = line[i].x;
    double y = line[i].y;
    if (base.noise_sigma > 0.0) {
      x += base.noise_sigma * rng.normal();
      y += base.noise_sigma * rng.normal();
    }
    GeoPoint p;
    frame.inverse(x, y, p.lat, p.lon);
    p.alt = base.origin.alt;
    p.t = kStartTime + static_cast<double>(i) * base.spacing / kRideSpeed;
    if (!is_valid_coordinate(p.lat, p.lon)) {
      throw Error(Errc::SpecInvalid, "synthetic ride leaves the valid lat/lon range");
    }
    track.points.push_back(p);
  }
  return track;
}

}  // namespace

void validate(const SynthSpec& spec) {
  const auto bad = [](const char* why) { throw Error(Errc::SpecInvalid, why); };
  if (!(spec.length > 0.0) || !std::isfinite(spec.length)) bad("length must be positive");
  if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing)) bad("spacing must be positive");
  if (!(spec.wavelength > 2.0 * spec.spacing) || !std::isfinite(spec.wavelength)) {
    bad("wavelength must exceed twice the spacing");
  }
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) {
    bad("amplitude must be non-negative");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    bad("noise_sigma must be non-negative");
  }
  if (!std::isfinite(spec.heading_deg)) bad("heading must be finite");
  if (!is_valid_coordinate(spec.origin.lat, spec.origin.lon)) bad("origin out of range");
  if (spec.length / spec.spacing < 1.0) bad("length must cover at least one spacing");
}

std::vector<PlanarPoint> synth_centreline(const SynthSpec& spec) {
  validate(spec);
  const SynthSection whole{spec.kind, spec.length};
  return centreline(spec, std::span(&whole, 1));
}

LabeledTrack generate(const SynthSpec& spec, std::string id) {
  const SynthSection whole{spec.kind, spec.length};
  return LabeledTrack{render(spec, std::span(&whole, 1), std::move(id)), spec.kind};
}

Track generate_sections(const SynthSpec& base, std::span<const SynthSection> sections,
                        std::string id) {
  if (sections.empty()) throw Error(Errc::SpecInvalid, "no sections to generate");
  return render(base, sections, std::move(id));
}

std::vector<LabeledTrack> generate_corpus(std::size_t n_per_class, const SynthSpec& base,
                                          std::uint64_t seed) {
  if (n_per_class < 1) throw Error(Errc::SpecInvalid, "corpus needs at least one ride per class");
  validate(base);
  std::vector<LabeledTrack> corpus;
  corpus.reserve(2 * n_per_class);
  for (Label kind : {Label::Straight, Label::Squiggly}) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      const std::uint64_t stream = 2 * i + static_cast<std::uint64_t>(kind);
      Rng jitter(derive_seed(seed, stream));
      SynthSpec spec = base;
      spec.kind = kind;
      spec.heading_deg = 360.0 * jitter.uniform();
      spec.origin.lat = base.origin.lat + 0.5 * (jitter.uniform() - 0.5);
      spec.origin.lon = base.origin.lon + 0.5 * (jitter.uniform() - 0.5);
      spec.seed = jitter.next();
      char id[32];
      std::snprintf(id, sizeof id, "%s_%03zu", kind == Label::Squiggly ? "squiggly" : "straight",
                    i);
      corpus.push_back(generate(spec, id));
    }
  }
  return corpus;
}

}  // namespace tsurf
