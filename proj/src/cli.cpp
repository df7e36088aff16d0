#include "tsurf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "tsurf/error.hpp"
#include "tsurf/eval.hpp"
#include "tsurf/pipeline.hpp"
#include "tsurf/random.hpp"
#include "tsurf/synth.hpp"

namespace tsurf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// A data error tied to one input file.
class FileError : public Error {
 public:
  FileError(const Error& cause, std::string file)
      : Error(cause.code(), file + ": " + cause.message(), cause.location()),
        file_(std::move(file)) {}
  const std::string& file() const noexcept { return file_; }

 private:
  std::string file_;
};

/// Bad invocation detected after flag parsing (unreadable inputs and the like).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("failed writing '" + path + "'");
}

template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const FileError&) {
    throw;
  } catch (const Error& e) {
    throw FileError(e, path);
  }
}

Track read_track(const std::string& path) {
  const std::string ext = detail::to_lower(fs::path(path).extension().string());
  const std::string id = fs::path(path).stem().string();
  const std::string bytes = read_file(path);
  return with_file(path, [&] {
    if (ext == ".gpx") return parse_gpx(bytes, id);
    if (ext == ".csv") return parse_track_csv(bytes, id);
    throw UsageError("'" + path + "': expected a .gpx or .csv track file");
  });
}

TrackAnalysis load_and_analyze(const std::string& path) {
  Track track = read_track(path);
  return with_file(path, [&] { return analyze_track(clean(std::move(track))); });
}

std::vector<TrackAnalysis> analyze_files(std::vector<std::string> paths) {
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  std::set<std::string> stems;
  for (const auto& p : paths) {
    if (!stems.insert(fs::path(p).stem().string()).second) {
      throw FileError(Error(Errc::DuplicateId, "another input has the same track id"), p);
    }
  }
  return parallel_map<TrackAnalysis>(paths.size(), thread_count(),
                                     [&](std::size_t i) { return load_and_analyze(paths[i]); });
}

std::vector<std::uint8_t> to_bytes(const std::string& s) { return {s.begin(), s.end()}; }

TrainedModel read_model(const std::string& path) {
  const auto bytes = to_bytes(read_file(path));
  return with_file(path, [&] { return load_model(bytes); });
}

// Tracks usable at a level: at least one valid segment, or enough for ride stats.
std::vector<std::pair<std::string, Label>> eligible_tracks(std::span<const FeatureRow> table,
                                                           const std::map<std::string, Label>& labels,
                                                           Method method, Level level) {
  const auto built = build_dataset(table, labels, method, level);
  std::set<std::string> ids;
  for (const auto& row : built.data.rows) ids.insert(track_of_row(row.id));
  std::vector<std::pair<std::string, Label>> out;
  for (const auto& id : ids) out.emplace_back(id, labels.at(id));
  return out;
}

std::string predictions_csv(std::span<const Prediction> preds) {
  std::string out = "id,score,label\n";
  for (const auto& p : preds) {
    out += p.id + "," + detail::format_double(p.score) + "," + std::string(to_string(p.label)) +
           "\n";
  }
  return out;
}

EvalReport evaluate(const TrainedModel& model, const Dataset& test, Method method, Level level) {
  const auto preds = predict_all(model, test);
  std::map<std::string, Label> truth;
  std::vector<Label> labels;
  std::vector<double> scores;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    truth[test.rows[i].id] = test.rows[i].label;
    labels.push_back(test.rows[i].label);
    scores.push_back(preds[i].score);
  }
  EvalReport rep;
  rep.model = std::string(model.kind());
  rep.method = std::string(to_string(method));
  rep.level = std::string(to_string(level));
  rep.classification = classification_report(truth, preds);
  rep.roc = roc_curve(labels, scores);
  rep.n_test = test.rows.size();
  return rep;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> paths;
  std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const auto analyses = analyze_files(a.paths);
  std::vector<FeatureRow> rows;
  ordered_json quality = ordered_json::array();
  for (const auto& an : analyses) {
    const auto r = an.rows();
    rows.insert(rows.end(), r.begin(), r.end());
    std::size_t valid = 0;
    for (const auto& f : an.features) valid += f.valid ? 1 : 0;
    const auto pps = points_per_segment(r);
    quality.push_back({{"track_id", an.track_id},
                       {"n_points", an.planar.size()},
                       {"length_m", an.length_m()},
                       {"valid_segments", valid},
                       {"invalid_segments", an.features.size() - valid},
                       {"points_per_segment",
                        {{"mean", pps.mean},
                         {"min", pps.min},
                         {"max", pps.max},
                         {"median", pps.median}}}});
  }
  write_file(a.out, write_feature_table(rows));
  out << quality.dump(2) << "\n";
  return kOk;
}

struct TrainArgs {
  std::string features;
  std::string labels;
  std::string method;
  std::string model;
  std::string level = "ride";
  double ratio = 0.5;
  std::uint64_t seed = 0;
  std::string model_out;
  std::string report;
  std::string roc;
  int k = 3;
  double c = 1.0;
  std::size_t epochs = 200;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto table = with_file(a.features, [&] { return read_feature_table(read_file(a.features)); });
  const auto labels = with_file(a.labels, [&] { return load_labels(read_file(a.labels)); });
  const Method method = parse_method(a.method);
  const Level level = parse_level(a.level);

  const auto eligible = eligible_tracks(table, labels, method, level);
  const Split split = make_split(eligible, a.ratio, a.seed);
  const auto train = build_dataset(table, labels, method, level, split.train_ids).data;
  const auto test = build_dataset(table, labels, method, level, split.test_ids).data;

  TrainedModel model;
  if (a.model == "knn") {
    model = knn_train(train, a.k);
  } else if (a.model == "tree") {
    TreeOptions opts;
    if (a.max_depth > 0) opts.max_depth = a.max_depth;
    opts.min_leaf = a.min_leaf;
    model = tree_train(train, opts);
  } else {
    model = svm_train(train, SvmOptions{a.c, a.epochs, a.seed});
  }

  EvalReport rep = evaluate(model, test, method, level);
  rep.ratio = split.ratio;
  rep.seed = split.seed;
  rep.n_train = train.rows.size();
  rep.points_per_segment = points_per_segment(table, split.test_ids);

  const auto bytes = save_model(model);
  write_file(a.model_out, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  const std::string json = report_to_json(rep);
  write_file(a.report, json);
  if (!a.roc.empty()) write_file(a.roc, roc_to_csv(rep.roc));
  out << json;
  return kOk;
}

struct EvalArgs {
  std::string model;
  std::string features;
  std::string labels;
  std::string report;
  std::string roc;
  std::string predictions;
  std::optional<double> ratio;
  std::optional<std::uint64_t> seed;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const TrainedModel model = read_model(a.model);
  const auto table = with_file(a.features, [&] { return read_feature_table(read_file(a.features)); });
  const auto labels = with_file(a.labels, [&] { return load_labels(read_file(a.labels)); });
  const auto [method, level] = infer_layout(model.feature_names);

  std::optional<std::vector<std::string>> tracks;
  if (a.ratio && a.seed) {
    const auto eligible = eligible_tracks(table, labels, method, level);
    tracks = make_split(eligible, *a.ratio, *a.seed).test_ids;
  }
  const auto test = build_dataset(table, labels, method, level, tracks).data;
  EvalReport rep = evaluate(model, test, method, level);
  if (a.ratio && a.seed) {
    rep.ratio = *a.ratio;
    rep.seed = *a.seed;
  }
  rep.points_per_segment = points_per_segment(table, tracks);

  const std::string json = report_to_json(rep);
  write_file(a.report, json);
  if (!a.roc.empty()) write_file(a.roc, roc_to_csv(rep.roc));
  if (!a.predictions.empty()) write_file(a.predictions, predictions_csv(predict_all(model, test)));
  out << json;
  return kOk;
}

struct ColorArgs {
  std::string model;
  std::string track;
  std::string out;
};

int cmd_color(const ColorArgs& a, std::ostream& out) {
  const TrainedModel model = read_model(a.model);
  const auto [method, level] = infer_layout(model.feature_names);
  if (level != Level::Segment) {
    throw Error(Errc::DimMismatch,
                "colouring needs a segment-level model; this one was trained per ride");
  }
  const Track cleaned = with_file(a.track, [&] { return clean(read_track(a.track)); });
  const TrackAnalysis an = analyze_track(cleaned);
  const LocalFrame frame = LocalFrame::centred_on(cleaned.points);

  const auto position = [&](const PlanarPoint& p) {
    double lat = 0.0, lon = 0.0;
    frame.inverse(p.x, p.y, lat, lon);
    return ordered_json::array({lon, lat});
  };

  ordered_json features = ordered_json::array();
  const PlanarPoint* previous = nullptr;
  for (std::size_t k = 0; k < an.segments.size(); ++k) {
    const auto& seg = an.segments[k];
    const auto& f = an.features[k];
    ordered_json coords = ordered_json::array();
    // join onto the previous segment unless the boundary point is already shared
    if (previous != nullptr && (seg.points.empty() || seg.points.front().s != previous->s)) {
      coords.push_back(position(*previous));
    }
    for (const auto& p : seg.points) coords.push_back(position(p));
    if (!seg.points.empty()) previous = &seg.points.back();

    ordered_json props;
    props["segment_index"] = seg.index;
    props["valid"] = f.valid;
    props["length_m"] = seg.length();
    if (f.valid) {
      const double x = method_scalar(f, method);
      const auto pred = predict(model, std::span(&x, 1), segment_row_id(an.track_id, k));
      props["score"] = pred.score;
      props["label"] = std::string(to_string(pred.label));
      props["color"] = pred.label == Label::Squiggly ? "red" : "blue";
    } else {
      props["score"] = nullptr;
      props["label"] = nullptr;
      props["color"] = "gray";
    }
    ordered_json feature;
    feature["type"] = "Feature";
    if (coords.size() >= 2) {
      feature["geometry"] = {{"type", "LineString"}, {"coordinates", std::move(coords)}};
    } else {
      feature["geometry"] = nullptr;
    }
    feature["properties"] = std::move(props);
    features.push_back(std::move(feature));
  }
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kOk;
}

struct ProfileArgs {
  std::string model;
  std::vector<std::string> tracks;
  std::string out;
};

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
  const TrainedModel model = read_model(a.model);
  const auto [method, level] = infer_layout(model.feature_names);
  const auto analyses = analyze_files(a.tracks);

  double squiggly = 0.0, straight = 0.0, invalid = 0.0;
  ordered_json rides = ordered_json::array();
  for (const auto& an : analyses) {
    double r_sq = 0.0, r_st = 0.0, r_inv = 0.0;
    if (level == Level::Segment) {
      for (std::size_t k = 0; k < an.segments.size(); ++k) {
        const double len = an.segments[k].length();
        const auto& f = an.features[k];
        if (!f.valid) {
          r_inv += len;
          continue;
        }
        const double x = method_scalar(f, method);
        (predict(model, std::span(&x, 1)).label == Label::Squiggly ? r_sq : r_st) += len;
      }
    } else {
      double valid_len = 0.0;
      for (std::size_t k = 0; k < an.segments.size(); ++k) {
        (an.features[k].valid ? valid_len : r_inv) += an.segments[k].length();
      }
      try {
        const auto data = track_dataset(an, method, level);
        const auto p = predict(model, data.rows.front().features, an.track_id);
        (p.label == Label::Squiggly ? r_sq : r_st) += valid_len;
      } catch (const Error& e) {
        if (e.code() != Errc::TooFewValidSegments) throw;
        r_inv += valid_len;
      }
    }
    squiggly += r_sq;
    straight += r_st;
    invalid += r_inv;
    rides.push_back({{"track_id", an.track_id},
                     {"squiggly_m", r_sq},
                     {"straight_m", r_st},
                     {"invalid_m", r_inv}});
  }
  const double classified = squiggly + straight;
  ordered_json doc;
  doc["model"] = std::string(model.kind());
  doc["method"] = std::string(to_string(method));
  doc["level"] = std::string(to_string(level));
  doc["rides"] = analyses.size();
  doc["distance_m"] = {{"squiggly", squiggly}, {"straight", straight}, {"invalid", invalid}};
  doc["percent"] = {{"squiggly", classified > 0 ? 100.0 * (squiggly / classified) : 0.0},
                    {"straight", classified > 0 ? 100.0 * (straight / classified) : 0.0}};
  doc["invalid_percent_of_total"] =
      classified + invalid > 0 ? 100.0 * (invalid / (classified + invalid)) : 0.0;
  doc["per_ride"] = std::move(rides);
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kOk;
}

struct SynthArgs {
  std::string kind = "both";
  std::size_t n = 1;
  std::uint64_t seed = 0;
  SynthSpec spec;
  std::string format = "gpx";
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  std::vector<LabeledTrack> rides;
  bool labelled = true;
  if (a.kind == "mixed") {
    labelled = false;
    for (std::size_t i = 0; i < a.n; ++i) {
      Rng jitter(derive_seed(a.seed, i));
      SynthSpec spec = a.spec;
      spec.heading_deg = 360.0 * jitter.uniform();
      spec.seed = jitter.next();
      const SynthSection halves[2] = {{Label::Straight, spec.length / 2.0},
                                      {Label::Squiggly, spec.length / 2.0}};
      char id[32];
      std::snprintf(id, sizeof id, "mixed_%03zu", i);
      rides.push_back({generate_sections(spec, halves, id), Label::Straight});
    }
  } else {
    for (auto& r : generate_corpus(a.n, a.spec, a.seed)) {
      if (a.kind == "both" || a.kind == to_string(r.label)) rides.push_back(std::move(r));
    }
  }

  fs::create_directories(a.out);
  std::map<std::string, Label> labels;
  ordered_json files = ordered_json::array();
  for (const auto& r : rides) {
    const fs::path path = fs::path(a.out) / (r.track.id + "." + a.format);
    write_file(path.string(), a.format == "gpx" ? write_gpx(r.track) : write_track_csv(r.track));
    files.push_back(path.string());
    labels[r.track.id] = r.label;
  }
  ordered_json doc;
  doc["files"] = std::move(files);
  if (labelled) {
    const fs::path label_path = fs::path(a.out) / "labels.csv";
    write_file(label_path.string(), write_labels(labels));
    doc["labels"] = label_path.string();
  }
  out << doc.dump(2) << "\n";
  return kOk;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message,
                  const std::string& file = {}, std::optional<std::size_t> location = {}) {
  ordered_json j;
  j["error"] = std::string(kind);
  j["message"] = message;
  if (!file.empty()) j["file"] = file;
  if (location) j["location"] = *location;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify ride segments as paved (straight) or dirt (squiggly) from GPS tracks",
               "trail-surface"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse, clean and featurize ride files");
  c_ingest->add_option("paths", ingest.paths, "GPX or CSV track files")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--out", ingest.out, "Feature table CSV to write")->required();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Split, train a classifier and report on the test split");
  c_train->add_option("features", train.features)->required()->check(CLI::ExistingFile);
  c_train->add_option("labels", train.labels)->required()->check(CLI::ExistingFile);
  c_train->add_option("--method", train.method)->required()->check(CLI::IsMember({"m1", "m2", "m3"}));
  c_train->add_option("--model", train.model)->required()->check(CLI::IsMember({"svm", "knn", "tree"}));
  c_train->add_option("--level", train.level)->capture_default_str()->check(CLI::IsMember({"segment", "ride"}));
  c_train->add_option("--ratio", train.ratio, "Training fraction")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_train->add_option("--seed", train.seed)->required();
  c_train->add_option("--model-out", train.model_out)->required();
  c_train->add_option("--report", train.report)->required();
  c_train->add_option("--roc", train.roc, "Optional ROC points CSV");
  c_train->add_option("--k", train.k)->capture_default_str();
  c_train->add_option("--c", train.c, "SVM soft-margin weight")->capture_default_str();
  c_train->add_option("--epochs", train.epochs)->capture_default_str();
  c_train->add_option("--max-depth", train.max_depth, "0 = unlimited")->capture_default_str();
  c_train->add_option("--min-leaf", train.min_leaf)->capture_default_str();

  EvalArgs eval;
  double eval_ratio = 0.0;
  std::uint64_t eval_seed = 0;
  auto* c_eval = app.add_subcommand("eval", "Score a saved model against labelled features");
  c_eval->add_option("model", eval.model)->required()->check(CLI::ExistingFile);
  c_eval->add_option("features", eval.features)->required()->check(CLI::ExistingFile);
  c_eval->add_option("labels", eval.labels)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--report", eval.report)->required();
  c_eval->add_option("--roc", eval.roc);
  c_eval->add_option("--predictions", eval.predictions);
  auto* o_ratio = c_eval->add_option("--ratio", eval_ratio, "Evaluate only this split's test side")
                      ->check(CLI::Range(0.0, 1.0));
  auto* o_seed = c_eval->add_option("--seed", eval_seed);
  o_ratio->needs(o_seed);
  o_seed->needs(o_ratio);

  ColorArgs color;
  auto* c_color = app.add_subcommand("color", "Write a GeoJSON of segments coloured by prediction");
  c_color->add_option("model", color.model)->required()->check(CLI::ExistingFile);
  c_color->add_option("track", color.track)->required()->check(CLI::ExistingFile);
  c_color->add_option("--out", color.out, "GeoJSON path (stdout when omitted)");

  ProfileArgs profile;
  auto* c_profile = app.add_subcommand("profile", "Share of squiggly vs straight distance over rides");
  c_profile->add_option("model", profile.model)->required()->check(CLI::ExistingFile);
  c_profile->add_option("tracks", profile.tracks)->required()->check(CLI::ExistingFile);
  c_profile->add_option("--out", profile.out, "JSON path (stdout when omitted)");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic labelled ride corpus");
  c_synth->add_option("--kind", synth.kind)->capture_default_str()
      ->check(CLI::IsMember({"straight", "squiggly", "both", "mixed"}));
  c_synth->add_option("--n", synth.n, "Rides per class")->capture_default_str()->check(CLI::PositiveNumber);
  c_synth->add_option("--seed", synth.seed)->required();
  c_synth->add_option("--length", synth.spec.length)->capture_default_str();
  c_synth->add_option("--spacing", synth.spec.spacing)->capture_default_str();
  c_synth->add_option("--amplitude", synth.spec.amplitude)->capture_default_str();
  c_synth->add_option("--wavelength", synth.spec.wavelength)->capture_default_str();
  c_synth->add_option("--noise", synth.spec.noise_sigma)->capture_default_str();
  c_synth->add_option("--lat", synth.spec.origin.lat)->capture_default_str();
  c_synth->add_option("--lon", synth.spec.origin.lon)->capture_default_str();
  c_synth->add_option("--format", synth.format)->capture_default_str()->check(CLI::IsMember({"gpx", "csv"}));
  c_synth->add_option("--out", synth.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_ingest->parsed()) return cmd_ingest(ingest, out);
    if (c_train->parsed()) {
      if (!(train.ratio > 0.0 && train.ratio < 1.0)) throw UsageError("--ratio must be in (0, 1)");
      return cmd_train(train, out);
    }
    if (c_eval->parsed()) {
      if (o_ratio->count() > 0) {
        if (!(eval_ratio > 0.0 && eval_ratio < 1.0)) throw UsageError("--ratio must be in (0, 1)");
        eval.ratio = eval_ratio;
        eval.seed = eval_seed;
      }
      return cmd_eval(eval, out);
    }
    if (c_color->parsed()) return cmd_color(color, out);
    if (c_profile->parsed()) return cmd_profile(profile, out);
    if (c_synth->parsed()) return cmd_synth(synth, out);
  } catch (const UsageError& e) {
    report_error(err, "UsageError", e.what());
    return kUsage;
  } catch (const FileError& e) {
    report_error(err, to_string(e.code()), e.message(), e.file(), e.location());
    return kDataError;
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.message(), {}, e.location());
    return kDataError;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kInternal;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace tsurf::cli
