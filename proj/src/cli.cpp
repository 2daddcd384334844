#include "sartex/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sartex/calib.hpp"
#include "sartex/dataset.hpp"
#include "sartex/error.hpp"
#include "sartex/model.hpp"
#include "sartex/raster.hpp"
#include "sartex/synth.hpp"
#include "sartex/text.hpp"
#include "sartex/texture.hpp"
#include "sartex/timeseries.hpp"

namespace sartex::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  bool verbose = false;
  int jobs = 1;
};

struct TextureFlags {
  int levels = 32;
  std::string range = "-30:5";
  int distance = 1;
  std::string angles = "all";
  bool any_stage = false;
};

void add_texture_flags(CLI::App* cmd, TextureFlags& f) {
  cmd->add_option("--levels", f.levels, "Grey levels N")->capture_default_str();
  cmd->add_option("--range", f.range, "Quantization window lo:hi in dB (use --range=-30:5)")
      ->capture_default_str();
  cmd->add_option("--distance", f.distance, "Pixel offset distance s")->capture_default_str();
  cmd->add_option("--angles", f.angles, "'all' or a comma list of 0,45,90,135")
      ->capture_default_str();
  cmd->add_flag("--any-stage", f.any_stage, "Accept rasters that are not gamma0 calibrated");
}

texture::QuantSpec quant_spec(const TextureFlags& f) {
  const auto colon = f.range.find(':');
  if (colon == std::string::npos) throw UsageError("--range must look like lo:hi");
  texture::QuantSpec q;
  q.levels = f.levels;
  try {
    q.lo = text::parse_double(std::string_view(f.range).substr(0, colon), "range lo");
    q.hi = text::parse_double(std::string_view(f.range).substr(colon + 1), "range hi");
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  texture::validate(q);
  return q;
}

texture::OffsetSpec offset_spec(const TextureFlags& f) {
  texture::OffsetSpec spec;
  spec.distance = f.distance;
  if (f.angles != "all") {
    spec.angles.clear();
    for (auto field : text::split(f.angles, ',')) {
      int deg = 0;
      try {
        deg = static_cast<int>(text::parse_int(field, "angle"));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      spec.angles.push_back(texture::parse_angle(deg));
    }
  }
  texture::validate(spec);
  return spec;
}

texture::StagePolicy stage_policy(const TextureFlags& f) {
  return f.any_stage ? texture::StagePolicy::AnyStage : texture::StagePolicy::RequireGamma0;
}

/// Writes `body` to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cli", "cannot write " + path);
  f << body;
  if (!f) throw Error(ErrorKind::Io, "cli", "write failed for " + path);
}

std::string features_csv(const std::vector<texture::TextureVector>& rows) {
  std::string body = classify::features_csv_header(false) + "\n";
  for (const auto& r : rows) body += classify::features_csv_row(r, std::nullopt, false) + "\n";
  return body;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"sartex: texture-based activity detection in SAR image chips", "sartex"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_flag("--verbose,-v", g.verbose, "Print progress to stderr");
  app.add_option("--jobs", g.jobs, "Worker threads for per-chip work and forest training")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "DN raster -> gamma0 (dB)");
  calib::CalibrationParams cal;
  std::string cal_in;
  std::string cal_out;
  calibrate->add_option("--k", cal.k_db, "Calibration constant K in dB")->required();
  calibrate->add_option("--incidence", cal.incidence_angle_deg, "Incidence angle in degrees")
      ->required();
  calibrate->add_option("in", cal_in, "Input DN raster")->required();
  calibrate->add_option("out", cal_out, "Output raster (.csv for CSV, binary otherwise)")
      ->required();

  // features
  auto* features = app.add_subcommand("features", "Twelve texture features per VV/VH chip pair");
  TextureFlags feat_flags;
  std::string feat_vv;
  std::string feat_vh;
  std::string feat_dir;
  std::string feat_out;
  add_texture_flags(features, feat_flags);
  auto* vv_opt = features->add_option("--vv", feat_vv, "VV raster");
  auto* vh_opt = features->add_option("--vh", feat_vh, "VH raster");
  auto* dir_opt =
      features->add_option("--dir", feat_dir, "Directory of <date>_VV.sarr/<date>_VH.sarr pairs");
  vv_opt->needs(vh_opt)->excludes(dir_opt);
  vh_opt->needs(vv_opt)->excludes(dir_opt);
  features->add_option("--out", feat_out, "Output CSV (default stdout)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic chip dataset");
  std::size_t synth_n = 100;
  std::string synth_dir;
  synth::SceneSpec active = synth::default_active_spec();
  synth::SceneSpec idle = synth::default_idle_spec();
  synth_cmd->add_option("--n", synth_n, "Samples per class")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth_cmd->add_option("--size", active.width, "Chip width and height in pixels")
      ->capture_default_str();
  synth_cmd->add_option("--background", active.background_mean_db, "Background mean in dB")
      ->capture_default_str();
  synth_cmd->add_option("--scatterers", active.n_scatterers, "Scatterers per active chip")
      ->capture_default_str();
  synth_cmd->add_option("--boost", active.scatterer_boost_db, "Scatterer boost in dB")
      ->capture_default_str();
  synth_cmd->add_option("--radius", active.cluster_radius, "Cluster radius in pixels")
      ->capture_default_str();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a feature CSV");
  std::string train_kind;
  std::string train_data;
  std::string train_labels;
  std::string train_out;
  classify::TrainParams params;
  std::string gamma_text = "auto";
  train_cmd->add_option("--kind", train_kind, "forest | svm | mlp")
      ->required()
      ->check(CLI::IsMember({"forest", "svm", "mlp"}));
  train_cmd->add_option("--data", train_data, "Feature CSV")->required();
  train_cmd->add_option("--labels", train_labels, "timestamp,label CSV (else the data's label column)");
  train_cmd->add_option("--out", train_out, "Model JSON")->required();
  train_cmd->add_option("--trees", params.forest.n_trees, "Forest size")->capture_default_str();
  train_cmd->add_option("--max-features", params.forest.max_features, "Candidate features per split")
      ->capture_default_str();
  train_cmd->add_option("--min-leaf", params.forest.min_samples_leaf, "Minimum samples per leaf")
      ->capture_default_str();
  train_cmd->add_option("--c", params.svm.c, "SVM penalty C")->capture_default_str();
  train_cmd->add_option("--gamma", gamma_text, "RBF width or 'auto'")->capture_default_str();
  train_cmd->add_option("--epochs", params.mlp.epochs, "MLP epochs")->capture_default_str();
  train_cmd->add_option("--lr", params.mlp.learning_rate, "MLP Adam step size")
      ->capture_default_str();

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Label feature rows with a trained model");
  std::string pred_model;
  std::string pred_data;
  std::string pred_labels;
  std::string pred_out;
  predict_cmd->add_option("--model", pred_model, "Model JSON")->required();
  predict_cmd->add_option("--data", pred_data, "Feature CSV")->required();
  predict_cmd->add_option("--labels", pred_labels, "timestamp,label CSV for scoring accuracy");
  predict_cmd->add_option("--out", pred_out, "Prediction CSV (default stdout)");

  // timeseries
  auto* series_cmd = app.add_subcommand("timeseries", "Per-date features and labels for a site");
  TextureFlags series_flags;
  std::string series_dir;
  std::string series_model;
  std::string series_out;
  add_texture_flags(series_cmd, series_flags);
  series_cmd->add_option("--dir", series_dir, "Directory of <date>_VV.sarr/<date>_VH.sarr pairs")
      ->required();
  series_cmd->add_option("--model", series_model, "Model JSON (optional)");
  series_cmd->add_option("--out", series_out, "Series CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

#ifdef _OPENMP
  omp_set_num_threads(g.jobs);
#endif
  auto log = [&](const std::string& msg) {
    if (g.verbose) err << msg << '\n';
  };

  try {
    if (*calibrate) {
      const Raster dn = read_raster(cal_in);
      const Raster gamma0 = calib::calibrate(dn, cal);
      write_raster(gamma0, cal_out);
      log("calibrated " + cal_in + " -> " + cal_out);
    } else if (*features) {
      const auto q = quant_spec(feat_flags);
      const auto spec = offset_spec(feat_flags);
      std::vector<texture::TextureVector> rows;
      if (!feat_dir.empty()) {
        const auto chips = timeseries::load_series_dir(feat_dir);
        rows = texture::texture_vectors(chips, q, spec, stage_policy(feat_flags));
      } else if (!feat_vv.empty()) {
        rows.push_back(texture::texture_vector(read_raster(feat_vv), read_raster(feat_vh), q,
                                               spec, stage_policy(feat_flags)));
      } else {
        throw UsageError("features needs --vv and --vh, or --dir");
      }
      emit(feat_out, features_csv(rows), out);
      log("wrote " + std::to_string(rows.size()) + " feature rows");
    } else if (*synth_cmd) {
      idle.width = idle.height = active.height = active.width;
      idle.background_mean_db = active.background_mean_db;
      idle.scatterer_boost_db = active.scatterer_boost_db;
      idle.cluster_radius = active.cluster_radius;
      const auto ds = synth::generate_dataset(synth_n, active, idle, g.seed);
      fs::create_directories(synth_dir);
      std::vector<std::pair<std::string, int>> labels;
      for (std::size_t i = 0; i < ds.chips.size(); ++i) {
        const std::string date = *ds.chips[i].vv.timestamp();
        write_raster_binary(ds.chips[i].vv, fs::path(synth_dir) / (date + "_VV.sarr"));
        write_raster_binary(ds.chips[i].vh, fs::path(synth_dir) / (date + "_VH.sarr"));
        labels.emplace_back(date, ds.data.samples[i].label);
      }
      classify::write_labels_csv(fs::path(synth_dir) / "labels.csv", labels);
      log("wrote " + std::to_string(ds.chips.size()) + " chip pairs to " + synth_dir);
    } else if (*train_cmd) {
      if (gamma_text != "auto") {
        try {
          params.svm.gamma = text::parse_double(gamma_text, "gamma");
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }
      const auto table = classify::read_features_csv(train_data);
      std::optional<std::map<std::string, int>> labels;
      if (!train_labels.empty()) labels = classify::read_labels_csv(train_labels);
      const auto data = classify::to_dataset(table, labels ? &*labels : nullptr);
      const auto kind = classify::parse_kind(train_kind);
      const auto model = classify::train(kind, data, params, g.seed);
      classify::save_model(model, train_out);
      out << "training accuracy: " << text::format_double(classify::evaluate(model, data)) << '\n';
      log("trained " + train_kind + " on " + std::to_string(data.size()) + " samples");
    } else if (*predict_cmd) {
      const auto model = classify::load_model(pred_model);
      const auto table = classify::read_features_csv(pred_data);
      std::string body = "timestamp,label,score\n";
      for (const auto& row : table.rows) {
        const auto p = classify::predict(model, row);
        body += row.timestamp.value_or("") + "," + std::to_string(p.label) + "," +
                text::format_double(p.score) + "\n";
      }
      emit(pred_out, body, out);
      std::optional<std::map<std::string, int>> labels;
      if (!pred_labels.empty()) labels = classify::read_labels_csv(pred_labels);
      bool have_labels = labels.has_value();
      if (!have_labels && table.has_label_column) {
        have_labels = true;
        for (const auto& l : table.labels) have_labels = have_labels && l.has_value();
      }
      if (have_labels && !table.rows.empty()) {
        const auto data = classify::to_dataset(table, labels ? &*labels : nullptr);
        // Keep stdout clean for the CSV when it goes there.
        (pred_out.empty() || pred_out == "-" ? err : out)
            << "accuracy: " << text::format_double(classify::evaluate(model, data)) << '\n';
      }
    } else if (*series_cmd) {
      const auto q = quant_spec(series_flags);
      const auto spec = offset_spec(series_flags);
      std::optional<classify::Model> model;
      if (!series_model.empty()) model = classify::load_model(series_model);
      const auto chips = timeseries::load_series_dir(series_dir);
      const auto series =
          timeseries::build_series(chips, model ? &*model : nullptr, {q, spec});
      emit(series_out, timeseries::series_csv(series), out);
      log("wrote " + std::to_string(series.size()) + " series points");
    }
  } catch (const UsageError& e) {
    err << "sartex: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "sartex: " << e.module() << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "sartex: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sartex");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sartex::cli
