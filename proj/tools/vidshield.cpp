#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vidshield/annotator.hpp"
#include "vidshield/attack.hpp"
#include "vidshield/corpus.hpp"
#include "vidshield/defense.hpp"
#include "vidshield/error.hpp"
#include "vidshield/harness.hpp"
#include "vidshield/labeler.hpp"
#include "vidshield/service.hpp"
#include "vidshield/video_io.hpp"

namespace fs = std::filesystem;
using namespace vidshield;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

std::string resolve_model_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("VIDSHIELD_MODEL"); env && *env) return env;
  throw Error(ErrorKind::InvalidSpec,
              "no model path: pass --model or set VIDSHIELD_MODEL");
}

LabelModel load_model(const std::string& flag_value) {
  std::string path = resolve_model_path(flag_value);
  auto bytes = read_file(path);
  return model_from_json(std::string(bytes.begin(), bytes.end()));
}

void write_text(const std::string& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

// Shared annotator flags for annotate / evaluate / sweep / serve.
struct AnnotatorFlags {
  std::string sample_rate = "1";
  double threshold = 0.4;
  std::size_t top_k_video = 7;
  std::size_t top_k_shot = 3;
  std::string defense = "none";
};

void add_annotator_flags(CLI::App* cmd, AnnotatorFlags& flags,
                         bool with_defense = true) {
  cmd->add_option("--sample-rate", flags.sample_rate, "samples per second");
  cmd->add_option("--threshold", flags.threshold, "shot boundary L1 threshold");
  cmd->add_option("--top-video", flags.top_k_video, "video labels reported");
  cmd->add_option("--top-shot", flags.top_k_shot, "labels reported per shot");
  if (with_defense) {
    cmd->add_option("--defense", flags.defense,
                    "none|duration|minrun:<m>|isolated:<kappa>|combo");
  }
}

AnnotatorConfig make_annotator_config(const AnnotatorFlags& flags) {
  AnnotatorConfig config;
  config.sample_rate = parse_decimal_seconds(flags.sample_rate);
  config.shot_threshold = flags.threshold;
  config.top_k_video = flags.top_k_video;
  config.top_k_shot = flags.top_k_shot;
  config.aggregation = aggregation_from_string(flags.defense);
  return config;
}

VideoClip load_clip(const std::string& path) { return parse_y4m(read_file(path)); }

std::string path_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

int run_gen_corpus(const std::string& spec_path, const std::string& out_dir,
                   std::uint32_t seed, bool seed_given, std::uint32_t per_label,
                   const std::string& attack_labels_csv) {
  CorpusSpec spec;
  if (!spec_path.empty()) {
    auto bytes = read_file(spec_path);
    spec = corpus_spec_from_json(std::string(bytes.begin(), bytes.end()));
    if (seed_given) spec.rng_seed = seed;
  } else {
    spec = default_corpus_spec(seed);
  }

  GeneratedClip generated = generate_clip(spec);

  fs::create_directories(fs::path(out_dir) / "refs");
  write_file((fs::path(out_dir) / "clip.y4m").string(), write_y4m(generated.clip));
  write_text((fs::path(out_dir) / "groundtruth.json").string(),
             ground_truth_to_json(generated.ground_truth));
  write_text((fs::path(out_dir) / "corpus.json").string(), corpus_spec_to_json(spec));

  std::vector<std::string> labels;
  for (const SceneSpec& scene : spec.scenes) {
    if (std::find(labels.begin(), labels.end(), scene.label) == labels.end()) {
      labels.push_back(scene.label);
    }
  }
  for (const std::string& label : split_csv(attack_labels_csv)) {
    if (!label.empty() &&
        std::find(labels.begin(), labels.end(), label) == labels.end()) {
      labels.push_back(label);
    }
  }

  auto refs = generate_reference_images(spec, labels, per_label, spec.rng_seed);
  std::map<std::string, int> counters;
  for (const auto& [label, image] : refs) {
    int k = counters[label]++;
    fs::path path = fs::path(out_dir) / "refs" /
                    (label + "_" + std::to_string(k) + ".ppm");
    write_file(path.string(), write_ppm(image));
  }

  std::cout << "wrote " << generated.clip.frame_count() << " frames and "
            << refs.size() << " reference images to " << out_dir << "\n";
  return 0;
}

int run_train(const std::string& refs_dir, const std::string& out_path,
              double temperature) {
  std::vector<std::string> files;
  if (!fs::is_directory(refs_dir)) {
    throw Error(ErrorKind::IoError, "not a directory: " + refs_dir);
  }
  for (const auto& entry : fs::directory_iterator(refs_dir)) {
    if (entry.path().extension() == ".ppm") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::pair<std::string, Image>> refs;
  for (const std::string& file : files) {
    std::string stem = path_stem(file);
    std::size_t underscore = stem.rfind('_');
    std::string label = underscore == std::string::npos ? stem : stem.substr(0, underscore);
    refs.emplace_back(label, parse_ppm(read_file(file)));
  }

  LabelModel model = train(refs, temperature);
  write_text(out_path, model_to_json(model));
  std::cout << "trained " << model.prototypes.size() << " labels from "
            << refs.size() << " images\n";
  return 0;
}

int run_annotate(const std::string& model_path, const std::string& input,
                 const std::string& out_path, const AnnotatorFlags& flags) {
  LabelModel model = load_model(model_path);
  VideoClip clip = load_clip(input);
  AnnotationResult result = annotate(clip, model, make_annotator_config(flags));
  emit(out_path, annotation_to_json(result));
  return 0;
}

int run_attack(const std::string& input, const std::string& image_path,
               const std::string& period, const std::string& phase,
               const std::string& mode, const std::string& out_path) {
  VideoClip clip = load_clip(input);
  Image image = parse_ppm(read_file(image_path));
  AttackConfig cfg =
      AttackConfig::make(std::move(image), parse_decimal_seconds(period),
                         parse_decimal_seconds(phase), attack_mode_from_name(mode));
  write_file(out_path, write_y4m(apply_attack(clip, cfg)));
  return 0;
}

int run_evaluate(const std::string& model_path, const std::string& input,
                 const std::string& image_path, const std::string& label,
                 const std::string& period, const std::string& phase,
                 const std::string& mode, const AnnotatorFlags& flags,
                 const std::string& out_path, const std::string& attacked_out) {
  LabelModel model = load_model(model_path);
  VideoClip clip = load_clip(input);
  Image image = parse_ppm(read_file(image_path));
  AttackConfig cfg =
      AttackConfig::make(std::move(image), parse_decimal_seconds(period),
                         parse_decimal_seconds(phase), attack_mode_from_name(mode));

  AnnotatorConfig config = make_annotator_config(flags);
  VideoClip attacked_clip = apply_attack(clip, cfg);
  AnnotationResult baseline = annotate(clip, model, config);
  AnnotationResult attacked = annotate(attacked_clip, model, config);
  AttackMetrics metrics = evaluate({label}, attacked, baseline, cfg, clip);

  if (!attacked_out.empty()) write_file(attacked_out, write_y4m(attacked_clip));
  emit(out_path, metrics_to_json(metrics));
  return 0;
}

int run_sweep_cmd(const std::string& model_path,
                  const std::vector<std::string>& clip_args,
                  const std::vector<std::string>& image_args,
                  const std::string& periods_csv, const std::string& phases_csv,
                  const std::string& modes_csv, const std::string& defenses_csv,
                  const AnnotatorFlags& flags, const std::string& out_csv,
                  const std::string& out_json) {
  LabelModel model = load_model(model_path);

  SweepSpec spec;
  for (const std::string& arg : clip_args) {
    std::size_t eq = arg.find('=');
    std::string name = eq == std::string::npos ? path_stem(arg) : arg.substr(0, eq);
    std::string path = eq == std::string::npos ? arg : arg.substr(eq + 1);
    spec.clips.push_back({name, load_clip(path)});
  }
  for (const std::string& arg : image_args) {
    std::size_t eq = arg.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidSpec, "--image expects label=path, got: " + arg);
    }
    std::string label = arg.substr(0, eq);
    std::string path = arg.substr(eq + 1);
    spec.images.push_back({path_stem(path), label, parse_ppm(read_file(path))});
  }
  spec.periods.clear();
  for (const std::string& p : split_csv(periods_csv)) {
    spec.periods.push_back(parse_decimal_seconds(p));
  }
  spec.phases.clear();
  for (const std::string& p : split_csv(phases_csv)) {
    spec.phases.push_back(parse_decimal_seconds(p));
  }
  spec.modes.clear();
  for (const std::string& m : split_csv(modes_csv)) {
    spec.modes.push_back(attack_mode_from_name(m));
  }
  spec.defenses = split_csv(defenses_csv);

  std::vector<SweepRow> rows = run_sweep(spec, model, make_annotator_config(flags));
  emit(out_csv, sweep_to_csv(rows));
  if (!out_json.empty()) write_text(out_json, sweep_to_json(rows));
  std::cerr << "evaluated " << rows.size() << " sweep cells\n";
  return 0;
}

int run_serve(const std::string& model_path, const std::string& bind,
              std::size_t max_body, const AnnotatorFlags& flags) {
  ServiceConfig config;
  std::size_t colon = bind.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::InvalidSpec, "--bind expects host:port, got: " + bind);
  }
  config.host = bind.substr(0, colon);
  config.port = std::stoi(bind.substr(colon + 1));
  config.max_body_bytes = max_body;
  config.annotator = make_annotator_config(flags);
  config.model_path = resolve_model_path(model_path);

  AnnotationService service(std::move(config));
  service.load_model(load_model(model_path));
  std::cerr << "listening on " << bind << "\n";
  if (!service.listen()) {
    throw Error(ErrorKind::IoError, "cannot bind " + bind);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for periodic image-insertion attacks on a simulated "
               "video annotation service"};
  app.require_subcommand(1);

  // gen-corpus
  std::string gc_spec, gc_out = "corpus";
  std::uint32_t gc_seed = 7, gc_per_label = 3;
  std::string gc_attack_labels = "car,building,pasta,laptop";
  CLI::App* gen = app.add_subcommand("gen-corpus", "generate a synthetic corpus");
  gen->add_option("--spec", gc_spec, "corpus spec JSON (default: built-in 60 s clip)");
  gen->add_option("--out", gc_out, "output directory");
  CLI::Option* gc_seed_opt = gen->add_option("--seed", gc_seed, "RNG seed");
  gen->add_option("--per-label", gc_per_label, "reference images per label");
  gen->add_option("--attack-labels", gc_attack_labels,
                  "comma-separated non-scene labels to render references for");

  // train
  std::string tr_refs, tr_out = "model.json";
  double tr_temperature = 0.05;
  CLI::App* tr = app.add_subcommand("train", "train a label model from reference images");
  tr->add_option("--refs", tr_refs, "directory of <label>_<k>.ppm images")->required();
  tr->add_option("--out", tr_out, "model JSON path");
  tr->add_option("--temperature", tr_temperature, "softmax temperature");

  // annotate
  std::string an_model, an_input, an_out;
  AnnotatorFlags an_flags;
  CLI::App* an = app.add_subcommand("annotate", "annotate a Y4M clip");
  an->add_option("--model", an_model, "model JSON (or VIDSHIELD_MODEL)");
  an->add_option("--input", an_input, "input .y4m clip")->required();
  an->add_option("--out", an_out, "result JSON path (default: stdout)");
  add_annotator_flags(an, an_flags);

  // attack
  std::string at_input, at_image, at_period, at_phase = "0", at_mode = "replace",
              at_out;
  CLI::App* at = app.add_subcommand("attack", "insert an image periodically into a clip");
  at->add_option("--input", at_input, "input .y4m clip")->required();
  at->add_option("--image", at_image, "image to insert (.ppm)")->required();
  at->add_option("--period", at_period, "seconds between insertions")->required();
  at->add_option("--phase", at_phase, "offset of the first insertion (seconds)");
  at->add_option("--mode", at_mode, "replace|insert");
  at->add_option("--out", at_out, "output .y4m path")->required();

  // evaluate
  std::string ev_model, ev_input, ev_image, ev_label, ev_period, ev_phase = "0",
              ev_mode = "replace", ev_out, ev_attacked_out;
  AnnotatorFlags ev_flags;
  CLI::App* ev = app.add_subcommand(
      "evaluate", "attack a clip and compare annotations against the baseline");
  ev->add_option("--model", ev_model, "model JSON (or VIDSHIELD_MODEL)");
  ev->add_option("--input", ev_input, "input .y4m clip")->required();
  ev->add_option("--image", ev_image, "image to insert (.ppm)")->required();
  ev->add_option("--label", ev_label, "label of the inserted image")->required();
  ev->add_option("--period", ev_period, "seconds between insertions")->required();
  ev->add_option("--phase", ev_phase, "offset of the first insertion (seconds)");
  ev->add_option("--mode", ev_mode, "replace|insert");
  ev->add_option("--out", ev_out, "metrics JSON path (default: stdout)");
  ev->add_option("--attacked-out", ev_attacked_out, "write the attacked clip here");
  add_annotator_flags(ev, ev_flags);

  // sweep
  std::string sw_model, sw_periods = "0.5,1,2,4", sw_phases = "0,0.25,0.5",
              sw_modes = "replace,insert",
              sw_defenses = "none,duration,minrun:2,isolated:0.4,combo",
              sw_out_csv, sw_out_json;
  std::vector<std::string> sw_clips, sw_images;
  AnnotatorFlags sw_flags;
  CLI::App* sw = app.add_subcommand("sweep", "evaluate the attack grid");
  sw->add_option("--model", sw_model, "model JSON (or VIDSHIELD_MODEL)");
  sw->add_option("--clip", sw_clips, "clip as [name=]path (repeatable)")->required();
  sw->add_option("--image", sw_images, "image as label=path (repeatable)")->required();
  sw->add_option("--periods", sw_periods, "comma-separated seconds");
  sw->add_option("--phases", sw_phases, "comma-separated seconds");
  sw->add_option("--modes", sw_modes, "comma-separated of replace,insert");
  sw->add_option("--defenses", sw_defenses, "comma-separated defense specs");
  sw->add_option("--out-csv", sw_out_csv, "CSV path (default: stdout)");
  sw->add_option("--out-json", sw_out_json, "JSON mirror path");
  add_annotator_flags(sw, sw_flags, /*with_defense=*/false);

  // serve
  std::string se_model, se_bind = "127.0.0.1:8080";
  std::size_t se_max_body = 256ull * 1024 * 1024;
  AnnotatorFlags se_flags;
  CLI::App* se = app.add_subcommand("serve", "run the annotation HTTP service");
  se->add_option("--model", se_model, "model JSON (or VIDSHIELD_MODEL)");
  se->add_option("--bind", se_bind, "host:port");
  se->add_option("--max-body", se_max_body, "request body limit in bytes");
  add_annotator_flags(se, se_flags);

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      return run_gen_corpus(gc_spec, gc_out, gc_seed, gc_seed_opt->count() > 0,
                            gc_per_label, gc_attack_labels);
    }
    if (tr->parsed()) return run_train(tr_refs, tr_out, tr_temperature);
    if (an->parsed()) return run_annotate(an_model, an_input, an_out, an_flags);
    if (at->parsed()) {
      return run_attack(at_input, at_image, at_period, at_phase, at_mode, at_out);
    }
    if (ev->parsed()) {
      return run_evaluate(ev_model, ev_input, ev_image, ev_label, ev_period,
                          ev_phase, ev_mode, ev_flags, ev_out, ev_attacked_out);
    }
    if (sw->parsed()) {
      return run_sweep_cmd(sw_model, sw_clips, sw_images, sw_periods, sw_phases,
                           sw_modes, sw_defenses, sw_flags, sw_out_csv, sw_out_json);
    }
    if (se->parsed()) return run_serve(se_model, se_bind, se_max_body, se_flags);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
