#include "vidshield/harness.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vidshield/error.hpp"

namespace vidshield {
namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

AttackMetrics evaluate(const std::vector<std::string>& image_labels,
                       const AnnotationResult& attacked,
                       const AnnotationResult& baseline,
                       const AttackConfig& cfg, const VideoClip& clip) {
  if (image_labels.empty()) {
    throw Error(ErrorKind::LabelSetEmpty, "image label set must be non-empty");
  }
  const std::set<std::string> label_set(image_labels.begin(), image_labels.end());

  AttackMetrics metrics;
  if (!attacked.video_labels.empty()) {
    metrics.video_label_flipped =
        label_set.count(attacked.video_labels.front().label) > 0;
    metrics.top_confidence = attacked.video_labels.front().confidence;
  }
  std::size_t dominated = 0;
  for (const Shot& shot : attacked.shots) {
    if (!shot.labels.empty() && label_set.count(shot.labels.front().label) > 0) {
      ++dominated;
    }
  }
  metrics.shot_domination =
      attacked.shots.empty()
          ? 0.0
          : static_cast<double>(dominated) / static_cast<double>(attacked.shots.size());
  metrics.insertion_rate = insertion_rate(cfg, clip);
  metrics.shot_count_baseline = baseline.shots.size();
  metrics.shot_count_attacked = attacked.shots.size();
  return metrics;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const LabelModel& model,
                                const AnnotatorConfig& base_config) {
  if (spec.clips.empty() || spec.images.empty() || spec.modes.empty() ||
      spec.periods.empty() || spec.phases.empty() || spec.defenses.empty()) {
    throw Error(ErrorKind::InvalidSpec, "sweep lists must all be non-empty");
  }

  // Parse every defense up front so a bad spec fails before any work.
  std::vector<AnnotatorConfig> defense_configs;
  defense_configs.reserve(spec.defenses.size());
  for (const std::string& defense : spec.defenses) {
    AnnotatorConfig config = base_config;
    config.aggregation = aggregation_from_string(defense);
    defense_configs.push_back(config);
  }

  std::vector<SweepRow> rows;
  for (std::size_t ci = 0; ci < spec.clips.size(); ++ci) {
    const SweepClip& clip = spec.clips[ci];

    std::vector<AnnotationResult> baselines;
    baselines.reserve(defense_configs.size());
    for (const AnnotatorConfig& config : defense_configs) {
      baselines.push_back(annotate(clip.clip, model, config));
    }

    for (const SweepImage& image : spec.images) {
      for (AttackMode mode : spec.modes) {
        for (const Seconds& period : spec.periods) {
          for (const Seconds& phase : spec.phases) {
            AttackConfig cfg = AttackConfig::make(image.image, period, phase, mode);
            VideoClip attacked_clip = apply_attack(clip.clip, cfg);
            for (std::size_t di = 0; di < spec.defenses.size(); ++di) {
              AnnotationResult attacked =
                  annotate(attacked_clip, model, defense_configs[di]);
              SweepRow row;
              row.clip = clip.name;
              row.image = image.name;
              row.mode = mode;
              row.period = period;
              row.phase = phase;
              row.defense = spec.defenses[di];
              row.metrics = evaluate({image.label}, attacked, baselines[di], cfg,
                                     clip.clip);
              rows.push_back(std::move(row));
            }
          }
        }
      }
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "clip,image,mode,period_s,phase_s,defense,flipped,top_conf,"
         "shot_domination,insertion_rate,shots_base,shots_atk\n";
  for (const SweepRow& row : rows) {
    out << row.clip << ',' << row.image << ',' << attack_mode_name(row.mode) << ','
        << fmt_double(to_double(row.period)) << ',' << fmt_double(to_double(row.phase))
        << ',' << row.defense << ',' << (row.metrics.video_label_flipped ? "true" : "false")
        << ',' << fmt_double(row.metrics.top_confidence) << ','
        << fmt_double(row.metrics.shot_domination) << ','
        << fmt_double(row.metrics.insertion_rate) << ','
        << row.metrics.shot_count_baseline << ',' << row.metrics.shot_count_attacked
        << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json metrics_fields(const AttackMetrics& m) {
  nlohmann::ordered_json j;
  j["flipped"] = m.video_label_flipped;
  j["top_conf"] = m.top_confidence;
  j["shot_domination"] = m.shot_domination;
  j["insertion_rate"] = m.insertion_rate;
  j["shots_base"] = m.shot_count_baseline;
  j["shots_atk"] = m.shot_count_attacked;
  return j;
}

}  // namespace

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    nlohmann::ordered_json r;
    r["clip"] = row.clip;
    r["image"] = row.image;
    r["mode"] = attack_mode_name(row.mode);
    r["period_s"] = to_double(row.period);
    r["phase_s"] = to_double(row.phase);
    r["defense"] = row.defense;
    for (auto& [key, value] : metrics_fields(row.metrics).items()) {
      r[key] = value;
    }
    j.push_back(r);
  }
  return j.dump(2) + "\n";
}

std::string metrics_to_json(const AttackMetrics& metrics) {
  return metrics_fields(metrics).dump(2) + "\n";
}

}  // namespace vidshield
