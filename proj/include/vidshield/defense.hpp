#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vidshield/labeler.hpp"

namespace vidshield {

struct Shot;  // annotator.hpp

struct DefenseParams {
  std::size_t min_run = 2;      // consecutive samples sharing a top label
  double isolation_kappa = 0.4; // L1 neighborhood radius
};

enum class AggregationMode { CountWeighted, DurationWeighted };

// How the annotator aggregates sampled evidence into labels. The two filters
// run before shot detection (isolated-frame rejection first, then min-run);
// the mode decides how video labels are scored afterwards.
struct AggregationSpec {
  AggregationMode mode = AggregationMode::CountWeighted;
  bool reject_isolated = false;
  bool min_run_filter = false;
  DefenseParams params;
};

// "none" | "duration" | "minrun:<m>" | "isolated:<kappa>" | "combo".
// Throws Error{InvalidSpec} on anything else.
AggregationSpec aggregation_from_string(const std::string& text);
std::string aggregation_to_string(const AggregationSpec& spec);

struct FilterResult {
  std::vector<std::size_t> kept;  // indices into the sample sequence, ascending
  bool fail_open = false;
};

// A sample survives iff it sits in a maximal run of >= m consecutive samples
// sharing one top label. An empty survivor set falls back to the unfiltered
// input with fail_open set.
FilterResult filter_min_run(std::span<const std::string> top_labels, std::size_t m);

// Rejects sample i (interior only) iff its two neighbors are within kappa of
// each other while sample i is farther than kappa from both: an outlier
// between two mutually similar samples. Fewer than 3 samples pass unchanged.
FilterResult reject_isolated_frames(std::span<const FeatureVector> features,
                                    double kappa);

// Video-level scores from annotated shots:
//   score(l) = sum over shots with top label l of duration * top confidence,
// normalized by total duration, ranked (score desc, label asc).
std::vector<LabelScore> aggregate_duration_weighted(const std::vector<Shot>& shots);

}  // namespace vidshield
