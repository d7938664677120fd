#pragma once

#include "occnav/detect.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace occnav {

enum class LabelKind { TruePositive, FalsePositive, Overlap };

std::string_view to_string(LabelKind kind);

struct DetectionLabel {
  LabelKind kind = LabelKind::TruePositive;
  InvisibleHuman detection;
};

/// FalsePositive: centre cell occupied. Overlap: centre free, h_rad disc touches an
/// occupied cell. TruePositive otherwise.
std::vector<DetectionLabel> label_detections(const OccupancyGrid& grid,
                                             std::span<const InvisibleHuman> detections,
                                             double h_rad);

struct AccuracyRow {
  int map_index = 0;
  std::uint64_t map_seed = 0;
  std::uint64_t map_fingerprint = 0;
  double corridor_width = 0.0;
  Pose2D pose;
  int true_positive = 0;
  int false_positive = 0;
  int overlap = 0;

  int total() const { return true_positive + false_positive + overlap; }
};

struct AccuracyCounts {
  int true_positive = 0;
  int false_positive = 0;
  int overlap = 0;

  int total() const { return true_positive + false_positive + overlap; }
  /// TP / total; NaN when there are no detections.
  double accuracy() const;
  /// (TP + Overlap) / total; NaN when there are no detections.
  double accuracy_with_overlap() const;
};

struct BenchOptions {
  int width = 64;   // cells
  int height = 64;  // cells
  double resolution = 0.1;
  double corridor_min = 1.0;  // m
  double corridor_max = 2.0;  // m
  double min_clearance = 0.5; // robot pose clearance, m
  DetectionParams detection;
  ScanConfig scan;
};

struct AccuracyReport {
  std::uint64_t seed = 0;
  BenchOptions options;
  std::vector<AccuracyRow> rows;
  AccuracyCounts aggregate;
};

/// One seeded maze per map, one random free pose per maze, detect, label.
AccuracyReport accuracy_experiment(int n_maps, std::uint64_t seed, const BenchOptions& options = {});

/// Per-map rows then an aggregate row; '#' comment lines describe the labeling.
void write_accuracy_csv(const AccuracyReport& report, std::ostream& out);

}  // namespace occnav
