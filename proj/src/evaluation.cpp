#include "occnav/evaluation.hpp"

#include "occnav/distance_field.hpp"
#include "occnav/maze.hpp"
#include "occnav/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace occnav {

std::string_view to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::TruePositive: return "TruePositive";
    case LabelKind::FalsePositive: return "FalsePositive";
    case LabelKind::Overlap: return "Overlap";
  }
  return "?";
}

std::vector<DetectionLabel> label_detections(const OccupancyGrid& grid,
                                             std::span<const InvisibleHuman> detections,
                                             double h_rad) {
  std::vector<DetectionLabel> labels;
  labels.reserve(detections.size());
  for (const auto& d : detections) {
    LabelKind kind = LabelKind::TruePositive;
    if (is_occupied(grid, d.position))
      kind = LabelKind::FalsePositive;
    else if (circle_overlaps(grid, d.position, h_rad))
      kind = LabelKind::Overlap;
    labels.push_back({kind, d});
  }
  return labels;
}

double AccuracyCounts::accuracy() const {
  return total() == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : static_cast<double>(true_positive) / total();
}

double AccuracyCounts::accuracy_with_overlap() const {
  return total() == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : static_cast<double>(true_positive + overlap) / total();
}

namespace {

Pose2D random_free_pose(const OccupancyGrid& grid, const DistanceField& field, double clearance, Rng& rng) {
  std::vector<CellIndex> free;
  for (int cy = 0; cy < grid.height(); ++cy)
    for (int cx = 0; cx < grid.width(); ++cx)
      if (!grid.occupied(cx, cy) && field.at_cell(cx, cy) >= clearance) free.emplace_back(cx, cy);
  if (free.empty()) throw std::runtime_error("bench: maze has no cell with the required clearance");
  const CellIndex c = free[rng.index(free.size())];
  const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return {grid.cell_center(c.x(), c.y()), heading};
}

}  // namespace

AccuracyReport accuracy_experiment(int n_maps, std::uint64_t seed, const BenchOptions& options) {
  if (n_maps < 1) throw std::invalid_argument("bench: need at least one map");
  if (!(options.corridor_min > 0.0) || options.corridor_max < options.corridor_min)
    throw std::invalid_argument("bench: bad corridor width range");
  options.detection.validate();
  options.scan.validate();

  AccuracyReport report;
  report.seed = seed;
  report.options = options;
  for (int i = 0; i < n_maps; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    AccuracyRow row;
    row.map_index = i;
    row.map_seed = rng.next();
    row.corridor_width = rng.uniform(options.corridor_min, options.corridor_max);
    const OccupancyGrid grid =
        generate_maze(row.map_seed, options.width, options.height, row.corridor_width, options.resolution);
    row.map_fingerprint = grid.fingerprint();
    const DistanceField field(grid);
    row.pose = random_free_pose(grid, field, options.min_clearance, rng);

    const Detection det = detect(grid, row.pose, options.detection, options.scan);
    for (const auto& l : label_detections(grid, det.humans, options.detection.h_rad)) {
      switch (l.kind) {
        case LabelKind::TruePositive: ++row.true_positive; break;
        case LabelKind::FalsePositive: ++row.false_positive; break;
        case LabelKind::Overlap: ++row.overlap; break;
      }
    }
    report.aggregate.true_positive += row.true_positive;
    report.aggregate.false_positive += row.false_positive;
    report.aggregate.overlap += row.overlap;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

std::string ratio(double v) { return std::isnan(v) ? std::string("NA") : fmt::format("{:.6f}", v); }

}  // namespace

void write_accuracy_csv(const AccuracyReport& report, std::ostream& out) {
  const auto& o = report.options;
  out << "# automated grid-geometric labels: FalsePositive = centre cell occupied, "
         "Overlap = centre free but body disc touches an occupied cell\n";
  out << fmt::format("# seed={} maps={} size={}x{} resolution={} corridor=[{},{}] full_disc_check={}\n",
                     report.seed, report.rows.size(), o.width, o.height, o.resolution, o.corridor_min,
                     o.corridor_max, o.detection.full_disc_check ? "true" : "false");
  out << "map,map_seed,fingerprint,corridor_width,x,y,theta,detections,true_positive,false_positive,"
         "overlap,accuracy,accuracy_with_overlap\n";
  for (const auto& r : report.rows) {
    const AccuracyCounts c{r.true_positive, r.false_positive, r.overlap};
    out << fmt::format("{},{},{:016x},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{},{},{}\n", r.map_index,
                       r.map_seed, r.map_fingerprint, r.corridor_width, r.pose.position.x(),
                       r.pose.position.y(), r.pose.heading, r.total(), r.true_positive,
                       r.false_positive, r.overlap, ratio(c.accuracy()), ratio(c.accuracy_with_overlap()));
  }
  const auto& a = report.aggregate;
  out << fmt::format("all,,,,,,,{},{},{},{},{},{}\n", a.total(), a.true_positive, a.false_positive,
                     a.overlap, ratio(a.accuracy()), ratio(a.accuracy_with_overlap()));
}

}  // namespace occnav
