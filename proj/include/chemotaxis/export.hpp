#pragma once

#include "chemotaxis/episodes.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemotaxis {

// Fixed CSV headers.
inline constexpr const char* kCurveHeader = "epoch,gain,mean_loss,epsilon";
inline constexpr const char* kTrajectoryHeader = "t,x,y,kappa,v,c,action";
inline constexpr const char* kCenterlineHeader = "index,t,x,y";
inline constexpr const char* kSummaryHeader = "cell,gain";
inline constexpr const char* kCompareHeader = "cell,qnet,greedy,swinging";

// 17 significant digits; nan/inf spelled "nan", "inf", "-inf".
std::string format_number(double value);

// Comma-separated row and its exact inverse.
std::string format_row(std::span<const double> values);
std::vector<double> parse_row(const std::string& line);

void write_curve_csv(std::ostream& out, const std::vector<EpochRecord>& curve);
void write_trajectory_csv(std::ostream& out, const EpisodeResult& episode);
void write_centerline_csv(std::ostream& out, const EpisodeResult& episode, double dt);
// cell,gain rows followed by "mean,<m>" and "variance,<v>" footer rows
void write_summary_csv(std::ostream& out, const CohortResult& cohort);

struct ComparisonTable {
    std::vector<double> qnet;
    std::vector<double> greedy;
    std::vector<double> swinging;
};
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);

// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_file(const std::string& path, const std::string& text);

}  // namespace chemotaxis
