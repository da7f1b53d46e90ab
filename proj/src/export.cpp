#include "chemotaxis/export.hpp"

#include "chemotaxis/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace chemotaxis {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) line += ',';
        line += format_number(values[i]);
    }
    return line;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> values;
    if (line.empty()) return values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        const std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        errno = 0;
        char* end = nullptr;
        const double d = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size()) {
            throw std::invalid_argument("not a number: '" + field + "'");
        }
        values.push_back(d);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

void write_curve_csv(std::ostream& out, const std::vector<EpochRecord>& curve) {
    out << kCurveHeader << '\n';
    for (const EpochRecord& r : curve) {
        out << r.epoch << ',' << format_number(r.gain) << ',' << format_number(r.mean_loss) << ','
            << format_number(r.epsilon) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const EpisodeResult& episode) {
    out << kTrajectoryHeader << '\n';
    for (const TrajectorySample& s : episode.trajectory) {
        out << format_number(s.t) << ',' << format_number(s.position.x) << ',' << format_number(s.position.y)
            << ',' << format_number(s.kappa) << ',' << format_number(s.speed) << ',' << format_number(s.c)
            << ',' << s.action << '\n';
    }
}

void write_centerline_csv(std::ostream& out, const EpisodeResult& episode, double dt) {
    out << kCenterlineHeader << '\n';
    for (std::size_t i = 0; i < episode.centerline.size(); ++i) {
        const Vec2 p = episode.centerline[i];
        out << i << ',' << format_number(static_cast<double>(episode.action_steps[i]) * dt) << ','
            << format_number(p.x) << ',' << format_number(p.y) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const CohortResult& cohort) {
    out << kSummaryHeader << '\n';
    for (std::size_t i = 0; i < cohort.gains.size(); ++i) {
        out << i << ',' << format_number(cohort.gains[i]) << '\n';
    }
    out << "mean," << format_number(cohort.mean) << '\n';
    out << "variance," << format_number(cohort.variance) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
    const std::size_t n = table.greedy.size();
    if (table.swinging.size() != n || (!table.qnet.empty() && table.qnet.size() != n)) {
        throw std::invalid_argument("comparison columns differ in length");
    }
    auto cell = [](const std::vector<double>& col, std::size_t i) {
        return col.empty() ? std::string("nan") : format_number(col[i]);
    };
    out << kCompareHeader << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << i << ',' << cell(table.qnet, i) << ',' << cell(table.greedy, i) << ',' << cell(table.swinging, i)
            << '\n';
    }
    auto stat = [&](const char* name, double (*f)(const std::vector<double>&)) {
        out << name << ',' << (table.qnet.empty() ? "nan" : format_number(f(table.qnet))) << ','
            << format_number(f(table.greedy)) << ',' << format_number(f(table.swinging)) << '\n';
    };
    stat("mean", &mean_of);
    stat("variance", &variance_of);
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace chemotaxis
