#include "harness/output.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "harness/experiment_config.hpp"

namespace harness {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const tangle::SimTrajectory& traj) {
  auto out = open_for_write(path);
  out << "t,L\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_number(traj.times[k]) << ',' << traj.tips[k] << '\n';
  }
  finish(out, path);
}

void write_ensemble_csv(const std::filesystem::path& path,
                        const tangle::EnsembleSummary& summary) {
  auto out = open_for_write(path);
  out << "t,mean,std,min,max\n";
  for (std::size_t k = 0; k < summary.times.size(); ++k) {
    out << format_number(summary.times[k]) << ',' << format_number(summary.mean[k]) << ','
        << format_number(summary.stddev[k]) << ',' << format_number(summary.min[k]) << ','
        << format_number(summary.max[k]) << '\n';
  }
  finish(out, path);
}

void write_fluid_csv(const std::filesystem::path& path, const tangle::FluidGrid& grid) {
  auto out = open_for_write(path);
  out << "t,l\n";
  for (std::size_t n = 0; n < grid.l.size(); ++n) {
    out << format_number(grid.step * static_cast<double>(n)) << ',' << format_number(grid.l[n])
        << '\n';
  }
  finish(out, path);
}

void write_fluid_grid_csv(const std::filesystem::path& path, const tangle::FluidGrid& grid) {
  auto out = open_for_write(path);
  out << "t,v,g\n";
  for (const auto& snap : grid.snapshots) {
    for (std::size_t i = 0; i < snap.g.size(); ++i) {
      out << format_number(snap.t) << ',' << format_number(grid.step * static_cast<double>(i))
          << ',' << format_number(snap.g[i]) << '\n';
    }
  }
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace harness
