#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tangle/ensemble.hpp"
#include "tangle/fluid_solver.hpp"
#include "tangle/simulator.hpp"

namespace harness {

/// Shortest "%.10g" rendering; the same value always prints the same bytes.
std::string format_number(double x);

void ensure_directory(const std::filesystem::path& dir);

/// Header `t,L`.
void write_trajectory_csv(const std::filesystem::path& path, const tangle::SimTrajectory& traj);
/// Header `t,mean,std,min,max`.
void write_ensemble_csv(const std::filesystem::path& path, const tangle::EnsembleSummary& summary);
/// Header `t,l`.
void write_fluid_csv(const std::filesystem::path& path, const tangle::FluidGrid& grid);
/// Header `t,v,g`, one row per stored snapshot cell.
void write_fluid_grid_csv(const std::filesystem::path& path, const tangle::FluidGrid& grid);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace harness
