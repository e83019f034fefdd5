#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oco/metrics.hpp"
#include "oco/oracle.hpp"
#include "oco/trace.hpp"

namespace oco {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// trace.csv: `t,rho,f_value,cum_cost,viol_norm,dual_norm,checkpoint_regret`,
/// 17 significant digits, '.' decimal, LF line endings. checkpoint_regret is
/// empty off-checkpoint.
inline void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace,
                            const std::vector<CheckpointRegret>& checkpoints) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  std::map<int, double> at;
  for (const auto& c : checkpoints) at[c.t] = c.regret;
  out << "t,rho,f_value,cum_cost,viol_norm,dual_norm,checkpoint_regret\n";
  for (int t = 1; t <= trace.horizon(); ++t) {
    const auto& r = trace.rounds[static_cast<std::size_t>(t) - 1];
    out << t << ',' << format_g17(r.rho) << ',' << format_g17(r.f_value) << ','
        << format_g17(trace.cum_cost[static_cast<std::size_t>(t) - 1]) << ','
        << format_g17(violation(trace, t)) << ',' << format_g17(norm2(r.y)) << ',';
    if (auto it = at.find(t); it != at.end()) out << format_g17(it->second);
    out << '\n';
  }
}

/// Gnuplot-ready columns: t, V(t), ||y_t||, regret at checkpoints (NaN elsewhere
/// is avoided by writing checkpoint rows only to a second block).
inline void write_plot_data(const std::filesystem::path& path, const RunTrace& trace,
                            const std::vector<CheckpointRegret>& checkpoints) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_plot_data: cannot open " + path.string());
  out << "# block 0: t viol_norm dual_norm\n";
  for (int t = 1; t <= trace.horizon(); ++t) {
    const auto& r = trace.rounds[static_cast<std::size_t>(t) - 1];
    out << t << ' ' << format_g17(violation(trace, t)) << ' ' << format_g17(norm2(r.y)) << '\n';
  }
  out << "\n\n# block 1: t checkpoint_regret\n";
  for (const auto& c : checkpoints) {
    out << c.t << ' ' << format_g17(c.regret) << '\n';
  }
}

}  // namespace oco
