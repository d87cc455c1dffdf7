#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace vdet {

enum class Figure { fig1 = 1, fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9 };

/// "fig1".."fig9" or "1".."9"; ConfigError otherwise.
Figure parse_figure(const std::string& id);

/// Column schema of each figure's CSV.
const char* figure_columns(Figure f);

/// Whether the figure reads a run bundle, a sweep directory, or neither.
enum class FigureSource { none, bundle, sweep };
FigureSource figure_source(Figure f);

struct FigureInput {
  std::optional<std::filesystem::path> path;  ///< bundle or sweep directory
  double field = 1.1;                         ///< field for the analytic figures
};

/// Tidy CSV text for a figure:
///   fig1 s,V1,V2,E_over_4          separated potentials at `field`
///   fig2 curve,x,y                 entry, exit and eta0 boundaries of the barrier region
///   fig3 t,field,D_in,D_exit       entry/exit fluxes of a run
///   fig4 e0,tau_exit,tau_tsub      sweep
///   fig5 t,field,D_rho,D_phi,D     entry line integrals of a run
///   fig6 e0,v_avg                  sweep
///   fig7 t,xi_q,xi_c,xi_cc         trajectories of a run
///   fig8 e0,v_exit                 sweep
///   fig9 field,E,beta1,beta2       Stark closure over field strength
std::string emit_figure(Figure f, const FigureInput& in);

}  // namespace vdet
