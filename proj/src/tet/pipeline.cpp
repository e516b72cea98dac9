#include <fmt/format.h>

#include "orcgrid/parallel.hpp"
#include "orcgrid/tet.hpp"

namespace orcgrid::tet {

double relative_savings(double baseline, double optimized) {
  if (!(baseline > 0.0)) return 0.0;
  return (baseline - optimized) / baseline;
}

ProsumerKpi prosumer_kpi(const MicrogridScenario& s, const sorc::SorcSchedule& sched) {
  ProsumerKpi k;
  k.id = s.id;
  k.prosumer_cost = sched.total_cost;
  for (std::size_t t = 0; t < sched.steps.size(); ++t) {
    const auto& st = sched.steps[t];
    k.market_cost += s.tariff.price_buy[t] * st.grid_import - s.tariff.price_sell[t] * st.grid_export;
    k.no_orc_cost += s.tariff.price_buy[t] * s.demand[t];
    k.grid_import_kwh += st.grid_import;
    k.grid_export_kwh += st.grid_export;
  }
  k.local_cost = k.prosumer_cost - k.market_cost;
  return k;
}

KpiReport compute_kpis(const std::vector<MicrogridScenario>& scenarios,
                       const std::vector<sorc::SorcSchedule>& schedules,
                       const ImbalanceSet& imb, const TradeClearing& clearing,
                       const TradeNetwork& net) {
  KpiReport r;
  for (std::size_t p = 0; p < scenarios.size(); ++p) {
    const auto k = prosumer_kpi(scenarios[p], schedules[p]);
    r.local_cost += k.local_cost;
    r.no_orc_cost += k.no_orc_cost;
    r.prosumers.push_back(k);
  }
  r.trading_cost = clearing.objective;
  r.grid_only_trading_cost = grid_only_cost(imb, net);
  r.trading_gain = r.grid_only_trading_cost - r.trading_cost;
  r.trading_savings = relative_savings(r.grid_only_trading_cost, r.trading_cost);
  r.community_cost = r.local_cost + r.trading_cost;
  r.savings_vs_no_orc = relative_savings(r.no_orc_cost, r.community_cost);
  r.p2p_volume_kwh = clearing.p2p_volume();
  return r;
}

PipelineResult run_pipeline(const std::vector<MicrogridScenario>& scenarios,
                            const TradeNetwork& net, const PipelineOptions& options) {
  std::vector<std::string> ids;
  for (const auto& s : scenarios) ids.push_back(s.id);
  if (ids != net.participants)
    throw std::invalid_argument("scenario ids must equal the network participants, in order");
  for (const auto& s : scenarios)
    if (s.time.horizon != scenarios.front().time.horizon ||
        s.time.step_hours != scenarios.front().time.step_hours)
      throw std::invalid_argument(
          fmt::format("prosumer '{}' has a different time grid than '{}'", s.id,
                      scenarios.front().id));

  PipelineResult out;
  out.schedules.resize(scenarios.size());
  parallel_for(scenarios.size(), options.threads, [&](std::size_t p) {
    const auto& s = scenarios[p];
    try {
      out.schedules[p] = sorc::solve_sorc(s, options.build, options.limits);
    } catch (const sorc::InfeasibleScenario& e) {
      throw PipelineError(fmt::format("stage one failed for prosumer '{}': {}", s.id, e.what()),
                          s.id, PipelineError::Kind::Infeasible, e.rows());
    } catch (const sorc::SolveFailure& e) {
      const auto kind = e.status() == milp::SolveStatus::GapLimit ? PipelineError::Kind::Limit
                                                                  : PipelineError::Kind::Other;
      throw PipelineError(fmt::format("stage one failed for prosumer '{}': {}", s.id, e.what()),
                          s.id, kind);
    }
  });
  out.imbalances = imbalances_from(out.schedules);
  out.clearing = solve_tet(out.imbalances, net, {options.threads});
  out.kpi = compute_kpis(scenarios, out.schedules, out.imbalances, out.clearing, net);
  return out;
}

}  // namespace orcgrid::tet
