#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "liqsched/cost.hpp"
#include "liqsched/envelope.hpp"
#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"

namespace liqsched {

/// File-level problem (missing, unreadable, malformed). Maps to exit 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pattern files: JSON object {kind, times[], depth[], resilience[], horizon,
/// eta0, target} or CSV with "# key=value" metadata lines followed by a
/// time,depth,resilience table. Dispatch is by extension, with a JSON sniff
/// as a fallback.
RawPattern load_pattern(const std::string& path);
RawPattern parse_pattern_json(const std::string& text);
RawPattern parse_pattern_csv(const std::string& text);

/// Schedule files for the cost subcommand: JSON {atoms:[{t,size}]} with an
/// optional path {times[],x[]}, or CSV with t,X columns (the schedule series
/// CSV emitted by this tool is accepted as-is).
Schedule load_schedule(const std::string& path);

std::string schedule_to_json(const Schedule& schedule, const CostReport& report);
std::string cost_report_to_json(const CostReport& report, const std::vector<double>& foc_times,
                                const std::vector<double>& foc_residuals, bool with_foc);

/// Time-series CSV with the documented columns
/// t,delta,r,rho,lambda,lambda_tilde,kappa_tilde,frontier,X,eta.
std::string schedule_series_csv(const LiquidityPattern& pattern, const SampledPattern& sampled,
                                const EnvelopeResult& envelope, const Schedule& schedule,
                                const std::vector<double>& markup);

/// Envelope CSV with columns k,Lambda_tilde,Lambda_hat,density.
std::string envelope_series_csv(const EnvelopeResult& envelope);

/// Signal CSV with columns t,L_star.
std::string signal_series_csv(std::span<const double> times, std::span<const double> lstar);

std::string read_file(const std::string& path);
void write_output(const std::string& output_path, const std::string& content);

}  // namespace liqsched
