#ifndef GTM_CORE_SERIALIZE_HPP
#define GTM_CORE_SERIALIZE_HPP

#include <string>
#include <vector>

#include "core/bands.hpp"
#include "core/bounds.hpp"
#include "core/sns.hpp"

namespace gtm {

// Emission of the tool's file formats.  Writers accept "-" as the
// standard-output sink and raise IoError when the target cannot be
// opened or written.  Every numeric field is rendered as a decimal
// string at the value's own precision, so re-parsing reproduces the
// value and byte-identical reruns are a meaningful promise.

void write_text(const std::string& text, const std::string& path);

// CSV: level,index,lo,hi,direction
std::string bands_csv(const BandSet& bands);
void write_bands_csv(const BandSet& bands, const std::string& path);

// CSV: t,x,y,dx
std::string samples_csv(const std::vector<CurveSample>& rows);
void write_samples_csv(const std::vector<CurveSample>& rows,
                       const std::string& path);

// Nested-family JSON: metadata, per-level stats rows, the width-decay
// fit, the closed-form dimension report, and the nested interval tree.
// stats/report may be null for trees too shallow to carry them.
std::string sns_json(const SNSTree& tree, const SNSStats* stats,
                     const DimensionReport* report, long seed);
void write_sns_json(const SNSTree& tree, const SNSStats* stats,
                    const DimensionReport* report, long seed,
                    const std::string& path);

std::string inclusion_json(const InclusionReport& rep);
void write_inclusion_json(const InclusionReport& rep, const std::string& path);

std::string bounds_json(const std::vector<DimensionReport>& rows);
std::string bounds_csv(const std::vector<DimensionReport>& rows);
void write_bounds(const std::vector<DimensionReport>& rows, bool as_json,
                  const std::string& path);

} // namespace gtm

#endif // GTM_CORE_SERIALIZE_HPP
