#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "cfuse/cfusion.hpp"
#include "cfuse/numerics.hpp"
#include "cfuse/qdual.hpp"

namespace cfuse::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "cfuse-report/1";

enum ExitCode : int { kOk = 0, kParse = 1, kNotAFrame = 2, kShape = 3, kVerdictFalse = 4 };

Json tolerances_json(const Tolerances& tol);
Json bounds_json(const FrameBounds& b);
Json conditions_json(const ConditionTable& c);

/// Indented "key: value" rendering of a report for humans.
void render_text(std::ostream& out, const Json& j, int indent = 0);

}  // namespace cfuse::cli
