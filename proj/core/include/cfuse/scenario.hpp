#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfuse/cfusion.hpp"
#include "cfuse/localglue.hpp"
#include "cfuse/qdual.hpp"

namespace cfuse {

/// Mandatory version tag of .cfuse.json scenario files.
inline constexpr std::string_view kScenarioVersion = "cfuse-scenario/1";
inline constexpr std::string_view kScenarioExtension = ".cfuse.json";

enum class Field { real, complex };

struct FrameSection {
  /// Spanning vectors of each fiber, one list per atom.
  std::vector<std::vector<Vector>> fibers;
  std::vector<double> weights;
};

struct QBlock {
  std::string from;  // atom id in F
  std::string to;    // atom id in G
  Matrix matrix;     // dim G(to) x dim F(from)
};

/// Exactly one of `dense` or `blocks` is used.
struct QSection {
  std::optional<Matrix> dense;
  std::vector<QBlock> blocks;
};

struct LocalSection {
  std::vector<Atom> inner_space;
  std::vector<std::vector<Vector>> frame;  // [base atom][inner atom]
  std::optional<std::vector<std::vector<Vector>>> dual;
};

/// In-memory form of a .cfuse.json document. Values are kept exactly as
/// written so that serialize(parse(text)) reproduces them bit for bit.
struct ScenarioFile {
  std::string version{kScenarioVersion};
  Field field = Field::real;
  Eigen::Index ambient_dim = 0;
  std::vector<Atom> measure_space;
  FrameSection frame;
  std::optional<FrameSection> dual;
  std::optional<QSection> q;
  std::optional<LocalSection> local_families;
};

bool operator==(const ScenarioFile& a, const ScenarioFile& b);

/// Strict parse: unknown fields are rejected. Throws ParseError (with
/// line:column), SchemaError (with a JSON pointer to the offending field) or
/// InvariantError (domain invariant, e.g. a zero weight).
ScenarioFile parse_scenario(std::string_view text);

/// Pretty-printed JSON, shortest round-trip decimal for every double.
/// Throws SchemaError if a real-field scenario carries imaginary parts.
std::string serialize_scenario(const ScenarioFile& s);

ScenarioFile read_scenario_file(const std::filesystem::path& path);
void write_scenario_file(const std::filesystem::path& path, const ScenarioFile& s);

MeasureSpace scenario_space(const ScenarioFile& s);
CFusionFrame scenario_frame(const ScenarioFile& s, const Tolerances& tol = {});
/// Throws SchemaError when the scenario has no "dual" section.
CFusionFrame scenario_dual(const ScenarioFile& s, const Tolerances& tol = {});
/// Throws SchemaError when absent, ShapeMismatch when blocks do not fit.
QOperator scenario_q(const ScenarioFile& s, const CFusionFrame& f, const CFusionFrame& g);
/// Local family for the frame fibers (dual = false) or the dual fibers.
LocalFrameFamily scenario_local_family(const ScenarioFile& s, bool dual, const Tolerances& tol = {});

/// Scenario holding F (and optionally G and Q as nonzero blocks) with fiber
/// bases as spanning vectors.
ScenarioFile make_scenario(const CFusionFrame& f, const CFusionFrame* g = nullptr, const QOperator* q = nullptr);

struct DiskExample {
  CFusionFrame frame;
  CFusionFrame dual;
  QOperator q;
};

/// Two-region partition of the unit disk in R^2 reduced to two atoms of
/// Lebesgue masses (mass1, mass2): F = (span{e1}, span{e2}), G swapped,
/// v_i = 1/sqrt(mass_i), Q the coordinate swap. Requires 1 < mass1 <= mass2,
/// otherwise ConstraintViolation.
DiskExample build_disk_example(double mass1, double mass2);
ScenarioFile disk_example_scenario(double mass1, double mass2);

}  // namespace cfuse
