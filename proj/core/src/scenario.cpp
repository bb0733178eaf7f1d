#include "cfuse/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfuse/error.hpp"

namespace cfuse {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, (path.empty() ? std::string("/") : path) + ": " + what);
}

[[noreturn]] void invariant_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InvariantError, (path.empty() ? std::string("/") : path) + ": " + what);
}

std::string at(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void require_object(const Json& j, const std::string& path, std::initializer_list<std::string_view> required,
                    std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (auto key : required) {
    if (!j.contains(std::string(key))) schema_error(at(path, key), "missing required field");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : required) known = known || key == k;
    for (auto k : optional) known = known || key == k;
    if (!known) schema_error(at(path, key), "unknown field");
  }
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

double read_real(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema_error(path, "number is not finite");
  return x;
}

Scalar read_scalar(const Json& j, Field field, const std::string& path) {
  if (field == Field::real) return Scalar(read_real(j, path), 0.0);
  if (!j.is_array() || j.size() != 2) schema_error(path, "complex entries are [re, im] pairs");
  return Scalar(read_real(j[0], at(path, 0)), read_real(j[1], at(path, 1)));
}

Vector read_vector(const Json& j, Field field, Eigen::Index n, const std::string& path) {
  require_array(j, path);
  if (static_cast<Eigen::Index>(j.size()) != n) {
    schema_error(path, "vector has length " + std::to_string(j.size()) + ", ambient_dim is " + std::to_string(n));
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = read_scalar(j[static_cast<std::size_t>(i)], field, at(path, i));
  return v;
}

std::vector<Vector> read_vector_list(const Json& j, Field field, Eigen::Index n, const std::string& path) {
  require_array(j, path);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vector(j[i], field, n, at(path, i)));
  return out;
}

Matrix read_matrix(const Json& j, Field field, const std::string& path) {
  require_array(j, path);
  if (j.empty()) schema_error(path, "matrix needs at least one row");
  const std::size_t cols = require_array(j[0], at(path, 0)).size();
  if (cols == 0) schema_error(at(path, 0), "matrix needs at least one column");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = require_array(j[r], at(path, r));
    if (row.size() != cols) schema_error(at(path, r), "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_scalar(row[c], field, at(at(path, r), c));
    }
  }
  return m;
}

std::vector<Atom> read_atoms(const Json& j, const std::string& path) {
  require_array(j, path);
  if (j.empty()) invariant_error(path, "measure space needs at least one atom");
  std::vector<Atom> atoms;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at(path, i);
    require_object(j[i], p, {"id", "mass"});
    if (!j[i]["id"].is_string()) schema_error(at(p, "id"), "expected a string");
    Atom a{j[i]["id"].get<std::string>(), read_real(j[i]["mass"], at(p, "mass"))};
    if (!(a.mass > 0.0)) invariant_error(at(p, "mass"), "atom mass must be strictly positive");
    if (!ids.insert(a.id).second) invariant_error(at(p, "id"), "duplicate atom id '" + a.id + "'");
    atoms.push_back(std::move(a));
  }
  return atoms;
}

FrameSection read_frame(const Json& j, Field field, Eigen::Index n, std::size_t atoms, const std::string& path) {
  require_object(j, path, {"fibers", "weights"});
  FrameSection f;
  const Json& fibers = require_array(j["fibers"], at(path, "fibers"));
  if (fibers.size() != atoms) schema_error(at(path, "fibers"), "need one fiber per atom");
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    const std::string p = at(at(path, "fibers"), i);
    std::vector<Vector> span = read_vector_list(fibers[i], field, n, p);
    if (span.empty()) invariant_error(p, "fiber needs at least one spanning vector");
    f.fibers.push_back(std::move(span));
  }
  const Json& weights = require_array(j["weights"], at(path, "weights"));
  if (weights.size() != atoms) schema_error(at(path, "weights"), "need one weight per atom");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = read_real(weights[i], at(at(path, "weights"), i));
    if (!(w > 0.0)) invariant_error(at(at(path, "weights"), i), "weight must be nonzero at every atom");
    f.weights.push_back(w);
  }
  return f;
}

std::vector<std::vector<Vector>> read_local_vectors(const Json& j, Field field, Eigen::Index n, std::size_t base,
                                                    std::size_t inner, const std::string& path) {
  require_array(j, path);
  if (j.size() != base) schema_error(path, "need one local frame per base atom");
  std::vector<std::vector<Vector>> out;
  for (std::size_t x = 0; x < j.size(); ++x) {
    std::vector<Vector> row = read_vector_list(j[x], field, n, at(path, x));
    if (row.size() != inner) schema_error(at(path, x), "need one vector per inner atom");
    out.push_back(std::move(row));
  }
  return out;
}

// Parse-time validation of numerically derived invariants, attributed to a path.
void validate_fibers(const FrameSection& f, const std::string& path) {
  for (std::size_t i = 0; i < f.fibers.size(); ++i) {
    try {
      (void)orthonormalize(f.fibers[i]);
    } catch (const Error& e) {
      invariant_error(at(at(path, "fibers"), i), e.what());
    }
  }
}

Json write_scalar(Scalar z, Field field) {
  if (field == Field::real) {
    if (z.imag() != 0.0) throw Error(ErrorKind::SchemaError, "real-field scenario holds a complex entry");
    return z.real();
  }
  return Json::array({z.real(), z.imag()});
}

Json write_vector(const Vector& v, Field field) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(write_scalar(v(i), field));
  return a;
}

Json write_vector_list(const std::vector<Vector>& vs, Field field) {
  Json a = Json::array();
  for (const Vector& v : vs) a.push_back(write_vector(v, field));
  return a;
}

Json write_matrix(const Matrix& m, Field field) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(write_scalar(m(r, c), field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json write_atoms(const std::vector<Atom>& atoms) {
  Json a = Json::array();
  for (const Atom& atom : atoms) a.push_back(Json{{"id", atom.id}, {"mass", atom.mass}});
  return a;
}

Json write_frame(const FrameSection& f, Field field) {
  Json fibers = Json::array();
  for (const auto& span : f.fibers) fibers.push_back(write_vector_list(span, field));
  return Json{{"fibers", std::move(fibers)}, {"weights", f.weights}};
}

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool same_bits(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(Matrix(a[i]), Matrix(b[i]))) return false;
  }
  return true;
}

bool same_bits(const std::vector<std::vector<Vector>>& a, const std::vector<std::vector<Vector>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

bool same_frame(const FrameSection& a, const FrameSection& b) {
  return same_bits(a.fibers, b.fibers) && a.weights == b.weights;
}

bool field_has_imaginary(const Matrix& m) {
  return (m.imag().array() != 0.0).any();
}

Subspace fiber_from(const std::vector<Vector>& span, const Tolerances& tol) {
  return Subspace::spanned_by(span, tol);
}

CFusionFrame frame_from(const ScenarioFile& s, const FrameSection& section, const Tolerances& tol) {
  std::vector<Subspace> fibers;
  fibers.reserve(section.fibers.size());
  for (const auto& span : section.fibers) fibers.push_back(fiber_from(span, tol));
  return CFusionFrame(scenario_space(s), std::move(fibers), WeightMap(section.weights));
}

}  // namespace

bool operator==(const ScenarioFile& a, const ScenarioFile& b) {
  if (a.version != b.version || a.field != b.field || a.ambient_dim != b.ambient_dim ||
      a.measure_space != b.measure_space || !same_frame(a.frame, b.frame)) {
    return false;
  }
  if (a.dual.has_value() != b.dual.has_value() || (a.dual && !same_frame(*a.dual, *b.dual))) return false;
  if (a.q.has_value() != b.q.has_value()) return false;
  if (a.q) {
    if (a.q->dense.has_value() != b.q->dense.has_value()) return false;
    if (a.q->dense && !same_bits(*a.q->dense, *b.q->dense)) return false;
    if (a.q->blocks.size() != b.q->blocks.size()) return false;
    for (std::size_t i = 0; i < a.q->blocks.size(); ++i) {
      const QBlock& x = a.q->blocks[i];
      const QBlock& y = b.q->blocks[i];
      if (x.from != y.from || x.to != y.to || !same_bits(x.matrix, y.matrix)) return false;
    }
  }
  if (a.local_families.has_value() != b.local_families.has_value()) return false;
  if (a.local_families) {
    const LocalSection& x = *a.local_families;
    const LocalSection& y = *b.local_families;
    if (x.inner_space != y.inner_space || !same_bits(x.frame, y.frame)) return false;
    if (x.dual.has_value() != y.dual.has_value() || (x.dual && !same_bits(*x.dual, *y.dual))) return false;
  }
  return true;
}

ScenarioFile parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                           e.what());
  }

  require_object(root, "", {"version", "field", "ambient_dim", "measure_space", "frame"},
                 {"dual", "q", "local_families"});
  ScenarioFile s;
  if (!root["version"].is_string()) schema_error("/version", "expected a string");
  s.version = root["version"].get<std::string>();
  if (s.version != kScenarioVersion) {
    schema_error("/version", "unsupported version '" + s.version + "', expected '" + std::string(kScenarioVersion) + "'");
  }
  if (!root["field"].is_string()) schema_error("/field", "expected \"real\" or \"complex\"");
  const std::string field = root["field"].get<std::string>();
  if (field == "real") {
    s.field = Field::real;
  } else if (field == "complex") {
    s.field = Field::complex;
  } else {
    schema_error("/field", "expected \"real\" or \"complex\"");
  }
  if (!root["ambient_dim"].is_number_integer()) schema_error("/ambient_dim", "expected an integer");
  const auto n = root["ambient_dim"].get<long long>();
  if (n < 1) invariant_error("/ambient_dim", "ambient dimension must be >= 1");
  s.ambient_dim = static_cast<Eigen::Index>(n);

  s.measure_space = read_atoms(root["measure_space"], "/measure_space");
  const std::size_t atoms = s.measure_space.size();
  s.frame = read_frame(root["frame"], s.field, s.ambient_dim, atoms, "/frame");
  validate_fibers(s.frame, "/frame");

  if (root.contains("dual")) {
    s.dual = read_frame(root["dual"], s.field, s.ambient_dim, atoms, "/dual");
    validate_fibers(*s.dual, "/dual");
  }

  if (root.contains("q")) {
    const Json& jq = root["q"];
    if (!jq.is_object()) schema_error("/q", "expected an object");
    if (jq.contains("dense") == jq.contains("blocks")) schema_error("/q", "give exactly one of \"dense\" or \"blocks\"");
    QSection q;
    if (jq.contains("dense")) {
      require_object(jq, "/q", {"dense"});
      q.dense = read_matrix(jq["dense"], s.field, "/q/dense");
    } else {
      require_object(jq, "/q", {"blocks"});
      const Json& blocks = require_array(jq["blocks"], "/q/blocks");
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string p = at("/q/blocks", i);
        require_object(blocks[i], p, {"from", "to", "matrix"});
        QBlock b;
        for (auto key : {"from", "to"}) {
          if (!blocks[i][key].is_string()) schema_error(at(p, key), "expected an atom id");
          const std::string id = blocks[i][key].get<std::string>();
          bool found = false;
          for (const Atom& a : s.measure_space) found = found || a.id == id;
          if (!found) schema_error(at(p, key), "unknown atom id '" + id + "'");
          (std::string_view(key) == "from" ? b.from : b.to) = id;
        }
        b.matrix = read_matrix(blocks[i]["matrix"], s.field, at(p, "matrix"));
        q.blocks.push_back(std::move(b));
      }
    }
    s.q = std::move(q);
  }

  if (root.contains("local_families")) {
    const Json& jl = root["local_families"];
    require_object(jl, "/local_families", {"inner_space", "frame"}, {"dual"});
    LocalSection l;
    l.inner_space = read_atoms(jl["inner_space"], "/local_families/inner_space");
    l.frame = read_local_vectors(jl["frame"], s.field, s.ambient_dim, atoms, l.inner_space.size(),
                                 "/local_families/frame");
    if (jl.contains("dual")) {
      if (!s.dual) schema_error("/local_families/dual", "local dual families need a \"dual\" frame section");
      l.dual = read_local_vectors(jl["dual"], s.field, s.ambient_dim, atoms, l.inner_space.size(),
                                  "/local_families/dual");
    }
    s.local_families = std::move(l);
  }
  return s;
}

std::string serialize_scenario(const ScenarioFile& s) {
  Json root;
  root["version"] = s.version;
  root["field"] = s.field == Field::real ? "real" : "complex";
  root["ambient_dim"] = s.ambient_dim;
  root["measure_space"] = write_atoms(s.measure_space);
  root["frame"] = write_frame(s.frame, s.field);
  if (s.dual) root["dual"] = write_frame(*s.dual, s.field);
  if (s.q) {
    if (s.q->dense) {
      root["q"] = Json{{"dense", write_matrix(*s.q->dense, s.field)}};
    } else {
      Json blocks = Json::array();
      for (const QBlock& b : s.q->blocks) {
        blocks.push_back(Json{{"from", b.from}, {"to", b.to}, {"matrix", write_matrix(b.matrix, s.field)}});
      }
      root["q"] = Json{{"blocks", std::move(blocks)}};
    }
  }
  if (s.local_families) {
    const LocalSection& l = *s.local_families;
    Json jl;
    jl["inner_space"] = write_atoms(l.inner_space);
    Json frame = Json::array();
    for (const auto& row : l.frame) frame.push_back(write_vector_list(row, s.field));
    jl["frame"] = std::move(frame);
    if (l.dual) {
      Json dual = Json::array();
      for (const auto& row : *l.dual) dual.push_back(write_vector_list(row, s.field));
      jl["dual"] = std::move(dual);
    }
    root["local_families"] = std::move(jl);
  }
  return root.dump(2) + "\n";
}

ScenarioFile read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void write_scenario_file(const std::filesystem::path& path, const ScenarioFile& s) {
  const std::string text = serialize_scenario(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

MeasureSpace scenario_space(const ScenarioFile& s) {
  return MeasureSpace(s.measure_space);
}

CFusionFrame scenario_frame(const ScenarioFile& s, const Tolerances& tol) {
  return frame_from(s, s.frame, tol);
}

CFusionFrame scenario_dual(const ScenarioFile& s, const Tolerances& tol) {
  if (!s.dual) throw Error(ErrorKind::SchemaError, "/dual: scenario has no dual frame section");
  return frame_from(s, *s.dual, tol);
}

QOperator scenario_q(const ScenarioFile& s, const CFusionFrame& f, const CFusionFrame& g) {
  if (!s.q) throw Error(ErrorKind::SchemaError, "/q: scenario has no Q operator");
  if (s.q->dense) {
    QOperator q(*s.q->dense);
    q.check_shape(f, g);
    return q;
  }
  QOperator q = QOperator::zero(f, g);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < s.q->blocks.size(); ++i) {
    const QBlock& b = s.q->blocks[i];
    const std::size_t from = f.space().index_of(b.from);
    const std::size_t to = g.space().index_of(b.to);
    if (!seen.insert({from, to}).second) {
      throw Error(ErrorKind::SchemaError, "/q/blocks/" + std::to_string(i) + ": duplicate block");
    }
    try {
      q.set_block(f, g, from, to, b.matrix);
    } catch (const Error& e) {
      throw Error(ErrorKind::ShapeMismatch, "/q/blocks/" + std::to_string(i) + ": block is " +
                                                std::to_string(b.matrix.rows()) + "x" +
                                                std::to_string(b.matrix.cols()) + ", expected " +
                                                std::to_string(g.fiber(to).dim()) + "x" +
                                                std::to_string(f.fiber(from).dim()));
    }
  }
  return q;
}

LocalFrameFamily scenario_local_family(const ScenarioFile& s, bool dual, const Tolerances& tol) {
  if (!s.local_families) throw Error(ErrorKind::SchemaError, "/local_families: scenario has no local families");
  const LocalSection& l = *s.local_families;
  if (dual && !l.dual) throw Error(ErrorKind::SchemaError, "/local_families/dual: no local dual family");
  const CFusionFrame owner = dual ? scenario_dual(s, tol) : scenario_frame(s, tol);
  return LocalFrameFamily(owner.space(), MeasureSpace(l.inner_space), owner.fibers(), dual ? *l.dual : l.frame, tol);
}

ScenarioFile make_scenario(const CFusionFrame& f, const CFusionFrame* g, const QOperator* q) {
  ScenarioFile s;
  s.ambient_dim = f.ambient_dim();
  s.measure_space = f.space().atoms();

  auto section = [](const CFusionFrame& frame) {
    FrameSection out;
    for (const Subspace& fiber : frame.fibers()) {
      std::vector<Vector> span;
      for (Eigen::Index j = 0; j < fiber.dim(); ++j) span.emplace_back(fiber.basis().col(j));
      out.fibers.push_back(std::move(span));
    }
    out.weights = frame.weights().values();
    return out;
  };

  bool complex_entries = field_has_imaginary(synthesis_matrix(f));
  s.frame = section(f);
  if (g) {
    if (!share_domain(f, *g)) throw Error(ErrorKind::ShapeMismatch, "frames must share measure space and dimension");
    s.dual = section(*g);
    complex_entries = complex_entries || field_has_imaginary(synthesis_matrix(*g));
    if (q) {
      q->check_shape(f, *g);
      QSection qs;
      for (std::size_t to = 0; to < g->size(); ++to) {
        for (std::size_t from = 0; from < f.size(); ++from) {
          const Matrix b = q->block(f, *g, from, to);
          if ((b.array() == Scalar(0.0)).all()) continue;
          qs.blocks.push_back({f.space().atom(from).id, g->space().atom(to).id, b});
        }
      }
      complex_entries = complex_entries || field_has_imaginary(q->matrix());
      s.q = std::move(qs);
    }
  }
  s.field = complex_entries ? Field::complex : Field::real;
  return s;
}

DiskExample build_disk_example(double mass1, double mass2) {
  if (!(mass1 > 1.0) || !(mass2 >= mass1) || !std::isfinite(mass2)) {
    throw Error(ErrorKind::ConstraintViolation, "disk example requires 1 < mass1 <= mass2");
  }
  MeasureSpace x({{"B1", mass1}, {"B2", mass2}});
  WeightMap v({1.0 / std::sqrt(mass1), 1.0 / std::sqrt(mass2)});
  const Subspace w1 = Subspace::coordinate_axis(2, 0);
  const Subspace w2 = Subspace::coordinate_axis(2, 1);
  CFusionFrame f(x, {w1, w2}, v);
  CFusionFrame g(x, {w2, w1}, v);
  QOperator q = QOperator::zero(f, g);
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  q.set_block(f, g, 1, 0, one);  // e2-coordinate at B2 -> G(B1) = span{e2}
  q.set_block(f, g, 0, 1, one);  // e1-coordinate at B1 -> G(B2) = span{e1}
  return {std::move(f), std::move(g), std::move(q)};
}

ScenarioFile disk_example_scenario(double mass1, double mass2) {
  const DiskExample d = build_disk_example(mass1, mass2);
  return make_scenario(d.frame, &d.dual, &d.q);
}

}  // namespace cfuse
