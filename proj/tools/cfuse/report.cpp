#include "report.hpp"

#include <string>

namespace cfuse::cli {

Json tolerances_json(const Tolerances& tol) {
  return Json{{"rank_tol", tol.rank_tol}, {"residual_tol", tol.residual_tol}, {"psd_tol", tol.psd_tol}};
}

Json bounds_json(const FrameBounds& b) {
  return Json{{"lower", b.lower},
              {"upper", b.upper},
              {"classification", std::string(to_string(b.classification))},
              {"tight", b.tight},
              {"parseval", b.parseval}};
}

Json conditions_json(const ConditionTable& c) {
  Json j;
  j["1"] = Json{{"statement", "T_G Q T_F^* = I"}, {"residual", c.residual_1}, {"holds", c.holds[0]}};
  j["2"] = Json{{"statement", "T_F Q^* T_G^* = I"}, {"residual", c.residual_2}, {"holds", c.holds[1]}};
  j["3"] = Json{{"statement", "T_F^* injective, T_G Q surjective, T_F^* T_G Q idempotent"},
                {"injective", c.injective_3},
                {"surjective", c.surjective_3},
                {"idempotence_residual", c.idempotence_residual_3},
                {"holds", c.holds[2]}};
  j["4"] = Json{{"statement", "T_G^* injective, T_F Q^* surjective, T_G^* T_F Q^* idempotent"},
                {"injective", c.injective_4},
                {"surjective", c.surjective_4},
                {"idempotence_residual", c.idempotence_residual_4},
                {"holds", c.holds[3]}};
  j["5"] = Json{{"statement", "<h, k> = <Q T_F^* h, T_G^* k> = <Q^* T_G^* h, T_F^* k>"},
                {"pairs", c.probe_pairs_5},
                {"max_error", c.probe_max_error_5},
                {"holds", c.holds[4]}};
  return j;
}

void render_text(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      render_text(out, v, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << pad << it.key() << ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << pad << "  [" << i << "]\n";
        render_text(out, v[i], indent + 4);
      }
    } else if (v.is_string()) {
      out << pad << it.key() << ": " << v.get<std::string>() << "\n";
    } else {
      out << pad << it.key() << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace cfuse::cli
