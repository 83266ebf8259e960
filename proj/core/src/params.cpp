#include "qflow/params.hpp"

#include "qflow/errors.hpp"

namespace qflow {

Parameters transition_parameters(double Ltilde) {
  Parameters p;
  if (!(Ltilde > 0))
    throw ConfigError("ltilde must be positive");
  p.Ltilde = Ltilde;
  p.A = p.B * p.B / (27.0 * p.C);
  return p;
}

Parameters parameter_preset(const std::string& name) {
  if (name == "transition-L0.05") return transition_parameters(0.05);
  if (name == "transition-L0.01") return transition_parameters(0.01);
  throw ConfigError("unknown parameter preset '" + name +
                    "' (available: transition-L0.05, transition-L0.01)");
}

}  // namespace qflow
