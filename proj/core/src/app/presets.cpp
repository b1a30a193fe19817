#include "mongeampere/app/app.hpp"
#include "mongeampere/types.hpp"

#include <map>

namespace ma::app {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table{
      {"barriers-default", R"({
  "schema": "mongeampere.barriers/1",
  "name": "default",
  "dims": [2, 3, 4, 5],
  "eps": [0.1, 0.25, 0.5]
})"},
      {"smoke", R"({
  "schema": "mongeampere.experiment/1",
  "name": "smoke",
  "problem": {
    "domain": {"kind": "unit_cube", "dim": 2},
    "f": {"kind": "constant", "value": 1},
    "g": {"kind": "zero"},
    "Lambda": 1
  },
  "levels": [{"kind": "tensor", "axis": {"kind": "uniform", "cells": 8}}],
  "checks": {}
})"},
      {"amp-square-2d", R"({
  "schema": "mongeampere.experiment/1",
  "name": "amp-square-2d",
  "problem": {
    "domain": {"kind": "unit_cube", "dim": 2},
    "f": {"kind": "constant", "value": 1},
    "g": {"kind": "zero"},
    "Lambda": 1,
    "solver": {"tol": 1e-9}
  },
  "levels": [
    {"kind": "tensor", "axis": {"kind": "uniform", "cells": 20}},
    {"kind": "tensor", "axis": {"kind": "uniform", "cells": 40}}
  ],
  "checks": {
    "amp": {"tolerance": 1e-6, "tight_depth": 0.05, "require_tighter": true},
    "modulus": {"deltas": {"lo": 0.001, "hi": 1, "count": 16}}
  }
})"},
      {"manufactured-2d", R"({
  "schema": "mongeampere.experiment/1",
  "name": "manufactured-2d",
  "problem": {
    "domain": {"kind": "unit_cube", "dim": 2},
    "f": {"kind": "constant", "value": 1},
    "g": {"kind": "quadratic", "scale": 0.5},
    "Lambda": 1,
    "solver": {"tol": 1e-10}
  },
  "levels": [{"kind": "tensor", "axis": {"kind": "uniform", "cells": 24}}],
  "checks": {
    "modulus": {},
    "sobolev": {"alpha": 1, "p": [1, 2, 4], "beta": [0, 0.5]}
  }
})"},
      {"converse-2d", R"({
  "schema": "mongeampere.experiment/1",
  "name": "converse-2d",
  "problem": {
    "domain": {"kind": "unit_cube", "dim": 2},
    "f": {"kind": "constant", "value": 1},
    "g": {"kind": "zero"},
    "Lambda": 1,
    "solver": {"tol": 1e-9}
  },
  "levels": [
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 20, "first": 0.01},
                                {"kind": "uniform", "cells": 32}]},
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 30, "first": 0.0001},
                                {"kind": "uniform", "cells": 32}]},
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 40, "first": 0.000001},
                                {"kind": "uniform", "cells": 32}]}
  ],
  "face": {"normal": [-1, 0]},
  "checks": {
    "holder": {"skip_layers": 3, "max_depth": 0.25, "samples_per_octave": 2, "alpha_range": [0.5, 1]},
    "log_probe": {"c0": 1, "range": [0, 1.2]},
    "sobolev": {"alpha": "fitted", "p": [1, 2, 4], "beta": [0, 0.5, 1]},
    "divergence": {"factor": 1.2},
    "converse": {}
  }
})"},
      {"converse-3d", R"({
  "schema": "mongeampere.experiment/1",
  "name": "converse-3d",
  "problem": {
    "domain": {"kind": "unit_cube", "dim": 3},
    "f": {"kind": "constant", "value": 1},
    "g": {"kind": "zero"},
    "Lambda": 1,
    "solver": {"tol": 1e-8}
  },
  "levels": [
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 12, "first": 0.01},
                                {"kind": "uniform", "cells": 8}, {"kind": "uniform", "cells": 8}]},
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 18, "first": 0.0001},
                                {"kind": "uniform", "cells": 8}, {"kind": "uniform", "cells": 8}]},
    {"kind": "tensor", "axes": [{"kind": "geometric", "cells": 24, "first": 0.000001},
                                {"kind": "uniform", "cells": 8}, {"kind": "uniform", "cells": 8}]}
  ],
  "face": {"normal": [-1, 0, 0]},
  "checks": {
    "holder": {"skip_layers": 3, "max_depth": 0.05, "samples_per_octave": 2, "alpha_range": [0.55, 0.8]},
    "divergence": {"p": 3, "factor": 1.2, "control_p": 2, "control_ratio": 1.05},
    "converse": {}
  }
})"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets()) names.push_back(k);
  return names;
}

std::string preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

}  // namespace ma::app
