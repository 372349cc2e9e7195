#include "nsdyn/cli/registry.hpp"

namespace nsdyn::cli {

namespace {

const char* kPlanarSaddle = R"cfg([system]
name = "ex-s2-1"
description = "planar system whose sliding equilibrium regularizes to a saddle"
kind = piecewise
dim = 2
h = "x2"
xplus = [ "0", "-1" ]
xminus = [ "x1", "-x2+1" ]

[transition]
phi = cubic

[experiment]
delta = 0.1,0.01,0.001
point = 0,0
range = x1=-1:1
)cfg";

const char* kSlidingCycle = R"cfg([system]
name = "ex-s2-2"
description = "3-d system whose sliding field has a focus and the cycle x1^2+x2^2=1"
kind = piecewise
dim = 3
h = "x3"
xplus = [ "0", "2*x1+2*x2*(sqrt(x1^2+x2^2)-1)", "-1" ]
xminus = [ "-2*x2+2*x1*(sqrt(x1^2+x2^2)-1)", "0", "1" ]

[transition]
phi = cubic

[experiment]
delta = 0.1,0.01,0.001
orbit_delta = 0.001
orbit_seed = 1.1,0,0
point = 0,0,0
range = x1=-1.5:1.5
section = x2
)cfg";

const char* kFoldPair = R"cfg([system]
name = "ex-exblow"
description = "sliding segment ]0,1[ between two folds on h = x1"
kind = piecewise
dim = 2
h = "x1"
xplus = [ "x2-1", "-1" ]
xminus = [ "x2", "1" ]

[transition]
phi = psi
a0 = 0
b0 = -2
coord = 2
amp = 1
width = 1

[experiment]
delta = 0.001
range = x2=-1:2
t_end = 20
x0 = -0.5,0.2
)cfg";

const char* kSlowFast = R"cfg([system]
name = "ex-ex2"
description = "non-smooth slow-fast system with eps y' = y and sliding equilibria"
kind = nsff
dim = 2
h = "x1"
F = [ "x2-1", "-1+eps" ]
G = [ "x1+x2+eps", "x2+1-eps" ]
H = "y"

[transition]
phi = psi
a0 = 0
b0 = -2
coord = 2
amp = 1
width = 1

[experiment]
eps = 0.1,0.05,0.01
point = 0,0.6180339887498949
range = x2=-1:2
y0 = 0
order_bound = 0.5
)cfg";

const char* kCombination = R"cfg([system]
name = "ex-ex1"
description = "slow-fast system with a quadratic continuous combination and two c-sliding fields"
kind = ccomb
dim = 2
h = "x1"
F = [ "x2-1+eps", "-1+eps" ]
G = [ "x2+eps", "1+eps" ]
H = "y"
xtilde = [ "lambda^2*(x2+eps)-(lambda+1)/2", "lambda^2-lambda-1+eps" ]

[transition]
phi = cubic

[experiment]
eps = 0.1,0.01
lambda = -0.6180339887498949
point = 0,0.5
range = x2=-1:3
y0 = 0
)cfg";

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = [] {
    std::vector<RegistryEntry> out;
    for (const char* text : {kPlanarSaddle, kSlidingCycle, kFoldPair, kSlowFast, kCombination}) {
      const SystemConfig cfg = parse_config(text, "<registry>");
      out.push_back({cfg.name, cfg.description, text});
    }
    return out;
  }();
  return entries;
}

const RegistryEntry* find_example(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

SystemConfig resolve_system(const std::string& name_or_path) {
  if (const RegistryEntry* e = find_example(name_or_path))
    return parse_config(e->text, e->name);
  return load_config(name_or_path);
}

}  // namespace nsdyn::cli
