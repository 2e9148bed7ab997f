// Lambda over every subset of the two counterexample additions, for all
// three routing paradigms, followed by the supermodularity verdicts.

#include <iomanip>
#include <iostream>

#include "netdesign.hpp"

namespace nd = netdesign;

int main() {
  std::cout << std::fixed << std::setprecision(4);
  for (const char* costing : {"mc", "greenshields"}) {
    const nd::CandidateSet cs = *nd::materialize("counterexample", {{"costing", costing}}).candidates;
    const auto routings = std::string(costing) == "mc" ? std::vector<nd::Routing>{nd::Routing::MC}
                                                       : std::vector<nd::Routing>{nd::Routing::SO, nd::Routing::UE};
    for (nd::Routing r : routings) {
      nd::LambdaTable table(cs, r);
      const nd::PropertyReport rep = nd::check_supermodularity(table);
      std::cout << nd::to_string(r) << ":";
      for (nd::Subset s = 0; s <= cs.ground_set(); ++s) std::cout << "  " << cs.label(s) << "=" << table(s);
      std::cout << "\n  supermodular: " << (rep.holds ? "holds" : "violated");
      if (!rep.holds) {
        const nd::Witness& w = rep.witnesses.front();
        std::cout << " at A=" << cs.label(w.a) << ", B=" << cs.label(w.b) << ", x=" << cs.names[*w.x]
                  << " (" << w.lhs << " < " << w.rhs << ")";
      }
      std::cout << "\n";
    }
  }
}
