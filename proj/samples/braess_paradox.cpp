// Solves the four-node paradox network with and without the v->w shortcut
// and prints what each routing paradigm reports.

#include <iostream>

#include "netdesign.hpp"

namespace nd = netdesign;

int main() {
  for (const char* with_edge : {"false", "true"}) {
    const nd::Instance inst = nd::materialize("braess", {{"with_edge", with_edge}}).instance;
    const nd::SolveResult ue = nd::solve_ue(inst);
    const nd::SolveResult so = nd::solve_so(inst);
    std::cout << "with_edge=" << with_edge << "\n";
    std::cout << "  UE total " << ue.total_cost << ", per user " << ue.per_trip_cost[0] << "\n";
    for (const auto& pf : ue.assignment.path_flows) std::cout << "    " << pf.path.key() << ": " << pf.flow << "\n";
    std::cout << "  SO total " << so.total_cost << "\n";
    std::cout << "  price of anarchy " << ue.total_cost / so.total_cost << "\n";
  }
}
