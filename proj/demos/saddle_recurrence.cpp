// Chain-recurrent set of the planar saddle exp(t diag(1, -1)) at shrinking eps.
#include <lieflow/lieflow.hpp>

#include <cstdio>

int main() {
  using namespace lieflow;
  const Scenario& sc = find_scenario("plane-saddle");
  const Flow flow = sc.make_flow();
  for (double eps : {0.2, 0.1, 0.05}) {
    const ChainGraph g = build_chain_graph(flow, sc.window, sc.spacing, eps, sc.tau);
    const RecurrenceReport rec = recurrent_estimate(g);
    double radius = 0;
    for (int v : rec.recurrent) radius = std::max(radius, g.coords[v].norm());
    std::printf("eps %.3f: %d nodes, %zu edges, %zu recurrent, max |x| %.3f\n", eps, g.size(), g.edge_count(),
                rec.recurrent.size(), radius);
  }
}
