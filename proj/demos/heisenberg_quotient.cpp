// Quotient of the Heisenberg saddle by its center, and lifting a quotient
// chain back to the group.
#include <lieflow/lieflow.hpp>

#include <cstdio>

int main() {
  using namespace lieflow;
  const Scenario& sc = find_scenario("heis-saddle");
  const Flow flow = sc.make_flow();
  Mat center = Mat::Zero(3, 1);
  center(2, 0) = 1;
  const QuotientMap qm(flow, center);
  std::printf("quotient dim %d, intertwining residual %.2e\n", qm.quotient_dim(), qm.intertwining_residual(200, 2.0));

  const double eps = homo_witness(qm, 0.3, 100);
  std::printf("quotient eps that lifts into a 0.3-ball: %.4f\n", eps);

  const Flow& q = qm.induced_flow();
  const ChainGraph g = build_chain_graph(q, Window::cube(2, 2.0), 0.1, eps, sc.tau);
  const int origin = nearest_node(g, Vec::Zero(2));
  const SccResult scc = strongly_connected_components(g);
  std::vector<int> cycle;
  for (int w : scc.classes[scc.component[origin]])
    if (w != origin) {
      cycle = shortest_path(g, origin, w);
      const auto back = shortest_path(g, w, origin);
      cycle.insert(cycle.end(), back.begin() + 1, back.end());
      break;
    }
  if (cycle.empty()) {
    std::printf("origin has no cycle through another node\n");
    return 1;
  }
  const LiftedChain lifted = lift_chain(qm, extract_chain(g, cycle), 0.3);
  const auto check = validate_chain(flow, lifted.chain, 0.3, sc.tau);
  std::printf("lifted %d jumps, max residual %.4f, valid %s\n", lifted.chain.jumps(), check.max_residual,
              check.valid ? "yes" : "no");
}
