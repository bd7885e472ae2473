// Runs the algorithm on the four-state chained form and prints the trace.
#include <iostream>

#include "lsopi/lsopi.hpp"
#include "lsopi/report.hpp"

int main() {
  using namespace lsopi;
  const std::vector<std::string> x = {"x1", "x2", "x3", "x4"};
  auto field = [&](std::vector<std::string> v) {
    VectorField out;
    for (const auto& e : v) out.push_back(parse_normalized(e, x));
    return out;
  };
  ControlSystem sys{"chained", x, field({"0", "0", "0", "0"}), field({"1", "x3", "x4", "0"}),
                    field({"0", "0", "0", "1"})};
  std::cout << report_text(run_lsopi(sys), true);
}
