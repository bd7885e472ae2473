// Lie brackets, involutive closure and characteristic distribution of a small distribution.
#include <iostream>

#include "lsopi/lsopi.hpp"

namespace {

void print_field(const lsopi::VectorField& v, const std::vector<std::string>& names) {
  std::cout << "(";
  for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i].str(names);
  std::cout << ")\n";
}

}  // namespace

int main() {
  using namespace lsopi;
  const std::vector<std::string> x = {"x1", "x2", "x3", "x4"};
  VectorField a = {parse_normalized("1", x), parse_normalized("x3", x), parse_normalized("x4", x), Expr()};
  VectorField b = coordinate_field(4, 3);
  Sampler s;

  std::cout << "[a, b] = ";
  print_field(lie_bracket(a, b), x);

  Distribution D(4, {a, b}, {"a", "b"}, s);
  std::cout << "involutive: " << (is_involutive(D) ? "yes" : "no") << "\n";

  auto cl = involutive_closure(D, s);
  std::cout << "growth vector:";
  for (auto r : cl.growth) std::cout << " " << r;
  std::cout << "\n";

  Distribution E = add_brackets(D, D, D, s);
  std::cout << "characteristic of D + [D, D]:\n";
  for (const auto& g : characteristic(E, s).frame()) print_field(g, x);
}
