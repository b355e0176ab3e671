#pragma once

#include <string>

#include "nabla/formula.hpp"

namespace nabla {

/// Human output uses minimal parentheses; wire output parenthesizes every
/// compound term and connective so that it can be re-parsed unambiguously.
enum class Style { Human, Wire };

std::string print_term(const Term& t, Style style = Style::Human);
/// Prints a term of type g using specification-goal syntax (`A => G`, `G & G`, `pi x\ G`).
std::string print_goal(const Term& g, Style style = Style::Human);
std::string print_formula(const Formula& f, Style style = Style::Human);

}  // namespace nabla
