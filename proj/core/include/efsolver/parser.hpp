#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "efsolver/problem.hpp"

namespace efsolver {

// Reads the problem file format:
//
//   exists x1 x2 ... ;
//   forall-vars y1 y2 ... ;
//   branch y1 in [a,b], y2 in [c,d] : FORMULA ;
//   eq c1*x1 + c2*x2 + ... = d ;
//
// FORMULA is a conjunction ("and") of disjunctions ("or") of comparisons
// between arithmetic expressions over + - * / ^ sin() cos(). '#' starts a
// line comment. The atom mentioning existential variables becomes the
// branch's LinearAtom; every other atom is normalized to a GuardAtom
// `body <= 0` / `body < 0`.
//
// Throws ParseError (with line and column) on malformed input and
// UndeclaredVariable for names that were never declared.
Problem parse_problem(std::string_view text);
Problem parse_problem_file(const std::filesystem::path& path);

// Renders a problem in the same format; parse_problem(print_problem(p))
// reproduces p structurally.
std::string print_problem(const Problem& p);
std::string print_formula(const Formula& f);

}  // namespace efsolver
