/**
 * @file symcore.hpp
 * @brief Exact symbolic core: polynomials, rational functions, parsing.
 */
#ifndef LSOPI_SYMCORE_HPP
#define LSOPI_SYMCORE_HPP

#include "lsopi/expr.hpp"
#include "lsopi/parser.hpp"
#include "lsopi/poly.hpp"

#endif  // LSOPI_SYMCORE_HPP
