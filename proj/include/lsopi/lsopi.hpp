/**
 * @file lsopi.hpp
 * @brief Core library: algebra, distributions and the prolongation engine.
 *
 * system_io.hpp (yaml-cpp) and report.hpp (nlohmann json) are opt-in.
 */
#ifndef LSOPI_LSOPI_HPP
#define LSOPI_LSOPI_HPP

#include "lsopi/symcore.hpp"
#include "lsopi/funlinalg.hpp"
#include "lsopi/geometry.hpp"
#include "lsopi/engine.hpp"
#include "lsopi/oracle.hpp"

#endif  // LSOPI_LSOPI_HPP
