#ifndef DLAP_DLAP_HPP
#define DLAP_DLAP_HPP

#include "dlap/dense.hpp"
#include "dlap/diagonalize.hpp"
#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/limits.hpp"
#include "dlap/properties.hpp"
#include "dlap/recurrence.hpp"
#include "dlap/reproduce.hpp"
#include "dlap/scalar.hpp"
#include "dlap/shearer.hpp"
#include "dlap/tree.hpp"

#endif  // DLAP_DLAP_HPP
